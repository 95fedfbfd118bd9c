import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pnp_repeater.core import KM, MS, ChannelModel, RepeaterConfig, TimingModel, success_probability, timing


def test_success_probability_defaults():
    ch = ChannelModel()
    # 0.2 * 10**-0.5, evaluated at 40 digits
    assert success_probability(ch, 50 * KM) == pytest.approx(0.06324555320336759, rel=1e-14)
    assert success_probability(ch, 100 * KM) == pytest.approx(0.02, rel=1e-14)
    assert success_probability(ch, 1e-9) == pytest.approx(0.2, rel=1e-12)


def test_success_probability_override():
    ch = ChannelModel(ps_override=0.37)
    assert success_probability(ch, 10 * KM) == 0.37
    assert success_probability(ch, 1e4 * KM) == 0.37


@pytest.mark.parametrize("l0", [0.0, -1.0, float("nan")])
def test_success_probability_rejects_bad_length(l0):
    with pytest.raises(ValueError):
        success_probability(ChannelModel(), l0)


@given(st.floats(1.0, 1e7), st.floats(1.0, 1e7))
def test_success_probability_decreasing(a, b):
    if a == b:
        return
    lo, hi = sorted((a, b))
    ch = ChannelModel()
    p_lo, p_hi = success_probability(ch, lo), success_probability(ch, hi)
    assert 0 < p_hi <= p_lo <= 1
    if p_lo > 0 and hi - lo > 1e-6 * hi:
        assert p_hi < p_lo


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(c=0),
        dict(alpha=-1),
        dict(ps_prefactor=0),
        dict(ps_prefactor=1.5),
        dict(ps_override=0.0),
        dict(ps_override=2.0),
    ],
)
def test_channel_validation(kwargs):
    with pytest.raises(ValueError):
        ChannelModel(**kwargs)


def test_timing_examples():
    assert timing(RepeaterConfig(1000 * KM, 0, 1)).t_ed == pytest.approx(5 * MS)
    assert timing(RepeaterConfig(1000 * KM, 4, 1)).t_ed == pytest.approx(0.3125 * MS)
    tm = TimingModel(t_ed=1.7)
    assert [tm.T(k) for k in (1, 2, 3)] == [1.7, 3.4, 6.8]
    with pytest.raises(ValueError):
        tm.T(0)


@given(st.integers(0, 30), st.floats(1.0, 1e8))
def test_top_level_delay_is_total_link_delay(n, L):
    cfg = RepeaterConfig(L, n, 1)
    tm = timing(cfg)
    assert tm.T(n + 1) == pytest.approx(L / cfg.channel.c, rel=1e-15)
    for k in range(1, n + 1):
        assert tm.T(k + 1) == 2 * tm.T(k)


def test_config_derived_fields():
    cfg = RepeaterConfig(800 * KM, 3, 2, N=7)
    assert cfg.l0 == 100 * KM
    assert cfg.total_memories == 7 * 16
    assert cfg.p_s == pytest.approx(0.02)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(L=0, n=1, m=1),
        dict(L=1, n=-1, m=1),
        dict(L=1, n=2, m=0),
        dict(L=1, n=2, m=3),
        dict(L=1, n=0, m=2),
        dict(L=1, n=1.5, m=1),
        dict(L=1, n=1, m=1, N=0),
        dict(L=1, n=1, m=1, p_m=0),
        dict(L=1, n=1, m=1, p_m=1.2),
        dict(L=1, n=1, m=1, tau_c=0),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        RepeaterConfig(**kwargs)


def test_single_link_allowed():
    cfg = RepeaterConfig(100 * KM, 0, 1)
    assert cfg.l0 == cfg.L
    assert math.isinf(cfg.tau_c)
