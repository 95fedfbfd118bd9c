import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pnp_repeater.core import KM, MS, ChannelModel, RepeaterConfig, timing
from pnp_repeater.measures import MeasureKind, entanglement_cost, fidelity_after
from pnp_repeater.rates import (
    RateVariant,
    decay_time_hashing,
    decay_time_nopur,
    decay_time_pur,
    normalized_rate,
    pairs_per_cycle,
    q_rate,
)

EC = MeasureKind.ENTANGLEMENT_COST
ED = MeasureKind.DISTILLABLE_ENTANGLEMENT


def cfg(n, m, *, L=1000 * KM, ps=None, pm=1.0, tau=math.inf, N=1, c=2e8):
    ch = ChannelModel(c=c, ps_override=ps)
    return RepeaterConfig(L=L, n=n, m=m, N=N, p_m=pm, tau_c=tau, channel=ch)


def test_q_rate_lossless_limit():
    c = cfg(3, 2, ps=1.0, pm=1.0)
    assert q_rate(c) == pytest.approx(2e8 / (2 * 1000 * KM), rel=1e-15)


def test_q_rate_worked_value():
    # L/c = 5 ms, P_S = 0.1, P_M = 0.5, exponent 2^(1) + 0 = 2
    assert q_rate(cfg(2, 2, ps=0.1, pm=0.5)) == pytest.approx(2.5, rel=1e-14)


@pytest.mark.parametrize("n", range(1, 11))
def test_q_rate_bsm_exponent_extremes(n):
    ps, pm = 0.3, 0.8
    base = ps * 2e8 / (2 * 1000 * KM)
    assert q_rate(cfg(n, n, ps=ps, pm=pm)) == pytest.approx(base * pm**n, rel=1e-13)
    assert q_rate(cfg(n, 1, ps=ps, pm=pm)) == pytest.approx(base * pm ** (2**n - 1), rel=1e-13)


def test_single_link_rate():
    c = cfg(0, 1, ps=0.4)
    assert q_rate(c) == pytest.approx(0.4 * 2e8 / (2 * 1000 * KM))
    res = normalized_rate(c, RateVariant.NO_PURIFICATION, EC)
    t_ed = timing(c).t_ed
    assert res.effective_decay_time == t_ed
    assert normalized_rate(c, RateVariant.IDEAL, EC).r == res.q


def test_pairs_per_cycle():
    assert pairs_per_cycle(cfg(2, 1, ps=1.0)) == 1.0
    assert pairs_per_cycle(cfg(1, 1, ps=0.1, pm=0.5, N=100)) == pytest.approx(5.0)
    c = cfg(4, 2, ps=0.07, pm=0.6, N=40)
    t_ed = timing(c).t_ed
    assert pairs_per_cycle(c) == pytest.approx(q_rate(c) * t_ed * c.N * 2 ** (c.n + 1), rel=1e-13)


def test_q_rate_increasing_in_m():
    for n in range(2, 9):
        qs = [q_rate(cfg(n, m, ps=0.2, pm=0.7)) for m in range(1, n + 1)]
        assert all(a < b for a, b in zip(qs, qs[1:]))


def test_decay_time_nopur():
    # t_ed = 1 ms at L = 4 * 200 km with n = 2
    c = cfg(2, 2, L=800 * KM)
    assert timing(c).t_ed == pytest.approx(1 * MS)
    assert decay_time_nopur(c) == pytest.approx(6 * MS)
    c = cfg(1, 1, L=400 * KM)
    assert decay_time_nopur(c) == pytest.approx(2 * MS)
    for n in range(1, 8):
        c = cfg(n, 1)
        assert decay_time_nopur(c) == pytest.approx(c.L / c.channel.c, rel=1e-15)


def test_decay_time_pur():
    c = cfg(5, 4, L=32 * 200 * KM)
    assert timing(c).t_ed == pytest.approx(1 * MS)
    assert decay_time_pur(c) == pytest.approx(4 * MS)
    for m in (1, 2):
        c = cfg(4, m)
        assert decay_time_pur(c) == timing(c).t_ed


def test_decay_time_hashing():
    # m = 1: t_1^(1) = T_2 = 2 t_ed, T_1 = t_ed -> 1.5 t_ed
    c = cfg(3, 1)
    assert decay_time_hashing(c) == pytest.approx(1.5 * timing(c).t_ed)
    # m = 3: t_3^(3) = T_4 + 2 T_3 = 16 t_ed, T_3 = 4 t_ed -> 10 t_ed
    c = cfg(5, 3)
    assert decay_time_hashing(c) == pytest.approx(10 * timing(c).t_ed)


@pytest.mark.parametrize("fn", [decay_time_nopur, decay_time_pur, decay_time_hashing])
def test_decay_times_need_stations(fn):
    with pytest.raises(ValueError):
        fn(cfg(0, 1))


def test_nopur_worked_value():
    # t_ed = tau_c, n = 2, m = 1: decay time 4 tau_c
    c = cfg(2, 1, ps=1.0, pm=1.0, tau=5 * MS * 0.25)
    res = normalized_rate(c, RateVariant.NO_PURIFICATION, EC)
    assert res.effective_decay_time == pytest.approx(4 * c.tau_c)
    # oracle: mpmath, 40 digits, p(4) = 0.50915781944436709015
    assert res.measure_value == pytest.approx(0.0012567546055935177666, rel=1e-9)
    assert res.r == pytest.approx(q_rate(c) * 0.0012567546055935177666, rel=1e-9)


@pytest.mark.parametrize("variant", list(RateVariant))
@pytest.mark.parametrize("measure", [EC, ED])
def test_infinite_coherence_gives_raw_rate(variant, measure):
    c = cfg(4, 3, pm=0.8)
    res = normalized_rate(c, variant, measure)
    assert res.measure_value == 1.0
    assert res.r == res.q


def test_hashing_always_uses_distillable():
    c = cfg(4, 2, pm=0.8, tau=2 * MS)
    a = normalized_rate(c, RateVariant.ONE_WAY_HASHING, EC)
    b = normalized_rate(c, RateVariant.ONE_WAY_HASHING, ED)
    assert a == b
    assert a.measure is ED


def test_rate_result_fields():
    c = cfg(5, 3, pm=0.7, tau=3 * MS)
    res = normalized_rate(c, RateVariant.WITH_PURIFICATION, EC)
    assert res.effective_decay_time == decay_time_pur(c)
    assert res.measure_value == entanglement_cost(fidelity_after(res.effective_decay_time, c.tau_c))
    assert res.r == res.q * res.measure_value
    assert 0 <= res.r <= res.q


def test_rejects_unknown_variant():
    with pytest.raises(ValueError):
        normalized_rate(cfg(2, 1), "pur", EC)
    with pytest.raises(ValueError):
        normalized_rate(cfg(2, 1), RateVariant.IDEAL, "ec")


def test_purified_measure_factor_non_increasing_in_m():
    for n in range(2, 10):
        vals = [
            normalized_rate(cfg(n, m, pm=0.6, tau=1 * MS), RateVariant.WITH_PURIFICATION, EC).measure_value
            for m in range(1, n + 1)
        ]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


configs = st.builds(
    lambda n, mfrac, L, pm, tau: cfg(n, max(1, math.ceil(mfrac * n)), L=L, pm=pm, tau=tau),
    st.integers(1, 14),
    st.floats(0.01, 1.0),
    st.floats(10 * KM, 2e4 * KM),
    st.floats(0.05, 1.0),
    st.floats(1e-5, 10.0),
)


@settings(max_examples=300)
@given(configs, st.sampled_from([EC, ED]))
def test_rate_orderings(c, measure):
    nopur = normalized_rate(c, RateVariant.NO_PURIFICATION, measure)
    pur = normalized_rate(c, RateVariant.WITH_PURIFICATION, measure)
    assert decay_time_pur(c) <= decay_time_nopur(c)
    assert nopur.r <= pur.r
    for v in RateVariant:
        res = normalized_rate(c, v, measure)
        assert 0 <= res.r <= res.q


@given(configs, st.sampled_from([EC, ED]))
def test_first_two_depths_ordered(c, measure):
    if c.n < 2:
        return
    r1 = normalized_rate(
        RepeaterConfig(c.L, c.n, 1, p_m=c.p_m, tau_c=c.tau_c), RateVariant.WITH_PURIFICATION, measure
    )
    r2 = normalized_rate(
        RepeaterConfig(c.L, c.n, 2, p_m=c.p_m, tau_c=c.tau_c), RateVariant.WITH_PURIFICATION, measure
    )
    assert r1.r <= r2.r


def test_nopur_decays_exponentially_with_distance():
    tau = 1 * MS  # keeps f - 1/2 well above double resolution
    L = np.linspace(500 * KM, 2000 * KM, 6)
    rates = [normalized_rate(cfg(1, 1, L=x, ps=0.5, pm=0.9, tau=tau), RateVariant.NO_PURIFICATION, EC).r for x in L]
    logs = np.diff(np.log(rates)) / np.diff(L)
    # ln E_C(p(t)) ~ -2 t / tau with t = L / c
    assert np.all(logs < -1.5 / (2e8 * tau))
