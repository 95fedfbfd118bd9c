"""Cycle-level Monte-Carlo simulation of the partial nesting protocol.

Time advances in units of the elementary heralding period ``t_ed``; every
classical delay in the chain is a power-of-two multiple of it, so all events
land on cycle boundaries.

Memories are tracked as counts per bank, and pairs as cohorts: all pairs
over the same link family that were attempted in the same cycle share their
history and therefore their accumulated storage time. A cohort only meets
other pairs of its own attempt cycle. Pairs that find no partner at their
scheduled measurement are dropped (their memories are released), which keeps
the storage time of every delivered pair fixed by the timing of the protocol.

Per cycle, in order:

1. memories whose classical message arrived are released;
2. outcomes of last cycle's attempts are learned;
3. every cohort that became known this cycle is measured: informed BSMs for
   levels below m, and for level m the informed BSMs together with all blind
   BSMs above it in one step;
4. every free memory pair on every elementary link attempts entanglement.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .core import RepeaterConfig, timing
from .measures import MeasureKind, fidelity_after, measure_value
from .rates import RateVariant, normalized_rate, q_rate

PRNG_NAME = "numpy.random.PCG64"

MAX_NESTING = 16
MAX_MEMORIES_PER_BANK = 2**40


@dataclass(frozen=True)
class SimConfig:
    repeater: RepeaterConfig
    cycles: int
    warmup_cycles: int = 0
    seed: int = 0
    track_ages: bool = True
    measure: MeasureKind = MeasureKind.ENTANGLEMENT_COST
    check_invariants: bool = False
    record_events: bool = False

    def __post_init__(self):
        if not 0 <= self.warmup_cycles < self.cycles:
            raise ValueError(
                f"need 0 <= warmup_cycles < cycles, got warmup={self.warmup_cycles}, cycles={self.cycles}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.repeater.n > MAX_NESTING:
            raise ValueError(f"nesting level {self.repeater.n} exceeds simulator limit {MAX_NESTING}")
        if self.repeater.N > MAX_MEMORIES_PER_BANK:
            raise ValueError(f"{self.repeater.N} memories per bank exceeds simulator limit")


@dataclass
class PairRecord:
    """A cohort of identical pairs over the level-``level`` links.

    ``counts[i]`` pairs span link ``i`` of that level; see ``endpoints``.
    ``accumulated_decay`` is in cycles (multiply by ``t_ed`` for seconds).
    """

    level: int
    created_cycle: int
    known_cycle: int
    accumulated_decay: int
    counts: np.ndarray

    def endpoints(self, i: int) -> Tuple[int, int]:
        return _left_bank(self.level, i), _right_bank(self.level, i)


def _left_bank(level: int, i) -> int:
    return i * 2 ** (level + 1)


def _right_bank(level: int, i) -> int:
    return (i + 1) * 2 ** (level + 1) - 1


def _twice(a: np.ndarray) -> np.ndarray:
    return np.concatenate((a, a))


def _station_level(j: int, b: int) -> int:
    """Nesting level of the station at boundary ``b`` between level-j links."""
    return j + 1 + ((b & -b).bit_length() - 1)


@dataclass
class SimStats:
    config: SimConfig
    prng: str
    cycles_measured: int
    delivered_pairs: int
    delivered_per_cycle_se: float
    measured_normalized_rate: float
    rate_standard_error: float
    measured_ebit_rate: float
    ebit_rate_standard_error: float
    mean_delivered_age: float
    age_histogram: Dict[int, int]
    t_ed: float
    bsm_attempts: List[int]
    bsm_successes: List[int]
    events: Optional[List[Tuple[int, int, int, bool]]] = None

    @property
    def ages_seconds(self) -> Dict[float, int]:
        return {k * self.t_ed: v for k, v in sorted(self.age_histogram.items())}

    def to_dict(self) -> dict:
        return {
            "prng": self.prng,
            "cycles_measured": self.cycles_measured,
            "delivered_pairs": self.delivered_pairs,
            "measured_normalized_rate_per_s": self.measured_normalized_rate,
            "rate_standard_error_per_s": self.rate_standard_error,
            "measured_ebit_rate_per_s": self.measured_ebit_rate,
            "ebit_rate_standard_error_per_s": self.ebit_rate_standard_error,
            "mean_delivered_age_s": self.mean_delivered_age,
            "age_histogram_s": {repr(k): v for k, v in self.ages_seconds.items()},
            "t_ed_s": self.t_ed,
            "bsm_attempts_by_level": self.bsm_attempts,
            "bsm_successes_by_level": self.bsm_successes,
        }


class _Chain:
    def __init__(self, cfg: SimConfig):
        rep = cfg.repeater
        self.cfg = cfg
        self.n = rep.n
        self.m = rep.m
        self.N = rep.N
        self.p_s = rep.p_s
        self.p_m = rep.p_m
        self.rng = np.random.Generator(np.random.PCG64(cfg.seed))
        nb = 2 ** (self.n + 1)
        self.free = np.full(nb, self.N, dtype=np.int64)
        self.outcome = np.zeros(nb, dtype=np.int64)
        self.entangled = np.zeros(nb, dtype=np.int64)
        self.classical = np.zeros(nb, dtype=np.int64)
        self.releases: Dict[int, np.ndarray] = {}
        self.arrivals: Dict[int, List[PairRecord]] = defaultdict(list)
        self.attempts: Optional[Tuple[int, np.ndarray, np.ndarray]] = None
        self.bsm_attempts = np.zeros(self.n + 1, dtype=np.int64)
        self.bsm_successes = np.zeros(self.n + 1, dtype=np.int64)
        self.events: Optional[list] = [] if cfg.record_events else None
        # endpoint banks of every link, and for each informed level the
        # outer/station banks of the sibling pairs it joins
        self.ends = []
        self.joins = []
        for j in range(self.n + 1):
            i = np.arange(2 ** (self.n - j))
            self.ends.append(np.concatenate([_left_bank(j, i), _right_bank(j, i)]))
            h = np.arange(2 ** (self.n - j - 1)) if j < self.n else np.arange(0)
            self.joins.append(
                (
                    np.concatenate([_left_bank(j, 2 * h), _right_bank(j, 2 * h + 1)]),
                    np.concatenate([_right_bank(j, 2 * h), _left_bank(j, 2 * h + 1)]),
                )
            )
        self.measuring = False
        # delivered pairs of the current cycle, keyed by age in cycles
        self.delivered_now: Dict[int, int] = {}

    # -- bookkeeping helpers ---------------------------------------------

    def _schedule_release(self, cycle: int, banks: np.ndarray, counts: np.ndarray) -> None:
        rel = self.releases.get(cycle)
        if rel is None:
            rel = self.releases[cycle] = np.zeros_like(self.free)
        rel[banks] += counts

    @staticmethod
    def _move(src: np.ndarray, dst: np.ndarray, banks, counts) -> None:
        # callers pass distinct banks, so fancy-index updates are safe
        src[banks] -= counts
        dst[banks] += counts

    def _log(self, cycle: int, level: int, created: int, informed: bool) -> None:
        if self.events is not None:
            self.events.append((cycle, level, created, informed))

    # -- protocol steps --------------------------------------------------

    def step(self, c: int) -> None:
        rel = self.releases.pop(c, None)
        if rel is not None:
            self.classical -= rel
            self.free += rel

        known: List[PairRecord] = []
        if self.attempts is not None:
            created, att, succ = self.attempts
            self.attempts = None
            banks = self.ends[0]
            att2, succ2 = _twice(att), _twice(succ)
            self.outcome[banks] -= att2
            self.free[banks] += att2 - succ2
            self.entangled[banks] += succ2
            known.append(PairRecord(0, created, c, c - created, succ))
        for rec in self.arrivals.pop(c, []):
            self._move(self.classical, self.entangled, self.ends[rec.level], _twice(rec.counts))
            known.append(rec)

        for rec in sorted(known, key=lambda r: r.level):
            if self.n == 0:
                self._deliver_direct(rec)
            elif rec.level < self.m - 1:
                self._informed(c, rec)
            else:
                self._final(c, rec)

        self._attempt(c)

    def _deliver_direct(self, rec: PairRecord) -> None:
        k = int(rec.counts[0])
        self.entangled[[0, 1]] -= k
        self.free[[0, 1]] += k
        if k:
            self.delivered_now[rec.accumulated_decay] = self.delivered_now.get(rec.accumulated_decay, 0) + k

    def _informed(self, c: int, rec: PairRecord) -> None:
        j = rec.level
        k = j + 1
        left, right = rec.counts[0::2], rec.counts[1::2]
        matched = np.minimum(left, right)
        succ = self.rng.binomial(matched, self.p_m)
        outer, station = self.joins[j]
        both = np.concatenate([left, right])
        # station memories are free right after the measurement; the outer
        # ones wait for the station's result
        self._move(self.entangled, self.free, station, both)
        self._move(self.entangled, self.classical, outer, both)
        delay = 2 ** (k - 1)
        self._schedule_release(c + delay, outer, both - _twice(succ))
        self.arrivals[c + delay].append(
            PairRecord(k, rec.created_cycle, c + delay, 2 * rec.accumulated_decay + delay, succ)
        )
        if self.measuring:
            self.bsm_attempts[k] += matched.sum()
            self.bsm_successes[k] += succ.sum()
        self._log(c, k, rec.created_cycle, True)

    def _final(self, c: int, rec: PairRecord) -> None:
        j = rec.level
        counts = rec.counts
        chains = int(counts.min())
        survivors = chains
        rng, p = self.rng, self.p_m
        for b in range(1, len(counts)):
            level = _station_level(j, b)
            matched = int(min(counts[b - 1], counts[b]))
            live = int(rng.binomial(survivors, p))
            dead = int(rng.binomial(chains - survivors, p))
            extra = int(rng.binomial(matched - chains, p))
            if self.measuring:
                self.bsm_attempts[level] += matched
                self.bsm_successes[level] += live + dead + extra
            self._log(c, level, rec.created_cycle, level <= self.m)
            survivors = live
        self._move(self.entangled, self.free, self.ends[j], _twice(counts))
        if survivors:
            age = len(counts) * rec.accumulated_decay
            self.delivered_now[age] = self.delivered_now.get(age, 0) + survivors

    def _attempt(self, c: int) -> None:
        pairs = self.free.reshape(-1, 2)
        att = pairs.min(axis=1)
        self.free -= np.repeat(att, 2)
        self.outcome += np.repeat(att, 2)
        succ = self.rng.binomial(att, self.p_s)
        self.attempts = (c, att, succ)

    def check(self) -> None:
        total = self.free + self.outcome + self.entangled + self.classical
        if not np.all(total == self.N):
            raise AssertionError(f"memory conservation violated: {total}")
        for name in ("free", "outcome", "entangled", "classical"):
            if np.any(getattr(self, name) < 0):
                raise AssertionError(f"negative {name} count")
        if np.any(self.entangled != 0):
            raise AssertionError("known pairs left unmeasured at end of cycle")


def run(config: SimConfig) -> SimStats:
    """Simulate ``config.cycles`` cycles and aggregate the post-warmup statistics."""
    rep = config.repeater
    t_ed = timing(rep).t_ed
    chain = _Chain(config)
    measured = config.cycles - config.warmup_cycles
    hist: Dict[int, int] = defaultdict(int)
    per_cycle = np.zeros(measured, dtype=np.int64)
    ebits_per_cycle = np.zeros(measured)
    value_cache: Dict[int, float] = {}

    def ebits(age: int) -> float:
        v = value_cache.get(age)
        if v is None:
            v = value_cache[age] = measure_value(config.measure, fidelity_after(age * t_ed, rep.tau_c))
        return v

    for c in range(config.cycles):
        chain.measuring = c >= config.warmup_cycles
        chain.delivered_now = {}
        chain.step(c)
        if config.check_invariants:
            chain.check()
        if chain.measuring and chain.delivered_now:
            idx = c - config.warmup_cycles
            for age, k in chain.delivered_now.items():
                per_cycle[idx] += k
                ebits_per_cycle[idx] += k * ebits(age)
                if config.track_ages:
                    hist[age] += k

    norm = t_ed * rep.total_memories
    delivered = int(per_cycle.sum())
    se_count = float(per_cycle.std(ddof=1) / math.sqrt(measured)) if measured > 1 else 0.0
    se_ebit = float(ebits_per_cycle.std(ddof=1) / math.sqrt(measured)) if measured > 1 else 0.0
    if hist:
        mean_age = sum(a * k for a, k in hist.items()) * t_ed / sum(hist.values())
    else:
        mean_age = math.nan
    return SimStats(
        config=config,
        prng=PRNG_NAME,
        cycles_measured=measured,
        delivered_pairs=delivered,
        delivered_per_cycle_se=se_count,
        measured_normalized_rate=delivered / (measured * norm),
        rate_standard_error=se_count / norm,
        measured_ebit_rate=float(ebits_per_cycle.sum()) / (measured * norm),
        ebit_rate_standard_error=se_ebit / norm,
        mean_delivered_age=mean_age,
        age_histogram=dict(sorted(hist.items())),
        t_ed=t_ed,
        bsm_attempts=[int(x) for x in chain.bsm_attempts[1:]],
        bsm_successes=[int(x) for x in chain.bsm_successes[1:]],
        events=chain.events,
    )


@dataclass(frozen=True)
class Comparison:
    analytic_pair_rate: float
    analytic_ebit_rate: float
    pair_ratio: float
    pair_ratio_se: float
    ebit_ratio: float
    ebit_ratio_se: float

    def to_dict(self) -> dict:
        return {
            "analytic_pair_rate_per_s": self.analytic_pair_rate,
            "analytic_ebit_rate_per_s": self.analytic_ebit_rate,
            "pair_ratio": self.pair_ratio,
            "pair_ratio_se": self.pair_ratio_se,
            "ebit_ratio": self.ebit_ratio,
            "ebit_ratio_se": self.ebit_ratio_se,
        }


def compare_to_analytic(stats: SimStats, config: RepeaterConfig) -> Comparison:
    """Measured over analytic rates, for raw pairs and for ebits.

    The ebit comparison uses the no-purification storage time, since the
    simulator does not purify.
    """
    if stats.config.repeater != config:
        raise ValueError("statistics were produced from a different repeater configuration")
    q = q_rate(config)
    r = normalized_rate(config, RateVariant.NO_PURIFICATION, stats.config.measure).r
    return Comparison(
        analytic_pair_rate=q,
        analytic_ebit_rate=r,
        pair_ratio=stats.measured_normalized_rate / q,
        pair_ratio_se=stats.rate_standard_error / q,
        ebit_ratio=stats.measured_ebit_rate / r if r > 0 else math.nan,
        ebit_ratio_se=stats.ebit_rate_standard_error / r if r > 0 else math.nan,
    )
