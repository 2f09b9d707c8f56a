"""Monte Carlo estimation of location frequencies and reach probabilities.

Runs are sampled by inverse-CDF draws (exact for every supported density
kind), the automaton is executed alongside, and per-run statistics are
averaged with across-run standard errors.  Every estimate is a pure function
of the configuration: per-run seeds derive from (seed, run index) by a
splitmix-style mix, so results are bit-identical regardless of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dta import DegenerateInputError, Dta
from .product import ProductState, project_run
from .regions import BsccDecomposition, RegionGraph, region_of
from .smp import SemiMarkovProcess

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def run_seed(seed: int, index: int) -> int:
    """Sub-seed of the index-th run: splitmix output at stream position index."""
    return _mix64((seed + (index + 1) * _GAMMA) & _MASK)


@dataclass(frozen=True)
class SimConfig:
    """Simulation budget: ``runs`` independent runs of ``steps`` transitions,
    discarding the first ``burn_in`` read steps from frequency counts."""

    seed: int
    runs: int
    steps: int
    burn_in: int = 100

    def __post_init__(self):
        if self.runs < 1 or self.steps < 1:
            raise ValueError("runs and steps must be positive")
        if not 0 <= self.burn_in < self.steps:
            raise ValueError("burn_in must satisfy 0 <= burn_in < steps")

    @classmethod
    def for_graph(cls, seed: int, runs: int, steps: int, graph: RegionGraph) -> "SimConfig":
        """Default burn-in of ten graph sizes, enough for BSCC absorption."""
        return cls(seed, runs, steps, min(10 * len(graph.vertices), steps - 1))

    def to_json(self) -> dict:
        return {"seed": self.seed, "runs": self.runs, "steps": self.steps, "burn_in": self.burn_in}


@dataclass
class EstimateReport:
    """Point estimates with across-run standard errors."""

    estimates: dict
    stderr: dict
    kind: str
    config: SimConfig
    residual: float = 0.0
    counts: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def fmt(x):
            return float(f"{x:.12g}")

        def key(q):
            return ",".join(map(str, q)) if isinstance(q, tuple) else str(q)

        order = sorted(self.estimates, key=key)
        return {
            "kind": self.kind,
            "estimates": {key(q): fmt(self.estimates[q]) for q in order},
            "stderr": {key(q): fmt(self.stderr[q]) for q in order},
            "residual": fmt(self.residual),
            "counts": {key(q): self.counts[q] for q in sorted(self.counts, key=key)},
            "config": self.config.to_json(),
        }


class _StatePicker:
    """Per-state cumulative transition rows for fast inverse-CDF jumps."""

    def __init__(self, m: SemiMarkovProcess):
        self.rows = {}
        for s in m.states:
            succ = m.successors(s)
            targets = [t for t, _ in succ]
            cum = np.cumsum([p for _, p in succ])
            cum[-1] = 1.0  # guard against float shortfall in the last slot
            self.rows[s] = (targets, cum)
        init = sorted(m.initial.items())
        self.init_targets = [s for s, p in init if p > 0]
        self.init_cum = np.cumsum([p for _, p in init if p > 0])
        self.init_cum[-1] = 1.0

    def initial(self, u: float) -> str:
        return self.init_targets[int(np.searchsorted(self.init_cum, u, side="right"))]

    def next(self, s: str, u: float) -> str:
        targets, cum = self.rows[s]
        return targets[int(np.searchsorted(cum, u, side="right"))]


def sample_run(m: SemiMarkovProcess, seed: int, steps: int) -> list:
    """One run ``s0 t0 s1 t1 ... s_steps``, fully determined by the seed."""
    rng = np.random.default_rng(seed)
    picker = _StatePicker(m)
    u = rng.random(2 * steps + 1)
    s = picker.initial(u[0])
    out = [s]
    for i in range(steps):
        nxt = picker.next(s, u[2 * i + 1])
        out.append(m.delay(s, nxt).quantile(u[2 * i + 2]))
        out.append(nxt)
        s = nxt
    return out


def _run_locations(m: SemiMarkovProcess, a: Dta, run: list):
    """Post-read locations Q^0..Q^N and the stamps of a sampled run."""
    states = run[0::2]
    stamps = run[1::2]
    edges_from = a.edges_from
    letter = m.letter
    zero = {x: 0.0 for x in a.clocks}
    val = dict(zero)
    q = a.initial
    locations = []
    for i, s in enumerate(states):
        lt = letter(s)
        for e in edges_from(q, lt):
            ok = True
            for clock, op, const in e.guard:
                v = val[clock]
                if op == "<=":
                    ok = v <= const
                elif op == ">":
                    ok = v > const
                elif op == "<":
                    ok = v < const
                else:
                    ok = v >= const
                if not ok:
                    break
            if ok:
                q = e.target
                if e.resets:
                    for x in e.resets:
                        val[x] = 0.0
                break
        else:
            raise RuntimeError(f"no enabled edge at {q!r} reading {lt!r}")
        locations.append(q)
        if i < len(stamps):
            t = stamps[i]
            for x in val:
                val[x] += t
    return locations, stamps


def estimate_discrete(m: SemiMarkovProcess, a: Dta, cfg: SimConfig) -> EstimateReport:
    """Empirical discrete frequencies: per run, the fraction of post-burn-in
    reads entering each location; averaged across runs."""
    per_run = {q: np.zeros(cfg.runs) for q in a.locations}
    for r in range(cfg.runs):
        run = sample_run(m, run_seed(cfg.seed, r), cfg.steps)
        locations, _ = _run_locations(m, a, run)
        n = len(locations) - 1 - cfg.burn_in
        counts = {}
        for q in locations[cfg.burn_in + 1 :]:
            counts[q] = counts.get(q, 0) + 1
        for q, c in counts.items():
            per_run[q][r] = c / n
    return _aggregate(per_run, "discrete", cfg)


def estimate_timed(m: SemiMarkovProcess, a: Dta, cfg: SimConfig) -> EstimateReport:
    """Empirical timed frequencies: stamp-weighted version of the above, the
    weight of read step i being the stamp elapsing right after it."""
    per_run = {q: np.zeros(cfg.runs) for q in a.locations}
    for r in range(cfg.runs):
        run = sample_run(m, run_seed(cfg.seed, r), cfg.steps)
        locations, stamps = _run_locations(m, a, run)
        hi = min(len(locations), len(stamps))
        weights = {q: 0.0 for q in a.locations}
        total = 0.0
        for i in range(cfg.burn_in + 1, hi):
            weights[locations[i]] += stamps[i]
            total += stamps[i]
        if total <= 0.0:
            raise DegenerateInputError(f"run {r} spent zero time after burn-in")
        for q, w in weights.items():
            per_run[q][r] = w / total
    return _aggregate(per_run, "timed", cfg)


def estimate_reach(
    m: SemiMarkovProcess,
    a: Dta,
    dec: BsccDecomposition,
    cfg: SimConfig,
) -> EstimateReport:
    """Fraction of runs whose lifted trajectory enters each bottom SCC within
    the step budget; runs absorbed nowhere count toward the residual."""
    bscc_of = dec.bscc_index()
    k = len(dec.bsccs)
    hits = {j: np.zeros(cfg.runs) for j in range(k)}
    unabsorbed = 0
    for r in range(cfg.runs):
        run = sample_run(m, run_seed(cfg.seed, r), cfg.steps)
        j_hit = None
        for z in project_run(m, a, run):
            j = bscc_of.get(region_of(z, a.clocks, a.max_constant))
            if j is not None:
                j_hit = j
                break
        if j_hit is None:
            unabsorbed += 1
        else:
            hits[j_hit][r] = 1.0
    report = _aggregate(hits, "reach", cfg)
    report.residual = unabsorbed / cfg.runs
    return report


def _aggregate(per_run: dict, kind: str, cfg: SimConfig) -> EstimateReport:
    estimates, stderr, counts = {}, {}, {}
    for q, vals in per_run.items():
        estimates[q] = float(vals.mean())
        stderr[q] = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        counts[q] = int(np.count_nonzero(vals))
    return EstimateReport(estimates, stderr, kind, cfg)
