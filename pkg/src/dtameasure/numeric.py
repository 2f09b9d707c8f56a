"""Grid discretization of the product kernel and the full analysis pipeline.

The clock space is cut into axis-aligned cells of width 1/cells_per_unit with
one overflow cell per clock beyond the largest guard constant; guard
thresholds and region boundaries therefore never cross a cell interior.  A
discretized distribution assigns weight to (state, location, cell-vector)
triples.  One step moves each cell's weight through the read phase of its
midpoint representative and distributes the holding time exactly, segment by
segment, onto target cells.

On top of the single step sit transient absorption into bottom SCCs, per
cyclic class power iteration for invariant measures, the discrete and timed
long-run frequencies, and closed-form validity bounds for both.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Optional

from .dta import DegenerateInputError, Dta, with_letter_memory
from .product import GeneratorBox, ProductState, read_phase
from .regions import (
    BsccDecomposition,
    RegionGraph,
    RegionSignature,
    build_region_graph,
    decompose,
    drop_growing_clocks,
    region_of,
)
from .smp import SemiMarkovProcess

#: distribution key: (state, location, per-clock cell indices)
Key = tuple[str, Hashable, tuple[int, ...]]
Distribution = dict[Key, float]

MASS_STEP_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """Power iteration failed to settle; carries the last residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class GridSpec:
    """Uniform clock grid: ``cells_per_unit`` cells per time unit, capped at
    ``cap`` (the largest guard constant) with a single overflow cell beyond.
    """

    cells_per_unit: int
    cap: int

    def __post_init__(self):
        if self.cells_per_unit < 1:
            raise ValueError("cells_per_unit must be >= 1")
        if self.cap < 0:
            raise ValueError("cap must be >= 0")

    @classmethod
    def for_dta(cls, a: Dta, cells_per_unit: int) -> "GridSpec":
        return cls(cells_per_unit, a.max_constant)

    @property
    def overflow(self) -> int:
        """Index of the per-clock overflow cell."""
        return self.cap * self.cells_per_unit

    def cell_of(self, value) -> int:
        idx = math.floor(value * self.cells_per_unit)
        return min(idx, self.overflow)

    def midpoint(self, idx: int) -> Fraction:
        return Fraction(2 * idx + 1, 2 * self.cells_per_unit)

    def cell_bounds(self, idx: int) -> tuple[float, float]:
        h = self.cells_per_unit
        if idx >= self.overflow:
            return (float(self.cap), math.inf)
        return (idx / h, (idx + 1) / h)

    def to_json(self) -> dict:
        return {"cells_per_unit": self.cells_per_unit, "cap": self.cap}


def total_mass(dist: Distribution) -> float:
    return sum(dist.values())


def l1_distance(d1: Distribution, d2: Distribution) -> float:
    keys = d1.keys() | d2.keys()
    return sum(abs(d1.get(k, 0.0) - d2.get(k, 0.0)) for k in keys)


def location_mass(dist: Distribution, locations) -> dict:
    out = {q: 0.0 for q in locations}
    for (_s, q, _c), w in dist.items():
        out[q] += w
    return out


class GridKernel:
    """Cached one-step engine for a fixed model, automaton and grid."""

    def __init__(self, m: SemiMarkovProcess, a: Dta, grid: GridSpec):
        self.m = m
        self.a = a
        self.grid = grid
        self._rows: dict[Key, list[tuple[Key, float]]] = {}
        self._cell_regions: dict[Key, RegionSignature] = {}
        n = len(a.clocks)
        # deterministic sub-cell offsets, used only to resolve which region a
        # cell is charged to: they break fractional-part ties between clocks
        # without leaving the cell
        self._offsets = [
            Fraction(j + 1, (n + 2) * 2 * grid.cells_per_unit) for j in range(n)
        ]

    # -- geometry -----------------------------------------------------------

    def midpoint_valuation(self, cells: tuple[int, ...]) -> dict:
        return {x: self.grid.midpoint(c) for x, c in zip(self.a.clocks, cells)}

    def cell_key_of(self, z: ProductState) -> Key:
        cells = tuple(self.grid.cell_of(z.valuation[x]) for x in self.a.clocks)
        return (z.state, z.location, cells)

    def cell_region(self, key: Key) -> RegionSignature:
        """Region charged to a cell: its midpoint nudged into general position."""
        sig = self._cell_regions.get(key)
        if sig is None:
            s, q, cells = key
            val = {
                x: self.grid.midpoint(c) + off
                for x, c, off in zip(self.a.clocks, cells, self._offsets)
            }
            sig = region_of(ProductState(s, q, val), self.a.clocks, self.a.max_constant)
            self._cell_regions[key] = sig
        return sig

    # -- one step -----------------------------------------------------------

    def distribute_from(self, z: ProductState, weight: float) -> Distribution:
        """Exact one-step distribution from a single product state onto cells."""
        val = {x: Fraction(v) for x, v in z.valuation.items()}
        rp = read_phase(self.m, self.a, ProductState(z.state, z.location, val))
        h = self.grid.cells_per_unit
        out: Distribution = {}
        for s_next, p in self.m.successors(z.state):
            dens = self.m.delay(z.state, s_next)
            lo_f, hi_f = dens.support
            lo = Fraction(int(lo_f))
            points = {lo}
            if hi_f != math.inf:
                points.add(Fraction(int(hi_f)))
            for x in self.a.clocks:
                v = rp.valuation[x]
                if v >= self.grid.cap:
                    continue  # already in overflow; no more boundaries ahead
                j = math.floor((v + lo) * h) + 1
                while j <= self.grid.overflow:
                    t = Fraction(j, h) - v
                    if hi_f != math.inf and t >= hi_f:
                        break
                    if t > lo:
                        points.add(t)
                    j += 1
            cuts = sorted(points)
            segments = [(u, w, (u + w) / 2) for u, w in zip(cuts, cuts[1:])]
            if hi_f == math.inf:
                segments.append((cuts[-1], math.inf, cuts[-1] + 1))
            for seg_lo, seg_hi, probe in segments:
                mass = weight * p * dens.integrate(seg_lo, seg_hi)
                if mass == 0.0:
                    continue
                cells = tuple(
                    self.grid.cell_of(rp.valuation[x] + probe) for x in self.a.clocks
                )
                key = (s_next, rp.location, cells)
                out[key] = out.get(key, 0.0) + mass
        return out

    def row(self, key: Key) -> list[tuple[Key, float]]:
        """Unit-weight one-step distribution from a cell's midpoint state."""
        row = self._rows.get(key)
        if row is None:
            s, q, cells = key
            z = ProductState(s, q, self.midpoint_valuation(cells))
            row = list(self.distribute_from(z, 1.0).items())
            self._rows[key] = row
        return row

    def step(self, dist: Distribution) -> Distribution:
        out: Distribution = {}
        for key, w in dist.items():
            for key2, mass in self.row(key):
                out[key2] = out.get(key2, 0.0) + w * mass
        return out


def distribute_from_state(m, a, z: ProductState, weight: float, grid: GridSpec) -> Distribution:
    return GridKernel(m, a, grid).distribute_from(z, weight)


def step_distribution(dist: Distribution, m, a, grid: GridSpec, kernel: GridKernel | None = None) -> Distribution:
    """One application of the discretized kernel; preserves total mass."""
    kernel = kernel or GridKernel(m, a, grid)
    return kernel.step(dist)


def box_mass(dist: Distribution, a: Dta, grid: GridSpec, box: GeneratorBox) -> float:
    """Distribution mass inside a generator box, proportional within cells.

    The overflow cell counts fully when the box is unbounded from the cap on,
    and not at all otherwise; finer splits beyond the cap are not resolved.
    """
    total = 0.0
    for (s, q, cells), w in dist.items():
        if s != box.state or q != box.location:
            continue
        frac = 1.0
        for idx, (lo, hi) in zip(cells, box.intervals):
            c_lo, c_hi = grid.cell_bounds(idx)
            if c_hi == math.inf:
                frac *= 1.0 if (hi == math.inf and lo <= c_lo) else 0.0
            else:
                overlap = min(hi, c_hi) - max(lo, c_lo)
                frac *= max(0.0, min(overlap / (c_hi - c_lo), 1.0))
            if frac == 0.0:
                break
        total += w * frac
    return total


# -- transient absorption ----------------------------------------------------


@dataclass
class AbsorptionResult:
    """Reach probability estimates per BSCC with the unabsorbed residual."""

    reach: list[float]
    residual: float
    entries: list[Distribution]  # conditional entry mass per BSCC, by cell
    iterations: int
    history: list[list[float]]  # absorbed-so-far per BSCC, one row per iteration


def _absorb(dist: Distribution, kernel: GridKernel, bscc_of, reach, entries) -> Distribution:
    free: Distribution = {}
    for key, w in dist.items():
        j = bscc_of.get(kernel.cell_region(key))
        if j is None:
            free[key] = free.get(key, 0.0) + w
        else:
            reach[j] += w
            entries[j][key] = entries[j].get(key, 0.0) + w
    return free


def absorb_transient(
    m: SemiMarkovProcess,
    a: Dta,
    grid: GridSpec,
    graph: RegionGraph,
    dec: BsccDecomposition,
    eps: float = 1e-3,
    max_iters: int = 10_000,
    kernel: GridKernel | None = None,
) -> AbsorptionResult:
    """Iterate the discretized kernel from the initial distribution, moving
    mass into a BSCC's accumulator the moment its cell belongs to one.

    Stops when the free mass drops below eps or the iteration budget (the
    given cap or, if smaller, the number of steps after which the geometric
    reach bound certifies eps) is exhausted; a leftover residual is reported,
    never raised.
    """
    kernel = kernel or GridKernel(m, a, grid)
    bscc_of = dec.bscc_index()
    k = len(dec.bsccs)
    reach = [0.0] * k
    entries: list[Distribution] = [dict() for _ in range(k)]
    history: list[list[float]] = []

    # step 0: exact initial states, absorbed by their exact region
    free: Distribution = {}
    for s, w in m.initial.items():
        if w <= 0:
            continue
        z = ProductState(s, a.initial, a.zero_valuation(exact=True))
        sig = region_of(z, a.clocks, a.max_constant)
        j = bscc_of.get(sig)
        if j is None:
            for key, mass in kernel.distribute_from(z, w).items():
                free[key] = free.get(key, 0.0) + mass
        else:
            reach[j] += w
            key = kernel.cell_key_of(z)
            entries[j][key] = entries[j].get(key, 0.0) + w
    free = _absorb(free, kernel, bscc_of, reach, entries)
    history.append(list(reach))

    limit = min(max_iters, _iterations_for_bound(len(graph.vertices), m, a, eps))
    iters = 1
    while total_mass(free) >= eps and iters < limit:
        free = _absorb(kernel.step(free), kernel, bscc_of, reach, entries)
        history.append(list(reach))
        iters += 1
    return AbsorptionResult(reach, total_mass(free), entries, iters, history)


def _iterations_for_bound(num_regions: int, m, a, eps: float) -> int:
    """Steps after which the geometric reach bound certifies error below eps."""
    rb = reach_bound(1, num_regions, m.min_transition_prob(), density_floor(m, a.max_constant))
    if rb.p_bound <= 0.0:
        return 10**18
    need = math.ceil(math.log(eps) / math.log1p(-rb.p_bound))
    return max(rb.c * max(need, 1), 1)


# -- invariant measures ------------------------------------------------------


def class_cells(kernel: GridKernel, regions: frozenset[RegionSignature]) -> list[Key]:
    """All grid cells whose charged region belongs to the given set."""
    grid, a, m = kernel.grid, kernel.a, kernel.m
    per_clock = range(grid.overflow + 1)
    out = []
    for s in m.states:
        for q in a.locations:
            for cells in itertools.product(per_clock, repeat=len(a.clocks)):
                key = (s, q, cells)
                if kernel.cell_region(key) in regions:
                    out.append(key)
    return out


def invariant_measure(
    m: SemiMarkovProcess,
    a: Dta,
    grid: GridSpec,
    cells: list[Key],
    period: int,
    tol: float = 1e-9,
    max_sweeps: int = 2_000,
    start: Optional[Distribution] = None,
    kernel: GridKernel | None = None,
    locations=None,
) -> tuple[Distribution, int, list[dict]]:
    """Fixed point of the period-fold discretized kernel on one cyclic class.

    Returns the normalized invariant weights, the sweep count, and per-sweep
    per-location masses (used to audit the analytic ergodicity bound).
    Raises ConvergenceError with the last L1 residual when max_sweeps pass
    without the per-sweep change dropping below tol.
    """
    kernel = kernel or GridKernel(m, a, grid)
    cellset = set(cells)
    if not cellset:
        raise ValueError("cyclic class has no grid cells")
    if start:
        pi = {k: w for k, w in start.items() if k in cellset}
    else:
        pi = {}
    if not pi:
        pi = {k: 1.0 / len(cells) for k in cells}
    else:
        z = total_mass(pi)
        pi = {k: w / z for k, w in pi.items()}
    locations = locations if locations is not None else a.locations
    history = []
    residual = math.inf
    for sweep in range(1, max_sweeps + 1):
        nxt = pi
        for _ in range(period):
            nxt = kernel.step(nxt)
        nxt = {k: w for k, w in nxt.items() if k in cellset}
        z = total_mass(nxt)
        nxt = {k: w / z for k, w in nxt.items()}
        residual = l1_distance(pi, nxt)
        pi = nxt
        history.append(location_mass(pi, locations))
        if residual < tol:
            return pi, sweep, history
    raise ConvergenceError(
        f"invariant iteration did not converge within {max_sweeps} sweeps "
        f"(last L1 change {residual:.3e})",
        residual,
    )


def discrete_frequencies(pis: list[Distribution], locations) -> dict:
    """Long-run visit frequencies: the cyclic-class average of location masses."""
    p = len(pis)
    out = {q: 0.0 for q in locations}
    for pi in pis:
        for q, w in location_mass(pi, locations).items():
            out[q] += w / p
    return out


def timed_from_discrete(letter_freqs: dict, expected_per_state: dict, locations) -> dict:
    """Time-weighted frequencies from letter-annotated discrete ones.

    ``letter_freqs`` maps letter-memory locations (state, location) to their
    discrete frequency; each is weighted by the expected holding time of its
    state and renormalized.
    """
    weighted = {}
    for loc, d in letter_freqs.items():
        if not isinstance(loc, tuple):
            continue  # the initial location carries no letter and no mass in a BSCC
        s, q = loc
        weighted[(s, q)] = expected_per_state[s] * d
    denom = sum(weighted.values())
    if denom <= 0.0:
        raise DegenerateInputError("all expected holding times vanish; timed measure undefined")
    out = {q: 0.0 for q in locations}
    for (s, q), w in weighted.items():
        out[q] += w / denom
    return out


# -- analytic bounds ---------------------------------------------------------


@dataclass(frozen=True)
class ReachBoundValue:
    bound: float
    c: int
    p_bound: float


def reach_bound(i: int, num_regions: int, min_prob: float, dens_floor: float) -> ReachBoundValue:
    """Geometric tail bound on the reach-probability error after i steps.

    Within any window of c = 4 * num_regions steps, absorption happens with
    probability at least (min_prob * dens_floor / c) ** c, so the error decays
    as (1 - p_bound) per window.
    """
    if i < 1:
        raise ValueError("step index must be >= 1")
    c = 4 * num_regions
    p_bound = (min_prob * dens_floor / c) ** c
    return ReachBoundValue((1.0 - p_bound) ** (i // c), c, p_bound)


@dataclass(frozen=True)
class ErgodicityBoundValue:
    bound: float
    r: float  # window length; may saturate to inf
    epsilon: float
    saturated: bool


def ergodicity_bound(
    i: int, num_regions: int, min_prob: float, dens_floor: float, period: int = 1
) -> ErgodicityBoundValue:
    """Uniform-ergodicity bound on the frequency error after i iterations.

    The window is r = floor(num_regions ** (4 ln num_regions)) and the
    per-window contraction (min_prob * dens_floor / r) ** r; for the periodic
    case the same bound applies to the class-averaged estimator, with i
    counting period-fold sweeps.  When r overflows the bound saturates at 1
    and is flagged as such.
    """
    if i < 1:
        raise ValueError("iteration index must be >= 1")
    if num_regions < 1:
        raise ValueError("num_regions must be >= 1")
    ln = math.log(num_regions)
    exponent = 4.0 * ln * ln
    if exponent > 700.0:
        return ErgodicityBoundValue(1.0, math.inf, 0.0, True)
    r = max(int(math.floor(math.exp(exponent))), 1)
    x = min_prob * dens_floor / r
    epsilon = math.exp(r * math.log(x)) if 0.0 < x < 1.0 else float(x > 0)
    return ErgodicityBoundValue((1.0 - epsilon) ** (i // r), float(r), epsilon, False)


def density_floor(m: SemiMarkovProcess, max_constant: int) -> float:
    """Uniform positive floor of the model's densities on [0, max_constant],
    together with their tail masses beyond it, whichever is smaller."""
    vals = []
    for dens in m.delays.values():
        v = dens.min_positive_on(0.0, float(max_constant))
        if v is not None:
            vals.append(v)
        tail = dens.integrate(float(max_constant), math.inf)
        if tail > 0.0:
            vals.append(tail)
    return min(vals)


# -- full pipeline -----------------------------------------------------------


@dataclass
class BsccReport:
    """Everything the analysis knows about one bottom SCC."""

    index: int
    period: int
    reach: float
    growing_clocks: list[str]
    discrete: Optional[dict]
    timed: Optional[dict]
    sweeps: list[int]
    converged: bool
    diagnostics: list[str] = field(default_factory=list)
    history: list[list[dict]] = field(default_factory=list)  # per class, per sweep


@dataclass
class AnalysisReport:
    k: int
    bsccs: list[BsccReport]
    residual: float
    bounds: dict
    grid: GridSpec
    iterations: dict
    converged: bool
    num_regions: int
    num_edges: int
    diagnostics: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        def fmt(x):
            return float(f"{x:.12g}") if isinstance(x, float) else x

        def fmt_map(d):
            return {location_key(q): fmt(v) for q, v in sorted(d.items(), key=lambda p: location_key(p[0]))} if d else None

        return {
            "k": self.k,
            "bsccs": [
                {
                    "reach": fmt(b.reach),
                    "period": b.period,
                    "growing_clocks": sorted(b.growing_clocks),
                    "D": fmt_map(b.discrete),
                    "C": fmt_map(b.timed),
                    "converged": b.converged,
                    "diagnostics": b.diagnostics,
                }
                for b in self.bsccs
            ],
            "residual": fmt(self.residual),
            "bounds": {k: fmt(v) for k, v in self.bounds.items()},
            "grid": self.grid.to_json(),
            "iterations": self.iterations,
            "num_regions": self.num_regions,
            "num_edges": self.num_edges,
            "converged": self.converged,
            "diagnostics": self.diagnostics,
        }


def location_key(loc) -> str:
    """Stable string form of a location (tuples become comma-joined)."""
    if isinstance(loc, tuple):
        return ",".join(location_key(p) for p in loc)
    return str(loc)


def _project_signature(sig: RegionSignature) -> RegionSignature:
    """Forget the letter annotation of a letter-memory region."""
    loc = sig.location
    q = loc[1] if isinstance(loc, tuple) else loc
    return RegionSignature(sig.state, q, sig.clock_info, sig.frac_order)


def _letter_memory_frequencies(
    m, a, grid, eps, tol, max_iters
) -> tuple[dict[int, dict], BsccDecomposition, RegionGraph, dict[int, list[int]]]:
    """Discrete frequencies of the letter-annotated refinement, per its BSCC."""
    a2 = with_letter_memory(a, m.states)
    graph2 = build_region_graph(m, a2)
    dec2 = decompose(graph2, m, a2)
    kernel2 = GridKernel(m, a2, GridSpec.for_dta(a2, grid.cells_per_unit))
    freqs = {}
    sweeps: dict[int, list[int]] = {}
    for j, comp in enumerate(dec2.bsccs):
        p = dec2.periods[j]
        pis = []
        sweeps[j] = []
        for cls in dec2.classes[j]:
            cells = class_cells(kernel2, cls)
            pi, n, _h = invariant_measure(
                m, a2, kernel2.grid, cells, p, tol=tol, kernel=kernel2, locations=a2.locations
            )
            pis.append(pi)
            sweeps[j].append(n)
        freqs[j] = discrete_frequencies(pis, a2.locations)
    return freqs, dec2, graph2, sweeps


def analyze(
    m: SemiMarkovProcess,
    a: Dta,
    grid: GridSpec,
    eps: float = 1e-3,
    tol: float = 1e-9,
    max_iters: int = 10_000,
) -> AnalysisReport:
    """Full pipeline: region graph, BSCC decomposition, growing-clock
    elimination, transient absorption, invariant measures, discrete and timed
    frequencies, and the analytic bound diagnostics.

    Per-BSCC convergence failures are reported in the per-BSCC diagnostics
    rather than raised, so a partial report is always available.
    """
    violations = m.validate() + a.validate()
    if violations:
        raise ValueError("invalid inputs: " + "; ".join(violations))
    if grid.cap != a.max_constant:
        raise ValueError(f"grid cap {grid.cap} != largest guard constant {a.max_constant}")

    graph = build_region_graph(m, a)
    dec = decompose(graph, m, a)
    kernel = GridKernel(m, a, grid)
    diagnostics: list[str] = []

    reduced = []
    for j, comp in enumerate(dec.bsccs):
        reduced.append(drop_growing_clocks(a, dec.growing_clocks[j], comp))

    absorption = absorb_transient(m, a, grid, graph, dec, eps=eps, max_iters=max_iters, kernel=kernel)

    # timed frequencies come from the letter-annotated refinement
    letter_freqs = None
    dec2 = None
    try:
        letter_freqs, dec2, graph2, sweeps2 = _letter_memory_frequencies(
            m, a, grid, eps, tol, max_iters
        )
        main_index = dec.bscc_index()
        match: dict[int, int] = {}
        for j2, comp2 in enumerate(dec2.bsccs):
            targets = {main_index.get(_project_signature(sig)) for sig in comp2}
            targets.discard(None)
            if len(targets) == 1:
                match[targets.pop()] = j2
            else:
                diagnostics.append(
                    f"letter-memory BSCC {j2} projects onto {len(targets)} main BSCCs"
                )
        if len(dec2.bsccs) != len(dec.bsccs):
            diagnostics.append(
                f"letter-memory refinement has {len(dec2.bsccs)} BSCCs, main graph {len(dec.bsccs)}"
            )
    except (ConvergenceError, DegenerateInputError, ValueError) as exc:
        diagnostics.append(f"timed-frequency pipeline failed: {exc}")
        match = {}

    expected = m.expected_delays()
    reports = []
    all_converged = True
    for j, comp in enumerate(dec.bsccs):
        p = dec.periods[j]
        entry = absorption.entries[j]
        sub_diag: list[str] = []
        pis: list[Distribution] = []
        sweeps: list[int] = []
        history: list[list[dict]] = []
        converged = True
        try:
            for cls in dec.classes[j]:
                cells = class_cells(kernel, cls)
                pi, n, hist = invariant_measure(
                    m, a, grid, cells, p, tol=tol, start=entry, kernel=kernel
                )
                pis.append(pi)
                sweeps.append(n)
                history.append(hist)
        except ConvergenceError as exc:
            converged = False
            sub_diag.append(str(exc))
        discrete = discrete_frequencies(pis, a.locations) if converged else None
        timed = None
        if converged and j in match and letter_freqs is not None:
            try:
                timed = timed_from_discrete(
                    letter_freqs[match[j]], expected.per_state, a.locations
                )
            except DegenerateInputError as exc:
                sub_diag.append(str(exc))
        all_converged &= converged
        reports.append(
            BsccReport(
                index=j,
                period=p,
                reach=absorption.reach[j],
                growing_clocks=sorted(dec.growing_clocks[j]),
                discrete=discrete,
                timed=timed,
                sweeps=sweeps,
                converged=converged,
                diagnostics=sub_diag,
                history=history,
            )
        )

    p_min = m.min_transition_prob()
    c_d = density_floor(m, a.max_constant)
    rb = reach_bound(1, len(graph.vertices), p_min, c_d)
    eb = ergodicity_bound(1, len(graph.vertices), p_min, c_d)
    bounds = {
        "c": rb.c,
        "p_bound": rb.p_bound,
        "r": eb.r,
        "epsilon": eb.epsilon,
        "r_saturated": eb.saturated,
        "p_min": p_min,
        "density_floor": c_d,
    }
    converged = all_converged and absorption.residual < eps
    return AnalysisReport(
        k=len(dec.bsccs),
        bsccs=reports,
        residual=absorption.residual,
        bounds=bounds,
        grid=grid,
        iterations={
            "absorption": absorption.iterations,
            "sweeps": {j: r.sweeps for j, r in enumerate(reports)},
        },
        converged=converged,
        num_regions=len(graph.vertices),
        num_edges=graph.num_edges(),
        diagnostics=diagnostics,
    )
