"""The product chain of a semi-Markov process and a DTA observing it.

A product state is (state, location, valuation).  One product step reads the
current state's letter through the automaton (possibly resetting clocks) and
then simultaneously jumps to the next state while the holding time elapses on
every clock.  The transition kernel is evaluated in closed form on generator
boxes {state'} x {location'} x (interval per clock).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .dta import Configuration, Dta
from .smp import SemiMarkovProcess


@dataclass(frozen=True)
class ProductState:
    state: str
    location: Hashable
    valuation: Mapping


@dataclass(frozen=True)
class ReadPhaseResult:
    """Automaton configuration right after reading the current state's letter."""

    location: Hashable
    valuation: Mapping
    resets: frozenset[str]


@dataclass(frozen=True)
class GeneratorBox:
    """Target set {state} x {location} x box, one (lo, hi) interval per clock.

    Interval endpoints follow the automaton clock order; hi may be math.inf.
    Endpoint openness is irrelevant because the kernel has no atoms.
    """

    state: str
    location: Hashable
    intervals: tuple[tuple[float, float], ...]


def read_phase(m: SemiMarkovProcess, a: Dta, z: ProductState) -> ReadPhaseResult:
    """Discrete half of a product step: the automaton reads z's letter."""
    edge = a.enabled_edge(z.location, m.letter(z.state), z.valuation)
    zero = type(next(iter(z.valuation.values())))(0) if z.valuation else 0.0
    val = {x: (zero if x in edge.resets else v) for x, v in z.valuation.items()}
    return ReadPhaseResult(edge.target, val, edge.resets)


def kernel_mass(m: SemiMarkovProcess, a: Dta, z: ProductState, box: GeneratorBox) -> float:
    """One-step kernel mass P(z, box), exact via the delay density's closed form.

    Zero whenever the box's location differs from the post-read location;
    otherwise the transition probability times the density mass of the time
    window that drives the post-read valuation into the box.
    """
    rp = read_phase(m, a, z)
    if box.location != rp.location:
        return 0.0
    p = m.transition_prob(z.state, box.state)
    if p == 0.0:
        return 0.0
    lo_t, hi_t = 0.0, math.inf
    for clock, (lo, hi) in zip(a.clocks, box.intervals):
        v = float(rp.valuation[clock])
        lo_t = max(lo_t, lo - v)
        hi_t = min(hi_t, hi - v)
    if hi_t <= lo_t:
        return 0.0
    return p * m.delay(z.state, box.state).integrate(lo_t, hi_t)


def multi_step_mass(m, a, z, box, steps: int, grid) -> float:
    """Approximate m-step kernel mass P^steps(z, box) on a discretization grid.

    The first step is distributed exactly from z; the remaining steps use the
    grid's cell representatives, so the result carries the grid's O(h) bias.
    """
    from . import numeric  # local import: numeric builds on this module

    if steps < 1:
        raise ValueError("steps must be >= 1")
    dist = numeric.distribute_from_state(m, a, z, 1.0, grid)
    for _ in range(steps - 1):
        dist = numeric.step_distribution(dist, m, a, grid)
    return numeric.box_mass(dist, a, grid, box)


def project_run(m: SemiMarkovProcess, a: Dta, run: Sequence) -> list[ProductState]:
    """Lift a process run ``s0 t0 s1 t1 ... sk`` to the product chain.

    The i-th product state is the state entered at step i together with the
    automaton configuration as it stands right before reading that state's
    letter.  Location-visit frequencies of the lifted run (shifted by one
    index) therefore match the automaton's own run on the word.
    """
    if len(run) % 2 == 0 or not run:
        raise ValueError("run must alternate states and stamps, ending in a state")
    states = run[0::2]
    stamps = run[1::2]
    config = Configuration(a.initial, a.zero_valuation())
    out = [ProductState(states[0], config.location, dict(config.valuation))]
    for i, t in enumerate(stamps):
        if isinstance(t, str):
            raise ValueError(f"expected a stamp at run position {2 * i + 1}, got {t!r}")
        config = a.read(config, m.letter(states[i])).elapse(t)
        out.append(ProductState(states[i + 1], config.location, dict(config.valuation)))
    return out
