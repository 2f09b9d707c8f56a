"""Semi-Markov processes: a finite state chain whose transitions carry delay densities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .densities import DelayDensity

#: tolerance for distributions summing to one
DIST_TOL = 1e-12


@dataclass(frozen=True)
class ExpectedDelays:
    """Per-transition and per-state mean holding times."""

    per_transition: dict[tuple[str, str], float]
    per_state: dict[str, float]


class SemiMarkovProcess:
    """Finite-state process with random per-transition holding times.

    Parameters
    ----------
    states : iterable of str
        State names; the iteration order fixes the canonical state order.
    transitions : dict
        ``transitions[s][s']`` is the probability of jumping from s to s'.
    delays : dict
        ``delays[(s, s')]`` is the DelayDensity of the holding time of that
        jump; required exactly for the positive-probability transitions.
    initial : dict
        Initial distribution over states.
    labels : dict, optional
        Letter emitted when a state is entered; defaults to the state name.
    """

    def __init__(self, states, transitions, delays, initial, labels=None):
        self.states = tuple(states)
        self.transitions = {s: dict(row) for s, row in transitions.items()}
        self.delays = dict(delays)
        self.initial = dict(initial)
        self.labels = dict(labels) if labels else {s: s for s in self.states}

    def transition_prob(self, s: str, t: str) -> float:
        return self.transitions.get(s, {}).get(t, 0.0)

    def successors(self, s: str) -> list[tuple[str, float]]:
        return [(t, p) for t, p in self.transitions.get(s, {}).items() if p > 0]

    def delay(self, s: str, t: str) -> DelayDensity:
        return self.delays[(s, t)]

    def letter(self, s: str) -> str:
        return self.labels.get(s, s)

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(self.letter(s) for s in self.states)

    def min_transition_prob(self) -> float:
        """Smallest positive transition probability."""
        return min(p for row in self.transitions.values() for p in row.values() if p > 0)

    def validate(self) -> list[str]:
        """Invariant violations: rows/initial sum to one, delays present, densities sane."""
        out = []
        known = set(self.states)
        for s in self.states:
            row = self.transitions.get(s)
            if row is None:
                out.append(f"state {s} has no outgoing distribution")
                continue
            if any(p < 0 for p in row.values()):
                out.append(f"negative transition probability at state {s}")
            total = sum(row.values())
            if abs(total - 1.0) > DIST_TOL:
                out.append(f"transition probabilities of state {s} sum to {total}")
            for t, p in row.items():
                if t not in known:
                    out.append(f"transition {s} -> {t} targets an unknown state")
                if p > 0 and (s, t) not in self.delays:
                    out.append(f"missing delay density for transition ({s}, {t})")
        total0 = sum(self.initial.values())
        if abs(total0 - 1.0) > DIST_TOL:
            out.append(f"initial distribution sums to {total0}")
        for s in self.initial:
            if s not in known:
                out.append(f"initial distribution mentions unknown state {s}")
        for (s, t), dens in self.delays.items():
            for v in dens.validate():
                out.append(f"delay ({s}, {t}): {v}")
        return out

    def expected_delays(self) -> ExpectedDelays:
        per_transition = {}
        per_state = {}
        for s in self.states:
            acc = 0.0
            for t, p in self.successors(s):
                m = self.delay(s, t).mean()
                per_transition[(s, t)] = m
                acc += p * m
            per_state[s] = acc
        return ExpectedDelays(per_transition, per_state)

    def cylinder_probability(self, template) -> float:
        """Probability of the run cylinder described by ``template``.

        The template alternates states and time intervals,
        ``[s0, I0, s1, I1, ..., s_{n+1}]`` with each interval a (lo, hi) pair;
        the result is the initial weight of s0 times the product over steps of
        the transition probability and the delay mass on the interval.
        A zero-probability transition yields 0, not an error.
        """
        if len(template) < 3 or len(template) % 2 == 0:
            raise ValueError("template must alternate states and intervals, ending in a state")
        states = template[0::2]
        intervals = template[1::2]
        prob = self.initial.get(states[0], 0.0)
        for i, (a, b) in enumerate(intervals):
            if prob == 0.0:
                return 0.0
            s, t = states[i], states[i + 1]
            p = self.transition_prob(s, t)
            if p == 0.0:
                return 0.0
            lo = max(float(a), 0.0)
            hi = float(b) if b is not None else math.inf
            prob *= p * self.delay(s, t).integrate(min(lo, hi), hi)
        return prob
