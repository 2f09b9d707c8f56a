"""Deterministic timed automata: guards, runs, validation and finite-horizon frequencies.

A DTA observes a timed word letter by letter.  Reading a letter follows the
unique enabled edge (resetting the edge's clocks); reading a time stamp grows
every clock by that amount.  Locations therefore record properties of the
word seen so far, and the long-run fraction of steps (or time) spent in a
location is the quantity the rest of this package computes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

#: guard atom: (clock, op, constant) with op in {"<", "<=", ">", ">="}
Atom = tuple[str, str, int]
Guard = tuple[Atom, ...]

#: clock valuation; exact work uses Fraction values, simulation uses floats
Valuation = dict

FREQ_TOL = 1e-12

_OPS = {
    "<": lambda v, c: v < c,
    "<=": lambda v, c: v <= c,
    ">": lambda v, c: v > c,
    ">=": lambda v, c: v >= c,
}


class TotalityError(RuntimeError):
    """No edge enabled for a (location, letter, valuation) triple."""


class DegenerateInputError(ValueError):
    """Input on which the requested quantity is undefined (e.g. 0/0)."""


def parse_atom(text: str) -> Atom:
    """Parse a guard atom such as ``"x<=2"`` (ops: <, <=, >, >=; natural constant)."""
    for op in ("<=", ">=", "<", ">"):
        if op in text:
            clock, _, const = text.partition(op)
            clock = clock.strip()
            const = const.strip()
            if not clock or not const.isdigit():
                raise ValueError(f"malformed guard atom: {text!r}")
            return (clock, op, int(const))
    raise ValueError(f"malformed guard atom: {text!r}")


def atom_str(atom: Atom) -> str:
    clock, op, const = atom
    return f"{clock}{op}{const}"


def guard_satisfied(guard: Guard, valuation: Mapping) -> bool:
    """Conjunction of atom checks; the empty guard is true.

    Raises ValueError when an atom mentions a clock absent from the valuation.
    """
    for clock, op, const in guard:
        if clock not in valuation:
            raise ValueError(f"guard mentions unknown clock {clock!r}")
        if not _OPS[op](valuation[clock], const):
            return False
    return True


@dataclass(frozen=True)
class Edge:
    source: Hashable
    letter: str
    guard: Guard
    resets: frozenset[str]
    target: Hashable

    def describe(self) -> str:
        g = " & ".join(atom_str(a) for a in self.guard) or "true"
        return f"{self.source} --{self.letter}, {g}, reset {sorted(self.resets)}--> {self.target}"


@dataclass(frozen=True)
class Configuration:
    """A location together with a clock valuation."""

    location: Hashable
    valuation: Mapping

    def elapse(self, t) -> "Configuration":
        """Grow every clock by t >= 0."""
        if t < 0:
            raise ValueError(f"cannot elapse negative time {t}")
        return Configuration(self.location, {x: v + t for x, v in self.valuation.items()})


@dataclass(frozen=True)
class FrequencyVector:
    """Per-location visit frequencies over a finite horizon."""

    values: dict
    horizon: int
    kind: str  # "discrete" or "timed"


class Dta:
    """A deterministic and total timed automaton.

    Determinism and totality are not enforced at construction time; call
    :meth:`validate` to obtain the exact list of violations.
    """

    def __init__(self, locations, clocks, initial, edges, alphabet=None):
        self.locations = tuple(locations)
        self.clocks = tuple(clocks)
        self.initial = initial
        self.edges = tuple(edges)
        if alphabet is None:
            alphabet = {e.letter for e in self.edges}
        self.alphabet = frozenset(alphabet)
        self._by_source: dict[tuple, list[Edge]] = {}
        for e in self.edges:
            self._by_source.setdefault((e.source, e.letter), []).append(e)
        self.max_constant = max((a[2] for e in self.edges for a in e.guard), default=0)

    def edges_from(self, location, letter) -> list[Edge]:
        return self._by_source.get((location, letter), [])

    def zero_valuation(self, exact: bool = False) -> Valuation:
        zero = Fraction(0) if exact else 0.0
        return {x: zero for x in self.clocks}

    def initial_configuration(self, exact: bool = False) -> Configuration:
        return Configuration(self.initial, self.zero_valuation(exact))

    def enabled_edge(self, location, letter, valuation) -> Edge:
        """The unique enabled edge; raises TotalityError when none is enabled."""
        for e in self.edges_from(location, letter):
            if guard_satisfied(e.guard, valuation):
                return e
        raise TotalityError(
            f"no edge enabled at location {location!r} for letter {letter!r} "
            f"and valuation {dict(valuation)!r}"
        )

    def read(self, config: Configuration, letter: str) -> Configuration:
        """Follow the unique enabled edge, resetting its clocks to zero."""
        edge = self.enabled_edge(config.location, letter, config.valuation)
        zero = Fraction(0) if any(isinstance(v, Fraction) for v in config.valuation.values()) else 0.0
        val = {x: (zero if x in edge.resets else v) for x, v in config.valuation.items()}
        return Configuration(edge.target, val)

    # -- validation ---------------------------------------------------------

    def _cells(self):
        """Per-clock cell decomposition up to the largest guard constant.

        Cells are [0,0], (0,1), [1,1], ..., [B,B], (B,inf); the representative
        value of a cell decides every atom with a constant <= B exactly.
        """
        b = self.max_constant
        cells = []
        for k in range(b + 1):
            cells.append((Fraction(k), f"[{k},{k}]"))
            if k < b:
                cells.append((Fraction(2 * k + 1, 2), f"({k},{k + 1})"))
        cells.append((Fraction(2 * b + 1, 2) if b else Fraction(1, 2), f"({b},inf)"))
        return cells

    def validate(self) -> list[str]:
        """Exact determinism/totality check by enumerating guard cells.

        For every (location, letter) and every cell vector of the per-clock
        decomposition, exactly one distinct (guard, resets, target) triple
        must be enabled; zero enabled is a totality violation, two or more a
        determinism violation.
        """
        out = []
        cells = self._cells()
        for q in self.locations:
            for a in sorted(self.alphabet):
                edges = self.edges_from(q, a)
                for combo in itertools.product(cells, repeat=len(self.clocks)):
                    val = {x: combo[i][0] for i, x in enumerate(self.clocks)}
                    label = ",".join(c[1] for c in combo) or "()"
                    enabled = {
                        (e.guard, e.resets, e.target)
                        for e in edges
                        if guard_satisfied(e.guard, val)
                    }
                    if not enabled:
                        out.append(f"totality violation at ({q}, {a}) for cell {label}")
                    elif len(enabled) > 1:
                        out.append(
                            f"determinism violation at ({q}, {a}) for cell {label}: "
                            f"{len(enabled)} distinct enabled edges"
                        )
        return out

    # -- runs ---------------------------------------------------------------

    def run_prefix(self, word: Sequence) -> list[Configuration]:
        """Configurations after each read and each elapse, from the initial one.

        ``word`` alternates letters and stamps starting with a letter; it may
        end with either.
        """
        config = self.initial_configuration()
        trace = [config]
        for i, c in enumerate(word):
            if i % 2 == 0:
                if not isinstance(c, str):
                    raise ValueError(f"expected a letter at word position {i}, got {c!r}")
                if c not in self.alphabet:
                    raise ValueError(f"letter {c!r} not in the automaton alphabet")
                config = self.read(config, c)
            else:
                if isinstance(c, str):
                    raise ValueError(f"expected a time stamp at word position {i}, got {c!r}")
                config = config.elapse(c)
            trace.append(config)
        return trace


def _post_read_locations(dta: Dta, word: Sequence) -> list:
    """Locations entered by each read, i.e. Q^0, Q^1, ... for the word."""
    trace = dta.run_prefix(word)
    return [c.location for i, c in enumerate(trace) if i % 2 == 1]


def discrete_frequency(dta: Dta, word: Sequence) -> FrequencyVector:
    """Fraction of read steps 1..n entering each location.

    The location entered by the very first read (index 0) is excluded; the
    horizon n is the number of subsequent reads in the word, which must be at
    least one.
    """
    locations = _post_read_locations(dta, word)
    n = len(locations) - 1
    if n < 1:
        raise ValueError("discrete frequency needs at least one post-initial read")
    values = {q: 0.0 for q in dta.locations}
    for q in locations[1:]:
        values[q] += 1.0 / n
    return FrequencyVector(values, n, "discrete")


def timed_frequency(dta: Dta, word: Sequence) -> FrequencyVector:
    """Time-weighted visit frequencies: each read step i >= 1 carries the
    stamp that elapses right after it.

    Raises DegenerateInputError when every counted stamp is zero.
    """
    locations = _post_read_locations(dta, word)
    stamps = [c for i, c in enumerate(word) if i % 2 == 1]
    n = min(len(locations), len(stamps)) - 1
    if n < 1:
        raise ValueError("timed frequency needs at least one weighted read")
    total = float(sum(stamps[1 : n + 1]))
    if total <= 0.0:
        raise DegenerateInputError("all counted stamps are zero; timed frequency undefined")
    values = {q: 0.0 for q in dta.locations}
    for i in range(1, n + 1):
        values[locations[i]] += stamps[i] / total
    return FrequencyVector(values, n, "timed")


def with_letter_memory(dta: Dta, states: Iterable[str]) -> Dta:
    """Refine ``dta`` so each location also remembers the letter that entered it.

    Locations become ``{initial} | {(letter, location)}``; every original edge
    (q, s, g, X, q') is re-targeted to (s, q') and copied onto every
    letter-annotated source (s', q).  The refinement preserves determinism and
    totality, and its location frequencies split the original ones by the
    letter read.

    The automaton alphabet must equal the given state set.
    """
    states = tuple(states)
    if set(states) != set(dta.alphabet):
        raise ValueError(
            f"alphabet {sorted(map(str, dta.alphabet))} does not match states {sorted(states)}"
        )
    q0 = dta.initial
    locations = [q0] + [(s, q) for s in states for q in dta.locations]
    edges = []
    for e in dta.edges:
        if e.source == q0:
            edges.append(Edge(q0, e.letter, e.guard, e.resets, (e.letter, e.target)))
    for e in dta.edges:
        for s_prev in states:
            edges.append(
                Edge((s_prev, e.source), e.letter, e.guard, e.resets, (e.letter, e.target))
            )
    return Dta(locations, dta.clocks, q0, edges, alphabet=dta.alphabet)
