"""JSON file formats for models, automata and reports.

Model files carry ``states``, ``transitions`` (a list of {from, to, prob,
delay}), ``initial`` and optional ``labels``; probabilities may be numbers or
decimal/fraction strings.  Automaton files carry ``locations``, ``clocks``,
``initial`` and ``edges`` with guard atoms written like ``"x<=2"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .densities import density_from_json
from .dta import Dta, Edge, parse_atom
from .smp import SemiMarkovProcess


class ParseError(ValueError):
    """Ill-formed input file; carries the offending key path and line if known."""

    def __init__(self, message: str, path: str = "", line: int | None = None):
        loc = f" at {path}" if path else ""
        loc += f" (line {line})" if line is not None else ""
        super().__init__(message + loc)
        self.path = path
        self.line = line


def _number(value, path: str) -> float:
    if isinstance(value, bool) or value is None:
        raise ParseError(f"expected a number, got {value!r}", path)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse number {value!r}: {exc}", path) from None
    raise ParseError(f"expected a number, got {value!r}", path)


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise ParseError(f"missing required key {key!r}", path)
    return obj[key]


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(obj, dict):
        raise ParseError(f"top level of {path} must be an object")
    return obj


def model_from_dict(obj: dict) -> SemiMarkovProcess:
    states = _require(obj, "states", "states")
    if not isinstance(states, list) or not states:
        raise ParseError("states must be a non-empty list", "states")
    transitions: dict[str, dict[str, float]] = {s: {} for s in states}
    delays = {}
    for i, tr in enumerate(_require(obj, "transitions", "transitions")):
        path = f"transitions[{i}]"
        src = _require(tr, "from", path)
        dst = _require(tr, "to", path)
        prob = _number(_require(tr, "prob", path), path + ".prob")
        transitions.setdefault(src, {})[dst] = prob
        if prob > 0:
            try:
                delays[(src, dst)] = density_from_json(_require(tr, "delay", path))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad delay: {exc}", path + ".delay") from None
    initial = {
        s: _number(p, f"initial.{s}") for s, p in _require(obj, "initial", "initial").items()
    }
    labels = obj.get("labels")
    return SemiMarkovProcess(states, transitions, delays, initial, labels)


def load_model(path) -> SemiMarkovProcess:
    return model_from_dict(_load_json(path))


def model_to_dict(m: SemiMarkovProcess) -> dict:
    transitions = []
    for s in m.states:
        for t, p in sorted(m.transitions.get(s, {}).items()):
            entry = {"from": s, "to": t, "prob": p}
            if p > 0:
                entry["delay"] = m.delay(s, t).to_json()
            transitions.append(entry)
    out = {
        "states": list(m.states),
        "transitions": transitions,
        "initial": dict(sorted(m.initial.items())),
    }
    if any(m.letter(s) != s for s in m.states):
        out["labels"] = dict(sorted(m.labels.items()))
    return out


def dta_from_dict(obj: dict) -> Dta:
    locations = _require(obj, "locations", "locations")
    clocks = obj.get("clocks", [])
    initial = _require(obj, "initial", "initial")
    if initial not in locations:
        raise ParseError(f"initial location {initial!r} not among locations", "initial")
    edges = []
    for i, e in enumerate(_require(obj, "edges", "edges")):
        path = f"edges[{i}]"
        guard = []
        for atom in e.get("guard", []):
            try:
                guard.append(parse_atom(atom))
            except ValueError as exc:
                raise ParseError(str(exc), path + ".guard") from None
        resets = frozenset(e.get("resets", []))
        for x in resets | {atm[0] for atm in guard}:
            if x not in clocks:
                raise ParseError(f"unknown clock {x!r}", path)
        edges.append(
            Edge(_require(e, "from", path), _require(e, "letter", path),
                 tuple(guard), resets, _require(e, "to", path))
        )
        for end in (edges[-1].source, edges[-1].target):
            if end not in locations:
                raise ParseError(f"unknown location {end!r}", path)
    alphabet = obj.get("alphabet")
    return Dta(locations, clocks, initial, edges, alphabet=alphabet)


def load_dta(path) -> Dta:
    return dta_from_dict(_load_json(path))


def dta_to_dict(a: Dta) -> dict:
    return {
        "locations": list(a.locations),
        "clocks": list(a.clocks),
        "initial": a.initial,
        "alphabet": sorted(a.alphabet),
        "edges": [
            {
                "from": e.source,
                "letter": e.letter,
                "guard": [f"{c}{op}{k}" for c, op, k in e.guard],
                "resets": sorted(e.resets),
                "to": e.target,
            }
            for e in a.edges
        ],
    }


def dump_json(obj: dict, path=None) -> str:
    """Canonical serialization: sorted keys, stable float formatting."""
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
