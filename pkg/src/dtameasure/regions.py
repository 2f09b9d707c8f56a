"""Finite region abstraction of the product chain.

Two product states are equivalent when they share the state/location pair,
the integral parts and integer flags of all relevant clocks (value at most
the largest guard constant), and the weak ordering of the fractional parts
of the relevant non-integer clocks.  The quotient is finite; its edges are
the positive-probability one-step moves, which are independent of the chosen
representative, so the graph is built by an exact rational breakpoint sweep
from one representative per region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable

import networkx as nx

from .dta import Dta
from .product import ProductState, read_phase
from .smp import SemiMarkovProcess


class InternalError(RuntimeError):
    """A structural property the construction guarantees was violated."""


@dataclass(frozen=True)
class RegionSignature:
    """Canonical name of a region.

    ``clock_info`` holds one entry per automaton clock (in clock order):
    ``None`` for an irrelevant clock, else ``(integral part, is-integer)``.
    ``frac_order`` lists the relevant non-integer clocks as blocks of equal
    fractional part, blocks in increasing fractional order and clocks inside
    a block in global clock order.
    """

    state: str
    location: Hashable
    clock_info: tuple
    frac_order: tuple[tuple[str, ...], ...]

    def label(self, clocks=None) -> str:
        parts = [str(self.state), str(self.location)]
        if clocks:
            for x, info in zip(clocks, self.clock_info):
                parts.append("%s:-" % x if info is None else f"{x}:{info[0]}.{'i' if info[1] else 'f'}")
        order = "<".join("=".join(block) for block in self.frac_order)
        parts.append(order or "-")
        return "|".join(parts)


def region_of(z: ProductState, clocks, max_constant: int) -> RegionSignature:
    """Canonical signature of the region containing z."""
    info = []
    fracs = []
    for x in clocks:
        v = z.valuation[x]
        if v > max_constant:
            info.append(None)
            continue
        whole = math.floor(v)
        is_int = v == whole
        info.append((int(whole), is_int))
        if not is_int:
            fracs.append((v - whole, x))
    blocks: list[tuple] = []
    cur_val, cur = None, []
    for f, x in sorted(fracs, key=lambda p: (p[0], clocks.index(p[1]))):
        if cur and f == cur_val:
            cur.append(x)
        else:
            if cur:
                blocks.append(tuple(cur))
            cur_val, cur = f, [x]
    if cur:
        blocks.append(tuple(cur))
    return RegionSignature(z.state, z.location, tuple(info), tuple(blocks))


def representative(sig: RegionSignature, clocks, max_constant: int) -> dict:
    """Exact rational member of the region.

    Integer-flagged clocks take their integral value, the fractional blocks
    are spread evenly as k/(r+1), and irrelevant clocks sit at the constant
    bound plus one.
    """
    val = {}
    r = len(sig.frac_order)
    frac_of = {}
    for k, block in enumerate(sig.frac_order, start=1):
        for x in block:
            frac_of[x] = Fraction(k, r + 1)
    for x, info in zip(clocks, sig.clock_info):
        if info is None:
            val[x] = Fraction(max_constant + 1)
        else:
            whole, is_int = info
            val[x] = Fraction(whole) + (Fraction(0) if is_int else frac_of[x])
    return val


def successor_masses(
    z: ProductState, m: SemiMarkovProcess, a: Dta
) -> dict[RegionSignature, float]:
    """Exact one-step kernel mass per successor region from a concrete state.

    The read phase fixes the target location, then the holding time sweeps
    the density support: between consecutive breakpoints -- the instants
    where some relevant clock reaches an integer up to the constant bound,
    plus the support endpoints -- the region of the landed state is constant,
    so each segment contributes its density mass to one region.  Regions
    touched only at isolated instants carry zero mass and never appear.
    """
    val = {x: Fraction(v) for x, v in z.valuation.items()}
    rp = read_phase(m, a, ProductState(z.state, z.location, val))
    out: dict[RegionSignature, float] = {}
    for s_next, p in m.successors(z.state):
        dens = m.delay(z.state, s_next)
        lo_f, hi_f = dens.support
        lo = Fraction(int(lo_f))
        points = {lo}
        if hi_f != math.inf:
            points.add(Fraction(int(hi_f)))
        for x in a.clocks:
            v = rp.valuation[x]
            if v > a.max_constant:
                continue  # stays irrelevant: values only grow during elapse
            k = math.floor(v + lo) + 1
            while k <= a.max_constant and (hi_f == math.inf or k - v < hi_f):
                if k - v > lo:
                    points.add(k - v)
                k += 1
        cuts = sorted(points)
        segments = [(u, w, (u + w) / 2) for u, w in zip(cuts, cuts[1:])]
        if hi_f == math.inf:
            segments.append((cuts[-1], math.inf, cuts[-1] + 1))
        for seg_lo, seg_hi, probe in segments:
            mass = p * dens.integrate(seg_lo, seg_hi)
            if mass == 0.0:
                continue
            landed = {x: rp.valuation[x] + probe for x in a.clocks}
            sig = region_of(ProductState(s_next, rp.location, landed), a.clocks, a.max_constant)
            out[sig] = out.get(sig, 0.0) + mass
    return out


def region_successors(
    sig: RegionSignature, m: SemiMarkovProcess, a: Dta
) -> set[RegionSignature]:
    """Regions reachable in one step with positive probability.

    Representative-independent: every member of the region reaches the same
    region set, so the canonical representative is used.
    """
    z = ProductState(sig.state, sig.location, representative(sig, a.clocks, a.max_constant))
    return set(successor_masses(z, m, a))


@dataclass
class RegionGraph:
    """Positive-probability reachable regions of a product chain."""

    vertices: set[RegionSignature]
    edges: dict[RegionSignature, frozenset[RegionSignature]]
    initial: set[RegionSignature]

    def num_edges(self) -> int:
        return sum(len(v) for v in self.edges.values())


def build_region_graph(m: SemiMarkovProcess, a: Dta) -> RegionGraph:
    """Breadth-first closure of the initial regions under one-step successors."""
    initial = {
        region_of(ProductState(s, a.initial, a.zero_valuation(exact=True)), a.clocks, a.max_constant)
        for s, p in m.initial.items()
        if p > 0
    }
    vertices: set[RegionSignature] = set()
    edges: dict[RegionSignature, frozenset[RegionSignature]] = {}
    frontier = list(initial)
    vertices.update(initial)
    while frontier:
        sig = frontier.pop()
        succ = frozenset(region_successors(sig, m, a))
        edges[sig] = succ
        for nxt in succ:
            if nxt not in vertices:
                vertices.add(nxt)
                frontier.append(nxt)
    return RegionGraph(vertices, edges, initial)


@dataclass
class BsccDecomposition:
    """Bottom SCCs of a region graph with their periodic structure.

    For BSCC j, ``periods[j]`` is the gcd of its cycle lengths,
    ``classes[j]`` the cyclic classes (every edge moves from class k to class
    (k+1) mod p), and ``growing_clocks[j]`` the clocks never reset by any
    read performed inside the BSCC.
    """

    bsccs: list[frozenset[RegionSignature]]
    periods: list[int]
    classes: list[list[frozenset[RegionSignature]]]
    growing_clocks: list[frozenset[str]]

    def bscc_index(self) -> dict[RegionSignature, int]:
        return {sig: j for j, comp in enumerate(self.bsccs) for sig in comp}

    def class_index(self, j: int) -> dict[RegionSignature, int]:
        return {sig: k for k, cls in enumerate(self.classes[j]) for sig in cls}


def _bscc_period_classes(comp, edges):
    """Period and cyclic classes via breadth-first levels.

    The gcd of level(u) + 1 - level(v) over all internal edges equals the gcd
    of all cycle lengths; classes are the level residues modulo it.
    """
    root = min(comp, key=lambda s: s.label())
    level = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for v in edges[u]:
                if v in comp and v not in level:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    g = 0
    for u in comp:
        for v in edges[u]:
            if v in comp:
                g = math.gcd(g, level[u] + 1 - level[v])
    p = g if g > 0 else 1
    classes = [frozenset(s for s in comp if level[s] % p == k) for k in range(p)]
    return p, classes


def decompose(graph: RegionGraph, m: SemiMarkovProcess, a: Dta) -> BsccDecomposition:
    """BSCCs, periods, cyclic classes and growing clocks of a region graph."""
    dig = nx.DiGraph()
    dig.add_nodes_from(graph.vertices)
    for u, succ in graph.edges.items():
        dig.add_edges_from((u, v) for v in succ)
    bsccs = []
    for comp in nx.strongly_connected_components(dig):
        if all(v in comp for u in comp for v in graph.edges.get(u, ())):
            bsccs.append(frozenset(comp))
    bsccs.sort(key=lambda c: min(s.label() for s in c))
    periods, classes, growing = [], [], []
    for comp in bsccs:
        p, cls = _bscc_period_classes(comp, graph.edges)
        periods.append(p)
        classes.append(cls)
        reset = set()
        for sig in comp:
            z = ProductState(sig.state, sig.location, representative(sig, a.clocks, a.max_constant))
            reset |= read_phase(m, a, z).resets
        growing.append(frozenset(a.clocks) - reset)
    return BsccDecomposition(bsccs, periods, classes, growing)


def drop_growing_clocks(a: Dta, growing: frozenset[str], bscc) -> Dta:
    """Remove clocks that only grow inside a BSCC, rewriting guards.

    Lower-bound atoms on a growing clock become true (the clock eventually
    exceeds every constant and never returns), upper-bound atoms become
    false, which deletes their edges.  Every region of the BSCC must already
    treat the growing clocks as irrelevant; anything else would contradict
    the BSCC being strongly connected and raises InternalError.
    """
    for sig in bscc:
        for x, info in zip(a.clocks, sig.clock_info):
            if x in growing and info is not None:
                raise InternalError(
                    f"growing clock {x} is relevant in BSCC region {sig.label()}"
                )
    if not growing:
        return a
    edges = []
    for e in a.edges:
        atoms = []
        dead = False
        for clock, op, const in e.guard:
            if clock in growing:
                if op in ("<", "<="):
                    dead = True  # unsatisfiable once the clock outgrows every constant
                    break
                continue  # ">"/">=" holds eventually and forever
            atoms.append((clock, op, const))
        if dead:
            continue
        edges.append(
            type(e)(e.source, e.letter, tuple(atoms), e.resets - growing, e.target)
        )
    clocks = tuple(x for x in a.clocks if x not in growing)
    return Dta(a.locations, clocks, a.initial, edges, alphabet=a.alphabet)


_PALETTE = (
    "lightblue", "lightsalmon", "palegreen", "plum", "khaki",
    "lightpink", "powderblue", "wheat",
)


def to_dot(graph: RegionGraph, dec: BsccDecomposition | None = None, clocks=None) -> str:
    """Graphviz rendering: BSCC membership as fill colour, cyclic class as xlabel."""
    order = sorted(graph.vertices, key=lambda s: s.label(clocks))
    ids = {sig: f"r{i}" for i, sig in enumerate(order)}
    bscc_of = dec.bscc_index() if dec else {}
    class_of = {}
    if dec:
        for j in range(len(dec.bsccs)):
            for sig, k in dec.class_index(j).items():
                class_of[sig] = k
    lines = ["digraph regions {", "  node [shape=box, fontsize=10];"]
    for sig in order:
        attrs = [f'label="{sig.label(clocks)}"']
        if sig in bscc_of:
            attrs.append(f'style=filled, fillcolor="{_PALETTE[bscc_of[sig] % len(_PALETTE)]}"')
            attrs.append(f'xlabel="V{class_of[sig]}"')
        if sig in graph.initial:
            attrs.append("peripheries=2")
        lines.append(f"  {ids[sig]} [{', '.join(attrs)}];")
    for sig in order:
        for nxt in sorted(graph.edges.get(sig, ()), key=lambda s: s.label(clocks)):
            lines.append(f"  {ids[sig]} -> {ids[nxt]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
