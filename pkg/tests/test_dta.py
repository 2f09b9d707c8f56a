import numpy as np
import pytest
from hypothesis import given, strategies as st

from dtameasure import (
    Configuration,
    DegenerateInputError,
    Dta,
    Edge,
    discrete_frequency,
    guard_satisfied,
    parse_atom,
    timed_frequency,
    with_letter_memory,
)

from model_zoo import g, itinerary, threshold_dta, trivial_dta

WORD = ["a", 0.2, "a", 2.4, "a", 2.1]


def test_parse_atom():
    assert parse_atom("x<=2") == ("x", "<=", 2)
    assert parse_atom(" y > 10 ") == ("y", ">", 10)
    for bad in ("x==2", "x<", "<2", "x<-1"):
        with pytest.raises(ValueError):
            parse_atom(bad)


def test_guard_satisfied():
    assert guard_satisfied(g("x<=2"), {"x": 1.5})
    assert not guard_satisfied(g("x>2"), {"x": 2.0})
    assert guard_satisfied((), {"x": 99.0})
    with pytest.raises(ValueError):
        guard_satisfied(g("y<=1"), {"x": 0.0})


def test_validate_threshold_automaton():
    assert threshold_dta().validate() == []


def test_validate_totality_gap():
    a = Dta(["q1"], ["x"], "q1", [Edge("q1", "a", g("x<=2"), frozenset(), "q1")])
    problems = a.validate()
    assert any("totality" in v and "q1" in v and "(2,inf)" in v for v in problems)


def test_validate_determinism_overlap():
    edges = [
        Edge("q", "a", g("x>=1"), frozenset(), "t1"),
        Edge("q", "a", g("x<=1"), frozenset(), "t2"),
    ]
    problems = Dta(["q", "t1", "t2"], ["x"], "q", edges).validate()
    assert any("determinism" in v and "[1,1]" in v for v in problems)


def test_read_follows_unique_edge():
    a = threshold_dta()
    c = a.read(Configuration("q0", {"x": 0.0}), "a")
    assert (c.location, c.valuation["x"]) == ("q1", 0.0)
    c = a.read(Configuration("q1", {"x": 0.2}), "a")
    assert (c.location, c.valuation["x"]) == ("q_up", 0.0)
    c = a.read(Configuration("q_up", {"x": 2.4}), "a")
    assert (c.location, c.valuation["x"]) == ("q_down", 0.0)


def test_reset_law():
    a = threshold_dta()
    for v in (0.0, 1.3, 2.0, 7.5):
        c = a.read(Configuration("q_up", {"x": v}), "a")
        assert c.valuation["x"] == 0.0


def test_elapse():
    c = Configuration("q1", {"x": 0.0}).elapse(0.2)
    assert c.valuation["x"] == 0.2
    assert Configuration("q1", {"x": 1.0}).elapse(0) == Configuration("q1", {"x": 1.0})
    c = Configuration("q", {"x": 1.0, "y": 0.5}).elapse(1.5)
    assert (c.valuation["x"], c.valuation["y"]) == (2.5, 2.0)
    with pytest.raises(ValueError):
        Configuration("q", {"x": 0.0}).elapse(-0.1)


@given(
    s=st.floats(min_value=0, max_value=50),
    t=st.floats(min_value=0, max_value=50),
    v=st.floats(min_value=0, max_value=50),
)
def test_elapse_additive(s, t, v):
    c = Configuration("q", {"x": v})
    twice = c.elapse(s).elapse(t).valuation["x"]
    once = c.elapse(s + t).valuation["x"]
    assert abs(twice - once) <= 1e-12


def test_run_prefix_exact():
    trace = threshold_dta().run_prefix(WORD)
    expected = [
        ("q0", 0.0), ("q1", 0.0), ("q1", 0.2),
        ("q_up", 0.0), ("q_up", 2.4), ("q_down", 0.0), ("q_down", 2.1),
    ]
    assert [(c.location, c.valuation["x"]) for c in trace] == expected


def test_run_prefix_edges():
    a = threshold_dta()
    assert [c.location for c in a.run_prefix([])] == ["q0"]
    assert [c.location for c in a.run_prefix(["a"])] == ["q0", "q1"]
    with pytest.raises(ValueError):
        a.run_prefix(["a", "a"])
    with pytest.raises(ValueError):
        a.run_prefix([0.3, "a"])
    with pytest.raises(ValueError):
        a.run_prefix(["b"])


def test_discrete_frequency_example():
    fv = discrete_frequency(threshold_dta(), WORD)
    assert fv.horizon == 2
    assert fv.values == {"q0": 0.0, "q1": 0.0, "q_up": 0.5, "q_down": 0.5}


def test_discrete_frequency_short_stamps():
    # eleven reads with every stamp below the threshold: every counted step
    # (the initial read excluded) lands in q_up
    word = []
    for _ in range(11):
        word += ["a", 1.0]
    fv = discrete_frequency(threshold_dta(), word[:-1])
    assert fv.horizon == 10
    assert fv.values["q_up"] == pytest.approx(1.0, abs=1e-12)
    assert fv.values["q1"] == 0.0


def test_discrete_frequency_single_location():
    a = trivial_dta(["a"])
    fv = discrete_frequency(a, ["a", 0.5, "a", 1.5, "a"])
    assert fv.values == {"w": 1.0}


def test_discrete_frequency_needs_horizon():
    with pytest.raises(ValueError):
        discrete_frequency(threshold_dta(), ["a"])


def test_discrete_frequency_sums_to_one():
    rng = np.random.default_rng(0)
    a = threshold_dta()
    for _ in range(25):
        n = int(rng.integers(2, 12))
        word = []
        for _ in range(n):
            word += ["a", float(rng.uniform(0, 4))]
        fv = discrete_frequency(a, word)
        assert abs(sum(fv.values.values()) - 1.0) <= 1e-12


def test_timed_frequency_example():
    fv = timed_frequency(threshold_dta(), WORD)
    assert fv.values["q_up"] == pytest.approx(2.4 / 4.5, abs=1e-12)
    assert fv.values["q_down"] == pytest.approx(2.1 / 4.5, abs=1e-12)


def test_timed_equals_discrete_for_constant_stamps():
    a = threshold_dta()
    word = ["a", 1.5] * 8
    d = discrete_frequency(a, word)
    t = timed_frequency(a, word)
    for q in a.locations:
        assert abs(d.values[q] - t.values[q]) <= 1e-12


def test_timed_frequency_single_location():
    fv = timed_frequency(trivial_dta(["a"]), ["a", 0.5, "a", 1.5, "a", 1.0])
    assert fv.values == {"w": 1.0}


def test_timed_frequency_zero_stamps():
    with pytest.raises(DegenerateInputError):
        timed_frequency(threshold_dta(), ["a", 0.0, "a", 0.0, "a", 0.0])


def test_letter_memory_counts():
    # 3 locations, alphabet {u, v}, 4 edges, 2 of them leaving the initial
    # location; the refinement keeps those 2 and copies all 4 onto both
    # letter-annotated sources
    edges = [
        Edge("q0", "u", (), frozenset(), "q1"),
        Edge("q0", "v", (), frozenset(), "q2"),
        Edge("q1", "u", (), frozenset(), "q2"),
        Edge("q2", "v", (), frozenset(), "q0"),
    ]
    a = Dta(["q0", "q1", "q2"], [], "q0", edges)
    out = with_letter_memory(a, ["u", "v"])
    assert len(out.locations) == 1 + 2 * 3
    assert len(out.edges) == 2 + 2 * 4
    assert out.initial == "q0"


def test_letter_memory_single_letter_is_relabeling():
    a = threshold_dta()
    out = with_letter_memory(a, ["a"])
    assert set(out.locations) == {"q0"} | {("a", q) for q in a.locations}
    assert out.validate() == []


def test_letter_memory_preserves_validity():
    m, a = itinerary()
    out = with_letter_memory(a, list(m.states))
    assert out.validate() == []


def test_letter_memory_alphabet_mismatch():
    with pytest.raises(ValueError):
        with_letter_memory(threshold_dta(), ["a", "b"])


def test_read_total_on_random_probes():
    rng = np.random.default_rng(42)
    for a in (threshold_dta(), itinerary()[1]):
        letters = sorted(a.alphabet)
        for _ in range(10_000 // 2):
            q = a.locations[int(rng.integers(len(a.locations)))]
            letter = letters[int(rng.integers(len(letters)))]
            val = {x: float(rng.uniform(0, 8)) for x in a.clocks}
            a.read(Configuration(q, val), letter)  # must not raise
