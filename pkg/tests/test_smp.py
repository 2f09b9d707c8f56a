import pytest

from dtameasure import SemiMarkovProcess, UniformDensity

from model_zoo import a1_model, a2


def two_state():
    return SemiMarkovProcess(
        ["s1", "s2"],
        {"s1": {"s2": 1.0}, "s2": {"s1": 1.0}},
        {("s1", "s2"): UniformDensity(0, 1), ("s2", "s1"): UniformDensity(1, 3)},
        {"s1": 1.0},
    )


def test_validate_clean():
    assert two_state().validate() == []
    assert a1_model().validate() == []


def test_validate_flags_bad_row():
    m = SemiMarkovProcess(
        ["s1", "s2"],
        {"s1": {"s2": 0.9}, "s2": {"s1": 1.0}},
        {("s1", "s2"): UniformDensity(0, 1), ("s2", "s1"): UniformDensity(1, 3)},
        {"s1": 1.0},
    )
    assert any("s1" in v and "sum" in v for v in m.validate())


def test_validate_flags_missing_delay():
    m = SemiMarkovProcess(
        ["s1", "s2"],
        {"s1": {"s2": 1.0}, "s2": {"s1": 1.0}},
        {("s1", "s2"): UniformDensity(0, 1)},
        {"s1": 1.0},
    )
    assert any("(s2, s1)" in v for v in m.validate())


def test_validate_flags_bad_initial():
    m = SemiMarkovProcess(
        ["s1"], {"s1": {"s1": 1.0}}, {("s1", "s1"): UniformDensity(0, 1)}, {"s1": 0.7}
    )
    assert any("initial" in v for v in m.validate())


def test_expected_delays():
    exp = two_state().expected_delays()
    assert exp.per_transition[("s1", "s2")] == 0.5
    assert exp.per_transition[("s2", "s1")] == 2.0
    assert exp.per_state["s1"] == pytest.approx(0.5, abs=1e-9)
    assert exp.per_state["s2"] == pytest.approx(2.0, abs=1e-9)


def test_expected_delays_mixture():
    m, _ = a2()
    exp = m.expected_delays()
    for s in m.states:
        acc = sum(p * exp.per_transition[(s, t)] for t, p in m.successors(s))
        assert exp.per_state[s] == pytest.approx(acc, abs=1e-9)


def test_cylinder_single_step():
    m = a1_model()
    assert m.cylinder_probability(["a", (0, 2), "a"]) == 0.5


def test_cylinder_empty_interval():
    m = a1_model()
    assert m.cylinder_probability(["a", (1, 1), "a"]) == 0.0


def test_cylinder_two_step():
    m = a1_model()
    assert m.cylinder_probability(["a", (0, 2), "a", (0, 2), "a"]) == 0.25


def test_cylinder_zero_probability_transition():
    m = two_state()
    assert m.cylinder_probability(["s1", (0, 1), "s1"]) == 0.0


def test_cylinder_unbounded_interval():
    m = a1_model()
    assert m.cylinder_probability(["a", (-1, None), "a"]) == 1.0


def test_cylinder_malformed():
    with pytest.raises(ValueError):
        a1_model().cylinder_probability(["a", (0, 1)])
