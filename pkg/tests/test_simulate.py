import math

import numpy as np
import pytest

from dtameasure import (
    SimConfig,
    build_region_graph,
    decompose,
    estimate_discrete,
    estimate_reach,
    estimate_timed,
    sample_run,
)
from dtameasure.numeric import GridSpec, absorb_transient
from dtameasure.simulate import run_seed

from model_zoo import a1, a1_model, a2, a3, a4, trivial_dta


def test_sample_run_deterministic():
    m = a1_model()
    assert sample_run(m, 42, 50) == sample_run(m, 42, 50)
    assert sample_run(m, 42, 50) != sample_run(m, 43, 50)


def test_sample_run_shape_and_states():
    m = a1_model()
    run = sample_run(m, 0, 10)
    assert len(run) == 21
    assert run[0::2] == ["a"] * 11
    assert all(0.0 <= t <= 4.0 for t in run[1::2])


def test_sample_run_alternating_states():
    m, _ = a2()
    run = sample_run(m, 1, 9)
    assert run[0::2] == ["s1", "s2"] * 5


def test_sampled_delay_mean():
    m = a1_model()
    stamps = sample_run(m, 7, 100_000)[1::2]
    assert np.mean(stamps) == pytest.approx(2.0, abs=0.02)


def test_run_seed_is_splitmix():
    assert run_seed(0, 0) != run_seed(0, 1)
    assert run_seed(0, 0) == run_seed(0, 0)
    assert 0 <= run_seed(123, 456) < 2**64


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(seed=0, runs=0, steps=10)
    with pytest.raises(ValueError):
        SimConfig(seed=0, runs=1, steps=10, burn_in=10)


def test_estimate_discrete_a1():
    m, a = a1()
    rep = estimate_discrete(m, a, SimConfig(seed=2, runs=200, steps=2000, burn_in=100))
    assert rep.estimates["q_up"] == pytest.approx(0.5, abs=0.01)
    assert abs(rep.estimates["q_up"] - 0.5) <= 4 * rep.stderr["q_up"] + 1e-3
    assert abs(sum(rep.estimates.values()) - 1.0) <= 1e-9


def test_estimate_discrete_one_location():
    m, _ = a3()
    a = trivial_dta(["root", "left", "right"])
    rep = estimate_discrete(m, a, SimConfig(seed=0, runs=50, steps=50, burn_in=5))
    assert rep.estimates["w"] == 1.0
    assert rep.stderr["w"] == 0.0


def test_estimate_discrete_periodic():
    m, a = a4()
    rep = estimate_discrete(m, a, SimConfig(seed=3, runs=100, steps=1000, burn_in=50))
    assert rep.estimates[("s1", "w")] == pytest.approx(0.5, abs=0.01)
    assert rep.estimates[("s2", "w")] == pytest.approx(0.5, abs=0.01)


def test_estimate_timed_a1():
    # every holding time follows the same law, so time weighting is neutral
    m, a = a1()
    rep = estimate_timed(m, a, SimConfig(seed=4, runs=200, steps=2000, burn_in=100))
    assert rep.estimates["q_up"] == pytest.approx(0.5, abs=0.01)


def test_estimate_timed_alternating():
    m, a = a2()
    rep = estimate_timed(m, a, SimConfig(seed=5, runs=200, steps=1000, burn_in=50))
    assert rep.estimates[("s1", "w")] == pytest.approx(0.2, abs=0.01)


def test_estimate_timed_one_location():
    m, _ = a3()
    a = trivial_dta(["root", "left", "right"])
    rep = estimate_timed(m, a, SimConfig(seed=0, runs=50, steps=50, burn_in=5))
    assert rep.estimates["w"] == 1.0


def test_estimate_reach_single_bscc():
    m, a = a1()
    graph = build_region_graph(m, a)
    dec = decompose(graph, m, a)
    steps = 10 * len(graph.vertices)
    rep = estimate_reach(m, a, dec, SimConfig(seed=6, runs=500, steps=steps, burn_in=0))
    assert rep.estimates[0] == 1.0
    assert rep.residual == 0.0


def test_estimate_reach_symmetric_split():
    m, a = a3()
    dec = decompose(build_region_graph(m, a), m, a)
    rep = estimate_reach(m, a, dec, SimConfig(seed=8, runs=2000, steps=40, burn_in=0))
    for j in (0, 1):
        assert abs(rep.estimates[j] - 0.5) <= 3 * rep.stderr[j]


def test_reach_matches_kernel_absorption():
    for builder, h in ((a1, 8), (a3, 2), (a4, 2)):
        m, a = builder()
        graph = build_region_graph(m, a)
        dec = decompose(graph, m, a)
        grid = GridSpec.for_dta(a, h)
        eps = 0.01
        kernel_reach = absorb_transient(m, a, grid, graph, dec, eps=eps).reach
        sim = estimate_reach(m, a, dec, SimConfig(seed=9, runs=1500, steps=60, burn_in=0))
        for j, value in enumerate(kernel_reach):
            assert abs(value - sim.estimates[j]) <= 3 * sim.stderr[j] + eps


def test_reports_are_reproducible():
    m, a = a1()
    cfg = SimConfig(seed=10, runs=30, steps=300, burn_in=30)
    r1 = estimate_discrete(m, a, cfg)
    r2 = estimate_discrete(m, a, cfg)
    assert r1.to_json() == r2.to_json()
    t1 = estimate_timed(m, a, cfg)
    t2 = estimate_timed(m, a, cfg)
    assert t1.to_json() == t2.to_json()


def test_cylinder_probability_matches_empirical():
    m = a1_model()
    template = ["a", (0.0, 2.0), "a", (1.0, 3.0), "a"]
    predicted = m.cylinder_probability(template)
    assert predicted == 0.25
    runs, hits = 100_000, 0
    for r in range(runs):
        run = sample_run(m, run_seed(77, r), 2)
        t0, t1 = run[1], run[3]
        hits += (0.0 <= t0 <= 2.0) and (1.0 <= t1 <= 3.0)
    freq = hits / runs
    se = math.sqrt(predicted * (1 - predicted) / runs)
    assert abs(freq - predicted) <= 3 * se
