"""Discrete and timed location-frequency measures of semi-Markov processes
observed by deterministic timed automata.

The package builds the product chain of a process and an observing
automaton, abstracts it into a finite region graph, decomposes the graph
into bottom SCCs with their periodic structure, and approximates the
long-run location frequencies both numerically (discretized kernel
iteration with closed-form error-bound diagnostics) and statistically
(seeded Monte Carlo), so the two routes can cross-check each other.
"""

from .densities import (
    DelayDensity,
    PiecewiseConstantDensity,
    ShiftedExponentialTail,
    UniformDensity,
    density_from_json,
)
from .dta import (
    Configuration,
    DegenerateInputError,
    Dta,
    Edge,
    FrequencyVector,
    TotalityError,
    discrete_frequency,
    guard_satisfied,
    parse_atom,
    timed_frequency,
    with_letter_memory,
)
from .numeric import (
    AnalysisReport,
    ConvergenceError,
    GridKernel,
    GridSpec,
    absorb_transient,
    analyze,
    density_floor,
    discrete_frequencies,
    ergodicity_bound,
    invariant_measure,
    reach_bound,
    step_distribution,
)
from .product import (
    GeneratorBox,
    ProductState,
    ReadPhaseResult,
    kernel_mass,
    multi_step_mass,
    project_run,
    read_phase,
)
from .regions import (
    BsccDecomposition,
    InternalError,
    RegionGraph,
    RegionSignature,
    build_region_graph,
    decompose,
    drop_growing_clocks,
    region_of,
    region_successors,
    representative,
    successor_masses,
    to_dot,
)
from .simulate import (
    EstimateReport,
    SimConfig,
    estimate_discrete,
    estimate_reach,
    estimate_timed,
    sample_run,
)
from .smp import ExpectedDelays, SemiMarkovProcess

__version__ = "0.1.0"
