"""Exact distance-chain statistics of planar point sets and their rotation-line arrangements."""

from .census import (
    ChainMode,
    GraphSpec,
    MultiplicityTable,
    census_bruteforce,
    chain_mass,
    complete_graph,
    connected_graphs,
    cycle_graph,
    delta_graph_census,
    delta_n_census,
    graph_multiplicities,
    hamiltonian_path,
    path_graph,
    spanning_tree,
    star_graph,
)
from .configs import PointConfig, gen_lattice, gen_random, gen_star_circles, load_config, make_config, save_config
from .corpus import standard_corpus
from .energy import (
    EnergyReport,
    MomentCheck,
    TransferOperator,
    check_cauchy_schwarz,
    check_moment_inequalities,
    energy_bruteforce,
    energy_chain,
    energy_graph,
    energy_series,
)
from .errors import (
    ChainCensusError,
    DegenerateInput,
    DuplicatePoint,
    ExhaustedSampling,
    InsufficientData,
    MalformedFile,
    MalformedNesting,
    MissingAudit,
    PlanInvalid,
    SizeGuard,
    SkewInput,
)
from .experiments import ExperimentPlan, FitSummary, ResultRow, emit_csv, emit_svg_loglog, fit_exponent, load_rows, run_plan
from .geometry import (
    MeetKind,
    Meeting,
    PlanePoint,
    Rational,
    SpaceLine,
    SpacePlane,
    SpacePoint,
    SquaredDistance,
    line_meet_classify,
    plane_through,
    squared_distance,
)

__version__ = "0.1.0"
