"""Doubling constants of measures on finite graphs and the least doubling constant."""
from .graph import (
    BallIndex,
    Graph,
    GraphError,
    ParseError,
    ball_mass,
    build_named,
    distance_table,
    parse_edge_list,
)
from .measures import (
    DoublingReport,
    Measure,
    MeasureError,
    QuotientWitness,
    doubling_constant,
    make_measure,
    perturb,
    symmetrize,
)
from .optimizer import BisectionResult, feasible_at, least_doubling
from .pathsolver import (
    PathMinimizerResult,
    decompose,
    least_doubling_path,
    m1,
    m2,
    refine_minimizer,
    solve_system,
)
from .spectral import SpectralResult, c0_path_closed_form, c0_spectral, power_iteration
from .window import (
    WindowReport,
    counting_z_quotient,
    lambda_alpha_quotient,
    n_window_report,
    z_window_report,
)

__version__ = "0.1.0"
