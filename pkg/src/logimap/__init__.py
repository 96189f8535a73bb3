"""Logistic-map dynamics toolkit.

Discrete side: orbits, fixed points, cycle detection and refinement, the
period-doubling ladder and its universal gap ratio, Lyapunov exponents,
bifurcation scans.  Continuous side: the logistic ODE with closed-form and
RK4 solutions.  Bridge: successive approximation of the continuous problem
and the scalar recurrence it reduces to, which is the discrete map itself.
"""

from .map_core import (
    CRITICAL_POINT,
    ESCAPE_THRESHOLD,
    FixedPointClass,
    MapParams,
    Orbit,
    RawQuadraticParams,
    classify_fixed_point,
    derivative,
    fixed_points,
    normalize_quadratic,
    orbit,
    step,
)
from .cycles import (
    Cycle,
    SuperstableSequence,
    accumulation_point,
    cycle_multiplier,
    detect_cycle,
    feigenbaum_delta,
    find_superstable,
    refine_cycle,
    superstable_ladder,
)
from .ergodic import (
    BifurcationData,
    LyapunovResult,
    attractor_cardinality,
    bifurcation_scan,
    lyapunov,
)
from .ode import OdeParams, OdeSolution, exact_solution, lipschitz_bound, rhs, rk4_integrate
from .picard import (
    BridgeClass,
    BridgeOutcome,
    GridFunction,
    PicardRun,
    breakdown_scan,
    picard_iterate,
    picard_step,
    scalar_bridge,
    solve_by_windows,
    taylor_agreement_order,
)
from .pgm import render_bifurcation_pgm

__version__ = "0.1.0"

__all__ = [
    "CRITICAL_POINT",
    "ESCAPE_THRESHOLD",
    "BifurcationData",
    "BridgeClass",
    "BridgeOutcome",
    "Cycle",
    "FixedPointClass",
    "GridFunction",
    "LyapunovResult",
    "MapParams",
    "Orbit",
    "OdeParams",
    "OdeSolution",
    "PicardRun",
    "RawQuadraticParams",
    "SuperstableSequence",
    "accumulation_point",
    "attractor_cardinality",
    "bifurcation_scan",
    "breakdown_scan",
    "classify_fixed_point",
    "cycle_multiplier",
    "derivative",
    "detect_cycle",
    "exact_solution",
    "feigenbaum_delta",
    "find_superstable",
    "fixed_points",
    "lipschitz_bound",
    "lyapunov",
    "normalize_quadratic",
    "orbit",
    "picard_iterate",
    "picard_step",
    "refine_cycle",
    "render_bifurcation_pgm",
    "rhs",
    "rk4_integrate",
    "scalar_bridge",
    "solve_by_windows",
    "step",
    "superstable_ladder",
    "taylor_agreement_order",
]
