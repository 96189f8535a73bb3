"""Successive approximation of the logistic initial-value problem, and the
scalar recurrence it degenerates to.

The function-space side iterates x_{n+1}(t) = x0 + integral of rhs(x_n)
from 0 to t on a uniform grid (cumulative trapezoid); under the Lipschitz
bound L with horizon T, consecutive iterates contract by at least L*T.

The scalar side drops the integral and iterates x_{n+1} = a*x_n*(1-x_n)
directly, which is precisely the discrete map: it converges where the map
has an attracting fixed point, settles into cycles where the map does, and
stops converging altogether once the doubling cascade has accumulated
(a ~ 3.57).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import cycles, map_core, ode
from .errors import IterationBudgetExhausted
from .map_core import ESCAPE_THRESHOLD, MapParams, Orbit
from .ode import OdeParams

DEFAULT_BRIDGE_TOL = 1.0e-12
DEFAULT_BRIDGE_MAX_ITER = 4096
BRIDGE_CYCLE_TOL = 1.0e-8
BRIDGE_MAX_PERIOD = 64


@dataclass(frozen=True)
class GridFunction:
    """A function sampled at t0 + k*dt, k = 0 .. len(values)-1."""

    t0: float
    dt: float
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) < 2:
            raise ValueError("a grid function needs at least 2 samples")
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.values))

    def conformable(self, other: "GridFunction") -> bool:
        return (
            self.t0 == other.t0
            and self.dt == other.dt
            and len(self.values) == len(other.values)
        )

    def sup_distance(self, other: "GridFunction") -> float:
        if not self.conformable(other):
            raise ValueError("grid functions live on different grids")
        return float(np.max(np.abs(self.values - other.values)))


@dataclass(frozen=True)
class PicardRun:
    """Iterate history of one successive-approximation run.

    deltas[k] is the sup-norm distance between iterates k and k+1;
    contraction_bound is L*T for the run's Lipschitz constant and horizon.
    """

    iterates: tuple[GridFunction, ...]
    deltas: tuple[float, ...]
    converged: bool
    contraction_bound: float
    tol: float


class BridgeClass(Enum):
    CONVERGED = "Converged"
    CYCLE = "Cycle"
    NON_CONVERGENT = "NonConvergent"


@dataclass(frozen=True)
class BridgeOutcome:
    """How the scalar recurrence behaved at one growth parameter."""

    a: float
    classification: BridgeClass
    limit: float | None = None
    period: int | None = None
    steps: int = 0


def picard_step(params: OdeParams, x0: float, current: GridFunction) -> GridFunction:
    """One application of the integral operator: x0 + cumulative trapezoid
    of rhs(current) along the grid."""
    if current.t0 != 0.0:
        raise ValueError("successive approximation runs on grids starting at t=0")
    v = current.values
    g = params.r * (params.M - v) * v
    increments = 0.5 * current.dt * (g[1:] + g[:-1])
    integral = np.concatenate(([0.0], np.cumsum(increments)))
    return GridFunction(0.0, current.dt, x0 + integral)


def contraction_horizon(params: OdeParams, x0: float) -> float:
    """The default window 0.5/L, on which the operator contracts by 1/2."""
    return 0.5 / ode.lipschitz_bound(params, max(params.M, 2.0 * x0))


def picard_iterate(
    params: OdeParams,
    x0: float,
    T: float | None = None,
    dt: float | None = None,
    tol: float = 1.0e-10,
    max_iter: int = 64,
) -> PicardRun:
    """Iterate the integral operator from the constant seed x(t) = x0.

    T defaults to the contraction horizon 0.5/L and dt to T/512.  The
    horizon is quantized to whole steps: the grid spans round(T/dt)
    intervals of exactly dt.  Stops when the sup-norm of consecutive
    iterates drops below tol; raises IterationBudgetExhausted (carrying the
    partial run) if max_iter applications are not enough.

    The recorded contraction_bound is L*T with L the Lipschitz bound of the
    right-hand side on [0, max(M, 2*x0)]; when it is below 1, consecutive
    deltas shrink at least geometrically at that rate.
    """
    if x0 < 0.0:
        raise ValueError(f"x0 must be >= 0, got {x0}")
    if T is None:
        T = contraction_horizon(params, x0)
    if dt is None:
        dt = T / 512.0
    if not T > 0.0:
        raise ValueError(f"horizon T must be positive, got {T}")
    if not dt <= T / 8.0:
        raise ValueError(f"need dt <= T/8 for a usable grid, got dt={dt}, T={T}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    n_steps = max(8, int(round(T / dt)))
    values = np.full(n_steps + 1, float(x0))
    current = GridFunction(0.0, dt, values)

    domain_hi = max(params.M, 2.0 * x0)
    bound = ode.lipschitz_bound(params, domain_hi) * T

    iterates = [current]
    deltas: list[float] = []
    converged = False
    for _ in range(max_iter):
        nxt = picard_step(params, x0, current)
        deltas.append(nxt.sup_distance(current))
        iterates.append(nxt)
        current = nxt
        if deltas[-1] < tol:
            converged = True
            break
    run = PicardRun(tuple(iterates), tuple(deltas), converged, bound, tol)
    if not converged:
        raise IterationBudgetExhausted(
            f"no convergence to {tol} within {max_iter} iterations "
            f"(last delta {deltas[-1]:.3e})",
            run=run,
        )
    return run


def solve_by_windows(
    params: OdeParams,
    x0: float,
    t_end: float,
    dt: float,
    tol: float = 1.0e-10,
    max_iter: int = 64,
) -> GridFunction:
    """Reach horizons beyond one contraction window by restarting.

    Runs the iteration on successive windows of at most 0.5/L, each seeded
    with the previous window's final value, and stitches the converged
    iterates into one grid function on [0, ~t_end] (quantized to whole
    steps of dt).  Convenience wrapper, not part of the iteration itself.
    """
    if not t_end > 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    n_total = max(8, int(round(t_end / dt)))
    values = [float(x0)]
    current = float(x0)
    done = 0
    while done < n_total:
        window_steps = int(contraction_horizon(params, current) / dt)
        # at least the 8 steps a run needs, at most what is left
        window_steps = max(8, min(window_steps, n_total - done))
        run = picard_iterate(
            params, current, window_steps * dt, dt, tol=tol, max_iter=max_iter
        )
        tail = run.iterates[-1].values[1:]
        keep = min(len(tail), n_total - done)
        values.extend(float(v) for v in tail[:keep])
        current = values[-1]
        done += keep
    return GridFunction(0.0, dt, np.array(values))


def error_exponents(
    run: PicardRun,
    params: OdeParams,
    t_lo: float = 1.0e-3,
    t_hi: float = 1.0e-2,
    noise_floor: float = 1.0e-13,
) -> list[float]:
    """Leading small-time exponent of each iterate's error against the
    closed-form solution.

    Fits the log-log slope of |iterate(t) - exact(t)| over grid points with
    t in [t_lo, t_hi].  Iterates agreeing with the solution to below
    noise_floor on the whole window report math.inf.
    """
    grid = run.iterates[0]
    ts = grid.times()
    mask = (ts >= t_lo) & (ts <= t_hi)
    if int(mask.sum()) < 2:
        raise ValueError(
            f"grid has {int(mask.sum())} points in [{t_lo}, {t_hi}]; need >= 2"
        )
    t_win = ts[mask]
    exact = np.array([ode.exact_solution(params, t) for t in t_win])
    exponents: list[float] = []
    for it in run.iterates:
        err = np.abs(it.values[mask] - exact)
        if float(err.max()) < noise_floor:
            exponents.append(math.inf)
            continue
        # Points at the rounding floor would flatten the fit; drop them.
        ok = err > noise_floor
        if int(ok.sum()) < 2:
            exponents.append(math.inf)
            continue
        slope = np.polyfit(np.log(t_win[ok]), np.log(err[ok]), 1)[0]
        exponents.append(float(slope))
    return exponents


def taylor_agreement_order(
    run: PicardRun,
    params: OdeParams,
    t_lo: float = 1.0e-3,
    t_hi: float = 1.0e-2,
    slack: float = 0.4,
) -> int:
    """Number of leading iterates whose error vanishes to the expected order.

    Iterate n should agree with the solution to O(t^(n+1)) near t=0; this
    returns the first n whose fitted error exponent falls below n+1-slack,
    or the iterate count when every iterate passes (the expected outcome
    while iterate errors stay above the quadrature floor).
    """
    exponents = error_exponents(run, params, t_lo, t_hi)
    for n, m in enumerate(exponents):
        if m < (n + 1) - slack:
            return n
    return len(exponents)


def bridge_trajectory(a: float, x_start: float, n_states: int) -> tuple[float, ...]:
    """The scalar recurrence's raw trajectory: n_states values starting at
    x_start, stepped by the map itself (identical arithmetic, same order)."""
    params = MapParams.unchecked(a)
    traj = [x_start]
    x = x_start
    for _ in range(n_states - 1):
        if not -ESCAPE_THRESHOLD <= x <= ESCAPE_THRESHOLD:
            break
        x = map_core.step(params, x)
        traj.append(x)
    return tuple(traj)


def scalar_bridge(
    a: float,
    x_start: float,
    max_iter: int = DEFAULT_BRIDGE_MAX_ITER,
    tol: float = DEFAULT_BRIDGE_TOL,
) -> BridgeOutcome:
    """Iterate x <- a*x*(1-x) and classify the long-run behavior.

    Converged: consecutive iterates got closer than tol (the limit is then
    Newton-polished); Cycle(p): the tail repeats with minimal period
    p <= 64; NonConvergent: neither, which is how chaos of the underlying
    map shows up in the iteration.
    """
    if not 0.0 < x_start < 1.0:
        raise ValueError(f"x_start must be inside (0, 1), got {x_start}")
    if max_iter < 1000:
        raise ValueError(f"max_iter must be >= 1000, got {max_iter}")

    params = MapParams.unchecked(a)
    traj = bridge_trajectory(a, x_start, max_iter + 1)
    escaped = len(traj) < max_iter + 1

    for i in range(1, len(traj)):
        if abs(traj[i] - traj[i - 1]) < tol:
            return BridgeOutcome(
                a,
                BridgeClass.CONVERGED,
                limit=_polish_fixed_point(params, traj[i]),
                steps=i,
            )
    if escaped:
        return BridgeOutcome(a, BridgeClass.NON_CONVERGENT, steps=len(traj) - 1)

    orb = Orbit(params, x_start, 0, traj, escaped=False)
    cyc = cycles.detect_cycle(orb, BRIDGE_CYCLE_TOL, BRIDGE_MAX_PERIOD)
    if cyc is not None:
        if cyc.period == 1:
            # A fixed point approached too slowly for the delta test.
            return BridgeOutcome(
                a,
                BridgeClass.CONVERGED,
                limit=_polish_fixed_point(params, cyc.points[0]),
                steps=max_iter,
            )
        return BridgeOutcome(a, BridgeClass.CYCLE, period=cyc.period, steps=max_iter)
    return BridgeOutcome(a, BridgeClass.NON_CONVERGENT, steps=max_iter)


def _polish_fixed_point(params: MapParams, x: float) -> float:
    """Newton-polish step(x) = x from a near-limit; keeps the input when the
    slope degenerates (marginal parameters)."""
    for _ in range(50):
        g = map_core.step(params, x) - x
        if abs(g) < 1.0e-15:
            break
        gp = map_core.derivative(params, x) - 1.0
        if abs(gp) < 1.0e-10:
            break
        x = x - g / gp
    return x


def breakdown_scan(
    a_min: float,
    a_max: float,
    n_params: int,
    x_start: float = 0.3,
    max_iter: int = DEFAULT_BRIDGE_MAX_ITER,
    tol: float = DEFAULT_BRIDGE_TOL,
    workers: int = 1,
) -> list[BridgeOutcome]:
    """scalar_bridge over a uniform parameter grid, in grid order.

    Each parameter is classified independently, so the grid can be chunked
    across processes without changing the output.
    """
    if not 0.0 <= a_min < a_max <= 4.0:
        raise ValueError(f"need 0 <= a_min < a_max <= 4, got [{a_min}, {a_max}]")
    if n_params < 2:
        raise ValueError(f"need n_params >= 2, got {n_params}")
    grid = np.linspace(a_min, a_max, n_params)

    if workers <= 1 or n_params < 2 * workers:
        return [scalar_bridge(float(a), x_start, max_iter, tol) for a in grid]

    import multiprocessing

    args = [(float(a), x_start, max_iter, tol) for a in grid]
    with multiprocessing.Pool(workers) as pool:
        return pool.starmap(scalar_bridge, args)
