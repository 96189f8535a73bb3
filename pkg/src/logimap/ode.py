"""The continuous logistic equation dP/dt = r*(M-P)*P.

Provides the closed-form sigmoid solution, a classical fourth-order
Runge-Kutta reference integrator, and the analytic Lipschitz bound of the
right-hand side that the successive-approximation module builds its
contraction guarantee on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class OdeParams:
    """Growth rate r > 0, carrying capacity M > 0, initial population P0 >= 0."""

    r: float
    M: float
    P0: float

    def __post_init__(self):
        if not self.r > 0.0:
            raise ValueError(f"growth rate r must be positive, got {self.r}")
        if not self.M > 0.0:
            raise ValueError(f"carrying capacity M must be positive, got {self.M}")
        if self.P0 < 0.0:
            raise ValueError(f"initial population P0 must be >= 0, got {self.P0}")


@dataclass(frozen=True)
class OdeSolution:
    """Population sampled on a time grid starting at t0 with spacing dt.

    The final entry sits at ``t_end``; when t_end is not a whole number of
    steps the last gap is shorter than dt (interior spacing is exactly dt).
    """

    t0: float
    dt: float
    t_end: float
    values: tuple[float, ...]

    def times(self) -> list[float]:
        ts = [self.t0 + k * self.dt for k in range(len(self.values) - 1)]
        ts.append(self.t_end)
        return ts


def rhs(params: OdeParams, P: float) -> float:
    """Growth rate of the population: r*(M-P)*P."""
    return params.r * (params.M - P) * P


def exact_solution(params: OdeParams, t: float) -> float:
    """Closed-form sigmoid M*P0 / (P0 + (M-P0)*exp(-r*M*t)).

    Equilibria (P0 = 0 or P0 = M) are returned unchanged for every t.
    """
    r, M, P0 = params.r, params.M, params.P0
    if P0 == 0.0 or P0 == M:
        return P0
    return M * P0 / (P0 + (M - P0) * math.exp(-r * M * t))


def rk4_integrate(params: OdeParams, t_end: float, dt: float) -> OdeSolution:
    """Classical RK4 from t=0 to t_end with fixed step dt.

    If t_end is not an integer multiple of dt, the final step is shortened
    so the last grid point lands exactly on t_end.
    """
    if not t_end > 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if not 0.0 < dt <= t_end:
        raise ValueError(f"need 0 < dt <= t_end, got dt={dt}")
    n_full = int(t_end / dt)
    remainder = t_end - n_full * dt
    if remainder <= dt * 1.0e-12:
        remainder = 0.0

    values = [params.P0]
    P = params.P0
    for _ in range(n_full):
        P = _rk4_step(params, P, dt)
        values.append(P)
    if remainder > 0.0:
        P = _rk4_step(params, P, remainder)
        values.append(P)
    return OdeSolution(0.0, dt, t_end, tuple(values))


def _rk4_step(params: OdeParams, P: float, h: float) -> float:
    k1 = rhs(params, P)
    k2 = rhs(params, P + 0.5 * h * k1)
    k3 = rhs(params, P + 0.5 * h * k2)
    k4 = rhs(params, P + h * k3)
    return P + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def lipschitz_bound(params: OdeParams, domain_hi: float) -> float:
    """Supremum of |d rhs/dP| = |r*(M-2P)| over P in [0, domain_hi].

    The slope is linear in P, so the extremes sit at the interval endpoints:
    L = r*max(M, |M - 2*domain_hi|).  Computed analytically, not sampled.
    """
    if not domain_hi > 0.0:
        raise ValueError(f"domain_hi must be positive, got {domain_hi}")
    return params.r * max(params.M, abs(params.M - 2.0 * domain_hi))
