"""The quadratic map x -> a*x*(1-x): orbits, fixed points, stability.

The map is kept in its normalized one-parameter form.  The raw two-parameter
quadratic recurrence x -> x*(a - b*x) is supported only through the change of
variable that reduces it to the normalized form.

All functions here are pure and operate on plain floats; orbits are generated
strictly sequentially so repeated runs are bit-identical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import DegenerateParameter

# Iterates with magnitude beyond this are treated as having left the system
# for good (growth parameter above 4, or a start outside the unit interval).
ESCAPE_THRESHOLD = 1.0e6

# Location of the map's maximum on [0, 1].
CRITICAL_POINT = 0.5


@dataclass(frozen=True)
class MapParams:
    """Growth parameter of the normalized map.

    Values outside [0, 4] do not keep the unit interval invariant; they can
    only be constructed through :meth:`unchecked`, which tags the instance
    as out-of-domain instead of raising.
    """

    a: float
    out_of_domain: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.out_of_domain and not 0.0 <= self.a <= 4.0:
            raise DegenerateParameter(
                f"growth parameter a={self.a} outside [0, 4]; "
                "use MapParams.unchecked to study escape behavior"
            )

    @classmethod
    def unchecked(cls, a: float) -> "MapParams":
        """Construct without the domain check, tagging out-of-domain values."""
        return cls(a, out_of_domain=not 0.0 <= a <= 4.0)

    @property
    def critical_point(self) -> float:
        return CRITICAL_POINT


@dataclass(frozen=True)
class RawQuadraticParams:
    """Coefficients of the un-normalized recurrence x -> x*(a - b*x)."""

    a: float
    b: float


@dataclass(frozen=True)
class Orbit:
    """A recorded trajectory: ``states[0]`` is the first post-transient state
    and consecutive entries satisfy the map recurrence bit-for-bit.

    ``escaped`` marks trajectories that left [-ESCAPE_THRESHOLD,
    ESCAPE_THRESHOLD]; recording stops at that point, so ``states`` may be
    shorter than requested.
    """

    params: MapParams
    x0: float
    transient: int
    states: tuple[float, ...]
    escaped: bool = False


class FixedPointClass(enum.Enum):
    EXTINCTION_STABLE = "ExtinctionStable"
    INTERIOR_STABLE = "InteriorStable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


def step(params: MapParams, x: float) -> float:
    """One application of the map.

    Evaluated as a*(x*(1-x)): with this association the image of a float in
    [0, 1] provably stays in [0, a/4] for a in [0, 4], so orbits cannot leak
    out of the unit interval through rounding.
    """
    return params.a * (x * (1.0 - x))


def derivative(params: MapParams, x: float) -> float:
    """Slope of the map at x: a*(1 - 2x)."""
    return params.a * (1.0 - 2.0 * x)


def normalize_quadratic(raw: RawQuadraticParams) -> MapParams:
    """Reduce x -> x*(a - b*x) to the normalized form y -> a*y*(1-y).

    Under y = (b/a)*x the raw recurrence becomes the normalized one with the
    same growth parameter, so only ``a`` survives.  ``substitution_scale``
    gives the factor b/a.
    """
    if raw.a == 0.0 or raw.b <= 0.0:
        raise DegenerateParameter(
            f"substitution y=(b/a)x undefined for a={raw.a}, b={raw.b}"
        )
    return MapParams.unchecked(raw.a)


def substitution_scale(raw: RawQuadraticParams) -> float:
    """The factor b/a carrying raw states to normalized states."""
    if raw.a == 0.0 or raw.b <= 0.0:
        raise DegenerateParameter(
            f"substitution y=(b/a)x undefined for a={raw.a}, b={raw.b}"
        )
    return raw.b / raw.a


def raw_step(raw: RawQuadraticParams, x: float) -> float:
    """One application of the un-normalized recurrence x*(a - b*x)."""
    return x * (raw.a - raw.b * x)


def orbit(params: MapParams, x0: float, n: int, transient: int = 0) -> Orbit:
    """Iterate the map, discard ``transient`` steps, record ``n`` states.

    The first recorded state is the point reached after the transient (with
    ``transient=0`` that is ``x0`` itself).  If any iterate leaves
    [-ESCAPE_THRESHOLD, ESCAPE_THRESHOLD] the orbit stops there and is
    flagged escaped; escape is an outcome, not an error.
    """
    if n < 1:
        raise ValueError(f"need n >= 1 recorded states, got {n}")
    if transient < 0:
        raise ValueError(f"transient must be >= 0, got {transient}")
    a = params.a
    x = x0
    for _ in range(transient):
        if not -ESCAPE_THRESHOLD <= x <= ESCAPE_THRESHOLD:
            return Orbit(params, x0, transient, (), escaped=True)
        x = a * (x * (1.0 - x))
    states: list[float] = []
    for _ in range(n):
        if not -ESCAPE_THRESHOLD <= x <= ESCAPE_THRESHOLD:
            return Orbit(params, x0, transient, tuple(states), escaped=True)
        states.append(x)
        x = a * (x * (1.0 - x))
    return Orbit(params, x0, transient, tuple(states))


def fixed_points(params: MapParams) -> list[float]:
    """Solutions of step(x) = x: always 0, plus (a-1)/a once a > 1."""
    if params.a > 1.0:
        return [0.0, (params.a - 1.0) / params.a]
    return [0.0]


def classify_fixed_point(params: MapParams) -> FixedPointClass:
    """Stability regime of the map's attracting fixed point.

    Below a=1 the origin attracts; between 1 and 3 the interior point
    (a-1)/a attracts (its slope 2-a has magnitude below 1); above 3 both
    fixed points repel.  The borderline values a=1 and a=3 are reported
    as marginal rather than folded into either side.
    """
    a = params.a
    if a == 1.0 or a == 3.0:
        return FixedPointClass.MARGINAL
    if a < 1.0:
        return FixedPointClass.EXTINCTION_STABLE
    if a < 3.0:
        return FixedPointClass.INTERIOR_STABLE
    return FixedPointClass.UNSTABLE
