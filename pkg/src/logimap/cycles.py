"""Periodic orbits of the map and the period-doubling ladder.

Cycle detection reads periodicity off an orbit tail; Newton refinement
polishes cycle points to near machine precision.  The doubling ladder is
indexed by superstable parameters (the critical point 0.5 lies on the
cycle, making its multiplier vanish), located by bisection on the smooth
sign-changing return function g(a) = step_a^p(0.5) - 0.5; successive
ladder gaps give the universal contraction rate of the cascade.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import map_core
from .errors import (
    BadBracket,
    DegenerateSpacing,
    InsufficientData,
    NoConvergence,
    NotMinimalPeriod,
)
from .map_core import MapParams, Orbit

# Tolerances shared by the cycle machinery.
RESIDUAL_TOL = 1.0e-12   # |step^p(x) - x| for a refined cycle point
MINIMALITY_TOL = 1.0e-8  # proper divisors must miss by at least this

# Deepest ladder rung located: past period 256 the parameter gaps shrink
# toward the spacing of adjacent doubles near a=3.57 (~1e-13), and bisection
# brackets stop being resolvable.
MAX_LADDER_PERIOD = 256

FEIGENBAUM_DELTA = 4.6692016


@dataclass(frozen=True)
class Cycle:
    """A periodic orbit: its minimal period, points in orbit order, and the
    product of map slopes around it (attracting iff |multiplier| < 1)."""

    period: int
    points: tuple[float, ...]
    multiplier: float

    def residual(self, params: MapParams) -> float:
        """|step^period(points[0]) - points[0]|."""
        x = self.points[0]
        for _ in range(self.period):
            x = map_core.step(params, x)
        return abs(x - self.points[0])

    def is_minimal(self, params: MapParams, tol: float = MINIMALITY_TOL) -> bool:
        """True when no proper divisor of the period already closes the orbit."""
        x0 = self.points[0]
        x = x0
        for k in range(1, self.period):
            x = map_core.step(params, x)
            if self.period % k == 0 and abs(x - x0) < tol:
                return False
        return True


@dataclass(frozen=True)
class SuperstableSequence:
    """(period, parameter) pairs of the doubling ladder, period 2^k.

    Construction only checks that parameters increase; the superstable
    return residual is verified by :meth:`validate` so synthetic sequences
    can still be fed to the gap-ratio arithmetic.
    """

    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        a_values = [a for _, a in self.entries]
        if any(b <= a for a, b in zip(a_values, a_values[1:])):
            raise ValueError("ladder parameters must be strictly increasing")

    def parameters(self) -> list[float]:
        return [a for _, a in self.entries]

    def validate(self, residual_tol: float = 1.0e-12) -> None:
        """Check each entry's critical orbit closes to within residual_tol."""
        for period, a in self.entries:
            g = _critical_return(a, period)
            if abs(g) >= residual_tol:
                raise ValueError(
                    f"entry (period={period}, a={a}) has residual {abs(g):.3e}"
                )


def _iterate_with_slope(params: MapParams, x: float, p: int) -> tuple[float, float]:
    """step^p(x) together with its derivative, by the chain rule."""
    a = params.a
    slope = 1.0
    for _ in range(p):
        slope *= a * (1.0 - 2.0 * x)
        x = a * (x * (1.0 - x))
    return x, slope


def _points_from(params: MapParams, x0: float, p: int) -> tuple[float, ...]:
    pts = [x0]
    for _ in range(p - 1):
        pts.append(map_core.step(params, pts[-1]))
    return tuple(pts)


def cycle_multiplier(params: MapParams, cycle: Cycle) -> float:
    """Product of map slopes along the cycle's points."""
    m = 1.0
    for x in cycle.points:
        m *= params.a * (1.0 - 2.0 * x)
    return m


def detect_cycle(orb: Orbit, tol: float, max_period: int) -> Cycle | None:
    """Read a periodic tail off an orbit, if one exists.

    Returns the cycle of minimal period p <= max_period whose last 2p states
    repeat to within tol, with the points taken verbatim from the tail.
    Returns None for an aperiodic (chaotic) tail.
    """
    if orb.escaped:
        raise ValueError("cannot detect cycles on an escaped orbit")
    if max_period < 1:
        raise ValueError(f"max_period must be >= 1, got {max_period}")
    states = orb.states
    if len(states) < 2 * max_period:
        raise InsufficientData(
            f"orbit has {len(states)} states, need >= {2 * max_period}"
        )
    last = len(states) - 1
    for p in range(1, max_period + 1):
        if all(abs(states[last - j] - states[last - j - p]) < tol for j in range(p)):
            points = states[-p:]
            mult = 1.0
            for x in points:
                mult *= orb.params.a * (1.0 - 2.0 * x)
            return Cycle(p, points, mult)
    return None


def refine_cycle(params: MapParams, guess: float, p: int) -> Cycle:
    """Newton-polish a point of a period-p orbit from a nearby guess.

    Solves step^p(x) = x to RESIDUAL_TOL.  Where the Newton denominator
    degenerates (multiplier of the composed map ~ 1) a local bisection
    bracket is used for that step instead.  Raises NotMinimalPeriod when
    the converged point already closes under a proper divisor of p.
    """
    if p < 1:
        raise ValueError(f"period must be >= 1, got {p}")
    if not 0.0 <= guess <= 1.0:
        raise ValueError(f"guess {guess} outside [0, 1]")

    def g(x: float) -> tuple[float, float]:
        y, slope = _iterate_with_slope(params, x, p)
        return y - x, slope - 1.0

    x = guess
    for _ in range(100):
        gx, gpx = g(x)
        if abs(gx) < RESIDUAL_TOL:
            break
        if abs(gpx) < 1.0e-10:
            x_new = _bisect_near(g, x)
            if x_new is None:
                raise NoConvergence(
                    f"flat Newton denominator near x={x} and no local bracket"
                )
            x = x_new
            continue
        x = x - gx / gpx
    else:
        raise NoConvergence(f"period-{p} refinement from {guess} did not converge")

    for d in range(1, p):
        if p % d == 0:
            y, _ = _iterate_with_slope(params, x, d)
            if abs(y - x) < MINIMALITY_TOL:
                raise NotMinimalPeriod(
                    f"refined point {x} already closes at period {d} < {p}"
                )
    points = _points_from(params, x, p)
    mult = 1.0
    for pt in points:
        mult *= params.a * (1.0 - 2.0 * pt)
    return Cycle(p, points, mult)


def _bisect_near(g, x0: float, h0: float = 1.0e-4):
    """Expanding search for a sign change of g around x0, then bisection."""
    h = h0
    while h <= 0.5:
        lo, hi = x0 - h, x0 + h
        glo, ghi = g(lo)[0], g(hi)[0]
        if glo == 0.0:
            return lo
        if ghi == 0.0:
            return hi
        if (glo < 0.0) != (ghi < 0.0):
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if mid == lo or mid == hi:
                    break
                gm = g(mid)[0]
                if gm == 0.0:
                    return mid
                if (gm < 0.0) == (glo < 0.0):
                    lo, glo = mid, gm
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        h *= 2.0
    return None


def _critical_return(a: float, period: int) -> float:
    """g(a) = step_a^period(0.5) - 0.5, the superstable residual."""
    x = 0.5
    for _ in range(period):
        x = a * (x * (1.0 - x))
    return x - 0.5


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def find_superstable(params_bracket: tuple[float, float], period: int) -> float:
    """Parameter at which the critical point lies on a period-`period` orbit.

    Bisects g(a) = step_a^period(0.5) - 0.5 on the bracket (>= 60 halvings,
    stopping early only when the bracket collapses to adjacent doubles),
    then polishes with a few secant steps, keeping the iterate of smallest
    |g|.  Raises NoConvergence if no parameter with |g| < 1e-13 was found.
    """
    if not _is_power_of_two(period) or period > MAX_LADDER_PERIOD:
        raise ValueError(
            f"period must be a power of two <= {MAX_LADDER_PERIOD}, got {period}"
        )
    lo, hi = params_bracket
    if not lo < hi:
        raise BadBracket(f"bracket ({lo}, {hi}) is not an interval")
    glo = _critical_return(lo, period)
    ghi = _critical_return(hi, period)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if (glo < 0.0) == (ghi < 0.0):
        raise BadBracket(
            f"g has the same sign at both endpoints ({glo:.3e}, {ghi:.3e})"
        )

    best_a, best_g = (lo, glo) if abs(glo) < abs(ghi) else (hi, ghi)
    halvings = 0
    while halvings < 200:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        gm = _critical_return(mid, period)
        halvings += 1
        if abs(gm) < abs(best_g):
            best_a, best_g = mid, gm
        if gm == 0.0:
            break
        if (gm < 0.0) == (glo < 0.0):
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
        if halvings >= 60 and abs(best_g) < 1.0e-13:
            break

    # Secant polish from the final bracket.
    x0, f0 = lo, glo
    x1, f1 = hi, ghi
    for _ in range(8):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not lo <= x2 <= hi:
            break
        f2 = _critical_return(x2, period)
        if abs(f2) < abs(best_g):
            best_a, best_g = x2, f2
        if f2 == 0.0:
            break
        x0, f0, x1, f1 = x1, f1, x2, f2
    if not abs(best_g) < 1.0e-13:
        raise NoConvergence(
            f"period-{period} return residual floored at {abs(best_g):.3e}"
        )
    return best_a


def superstable_ladder(max_period: int) -> SuperstableSequence:
    """Locate the superstable parameters for periods 1, 2, 4, ..., max_period.

    Brackets are seeded by scanning g(a) left to right on a grid of at most
    1e-3 spacing from just above the previous rung toward 3.6; between the
    previous rung and the accumulation point g has exactly one sign change
    (the next rung), so the first flagged grid cell brackets it.  The scan
    start is offset from the previous rung, where g also vanishes, and the
    spacing shrinks with the predicted gap for the deep rungs.
    """
    if not _is_power_of_two(max_period) or max_period > MAX_LADDER_PERIOD:
        raise ValueError(
            f"max_period must be a power of two <= {MAX_LADDER_PERIOD}, "
            f"got {max_period}"
        )
    entries: list[tuple[int, float]] = []
    period = 1
    prev_gap = None
    while period <= max_period:
        spacing = 1.0e-3
        if not entries:
            start = 1.0 + 1.0e-3
        else:
            prev = entries[-1][1]
            if prev_gap is None:
                offset = 1.0e-3
            else:
                # Gaps contract by roughly the universal factor 4.669 per
                # rung.  The scan must start strictly between the previous
                # rung (where g also vanishes) and the next, and its cells
                # must stay short of the accumulation point, beyond which
                # periodic windows give g extra roots; a quarter and an
                # eighth of the predicted gap satisfy both with margin.
                predicted = prev_gap / FEIGENBAUM_DELTA
                offset = predicted / 4.0
                spacing = min(spacing, predicted / 8.0)
            start = prev + offset
        bracket = _scan_for_bracket(start, 3.6, spacing, period)
        if bracket is None:
            raise NoConvergence(
                f"no sign change of the period-{period} return found in "
                f"[{start}, 3.6]"
            )
        a_k = find_superstable(bracket, period)
        if entries:
            prev_gap = a_k - entries[-1][1]
        entries.append((period, a_k))
        period *= 2
    return SuperstableSequence(tuple(entries))


def _scan_for_bracket(start: float, stop: float, spacing: float, period: int):
    a_prev = start
    g_prev = _critical_return(a_prev, period)
    a = start + spacing
    while a_prev < stop:
        g = _critical_return(a, period)
        if g == 0.0:
            return (a - spacing * 1.0e-3, a + spacing * 1.0e-3)
        if (g < 0.0) != (g_prev < 0.0):
            return (a_prev, a)
        a_prev, g_prev = a, g
        a = a_prev + spacing
    return None


def feigenbaum_delta(seq: SuperstableSequence) -> list[float]:
    """Successive gap ratios (a_k - a_{k-1}) / (a_{k+1} - a_k) of the ladder."""
    a = seq.parameters()
    if len(a) < 3:
        raise InsufficientData(f"need >= 3 ladder entries, got {len(a)}")
    for x, y in zip(a, a[1:]):
        if abs(y - x) < 1.0e-14:
            raise DegenerateSpacing(f"parameters {x} and {y} coincide")
    return [(a[k] - a[k - 1]) / (a[k + 1] - a[k]) for k in range(1, len(a) - 1)]


def accumulation_point(seq: SuperstableSequence, delta: float) -> float:
    """Geometric extrapolation of the ladder's limit from its last two rungs.

    Exact when the gaps are exactly geometric with ratio 1/delta.
    """
    a = seq.parameters()
    if len(a) < 2:
        raise InsufficientData(f"need >= 2 ladder entries, got {len(a)}")
    if not delta > 1.0:
        raise ValueError(f"delta must exceed 1, got {delta}")
    return a[-1] + (a[-1] - a[-2]) / (delta - 1.0)


def delta_trend_is_settling(deltas: list[float], start: int = 3) -> bool:
    """Whether later gap-ratio corrections shrink monotonically."""
    diffs = [abs(b - a) for a, b in zip(deltas, deltas[1:])]
    tail = diffs[start - 1 :]
    return all(y < x for x, y in zip(tail, tail[1:]))
