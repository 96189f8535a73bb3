"""Long-run statistics: Lyapunov exponents and bifurcation-diagram scans.

The exponent is the orbit average of ln|slope| and separates the three
regimes (attracting point/cycle: negative, borderline: zero, chaos:
positive).  Scans sweep the growth parameter on a uniform grid; each
column is an independent computation, so grids can be chunked across
workers without changing a single bit of the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EscapedOrbit
from .map_core import ESCAPE_THRESHOLD, MapParams

# Slopes below this magnitude make the log sum -inf in double precision;
# the orbit is passing through the critical point (a superstable cycle).
SUPERSTABLE_SLOPE = 1.0e-300

DEFAULT_TRANSIENT = 10_000
DEFAULT_KEEP = 256
DEFAULT_X0 = 0.5


@dataclass(frozen=True)
class LyapunovResult:
    """Orbit-averaged log slope at one parameter value.

    ``exponent`` is None when the orbit hit the critical point exactly and
    the average diverges to -infinity (superstable cycle); n_used counts the
    log terms actually accumulated.
    """

    a: float
    exponent: float | None
    n_used: int

    @property
    def superstable(self) -> bool:
        return self.exponent is None


@dataclass(frozen=True)
class BifurcationData:
    """Post-transient samples per grid parameter.

    ``samples[i]`` is empty and ``escaped[i]`` True for columns whose
    trajectory left the escape window; otherwise every sample is in [0, 1].
    """

    a_values: np.ndarray
    samples: list[np.ndarray]
    escaped: list[bool]

    def __len__(self) -> int:
        return len(self.a_values)


def lyapunov(
    params: MapParams,
    x0: float,
    n: int = 100_000,
    transient: int = DEFAULT_TRANSIENT,
) -> LyapunovResult:
    """Average of ln|a*(1-2x)| over n post-transient states.

    Raises EscapedOrbit if the trajectory leaves [0, 1] (possible only for
    out-of-domain parameters).  A slope collapsing to zero short-circuits to
    the superstable marker.
    """
    if not 0.0 < x0 < 1.0:
        raise ValueError(f"x0 must be inside (0, 1), got {x0}")
    if n < 1000:
        raise ValueError(f"need n >= 1000 for a stable average, got {n}")
    a = params.a
    x = x0
    for _ in range(transient):
        x = a * (x * (1.0 - x))
        if not 0.0 <= x <= 1.0:
            raise EscapedOrbit(f"trajectory left [0, 1] at a={a}")
    acc = 0.0
    for i in range(n):
        slope = abs(a * (1.0 - 2.0 * x))
        if slope < SUPERSTABLE_SLOPE:
            return LyapunovResult(a, None, i)
        acc += math.log(slope)
        x = a * (x * (1.0 - x))
        if not 0.0 <= x <= 1.0:
            raise EscapedOrbit(f"trajectory left [0, 1] at a={a}")
    return LyapunovResult(a, acc / n, n)


def _scan_columns(
    a_values: np.ndarray, transient: int, keep: int, x0: float
) -> tuple[np.ndarray, np.ndarray]:
    """Iterate all parameter columns in lockstep.

    Returns (samples, escaped): samples has shape (len(a_values), keep) with
    NaN rows for escaped columns.  Elementwise IEEE arithmetic makes the
    result independent of how the grid is chunked.
    """
    a = np.asarray(a_values, dtype=np.float64)
    x = np.full(a.shape, np.float64(x0))
    alive = np.ones(a.shape, dtype=bool)
    out = np.full((a.shape[0], keep), np.nan)
    escaped_now = alive & ~((x >= -ESCAPE_THRESHOLD) & (x <= ESCAPE_THRESHOLD))
    if escaped_now.any():
        alive &= ~escaped_now
        x[escaped_now] = np.nan
    for _ in range(transient):
        np.multiply(a, x * (1.0 - x), out=x, where=alive)
        escaped_now = alive & ~((x >= -ESCAPE_THRESHOLD) & (x <= ESCAPE_THRESHOLD))
        if escaped_now.any():
            alive &= ~escaped_now
            x[escaped_now] = np.nan
    for k in range(keep):
        out[alive, k] = x[alive]
        np.multiply(a, x * (1.0 - x), out=x, where=alive)
        escaped_now = alive & ~((x >= -ESCAPE_THRESHOLD) & (x <= ESCAPE_THRESHOLD))
        if escaped_now.any():
            # Drop the whole column: a partially sampled escaping run is not
            # an attractor estimate.
            out[escaped_now, :] = np.nan
            alive &= ~escaped_now
            x[escaped_now] = np.nan
    return out, ~alive


def bifurcation_scan(
    a_min: float,
    a_max: float,
    n_params: int,
    transient: int = DEFAULT_TRANSIENT,
    keep: int = DEFAULT_KEEP,
    x0: float = DEFAULT_X0,
    workers: int = 1,
) -> BifurcationData:
    """Sample the attractor on a uniform parameter grid.

    For each of the n_params grid values (endpoints included) the map is
    iterated ``transient`` steps from x0, then ``keep`` states are recorded.
    The default x0 is the critical point, whose orbit falls into any
    attracting cycle.  ``workers`` > 1 splits the grid across processes;
    the assembled output is bit-identical for any worker count.
    """
    if not 0.0 <= a_min < a_max <= 4.0:
        raise ValueError(f"need 0 <= a_min < a_max <= 4, got [{a_min}, {a_max}]")
    if n_params < 2:
        raise ValueError(f"need n_params >= 2, got {n_params}")
    if keep < 1:
        raise ValueError(f"need keep >= 1, got {keep}")
    if transient < 0:
        raise ValueError(f"transient must be >= 0, got {transient}")
    a_values = np.linspace(a_min, a_max, n_params)

    if workers <= 1 or n_params < 2 * workers:
        grid_samples, escaped = _scan_columns(a_values, transient, keep, x0)
    else:
        import multiprocessing

        chunks = np.array_split(a_values, workers)
        args = [(chunk, transient, keep, x0) for chunk in chunks]
        with multiprocessing.Pool(workers) as pool:
            parts = pool.starmap(_scan_columns, args)
        grid_samples = np.concatenate([p[0] for p in parts], axis=0)
        escaped = np.concatenate([p[1] for p in parts], axis=0)

    samples = [
        np.empty(0) if escaped[i] else grid_samples[i].copy()
        for i in range(n_params)
    ]
    return BifurcationData(a_values, samples, [bool(e) for e in escaped])


def attractor_cardinality(samples, tol: float) -> int:
    """Number of single-linkage clusters of the samples at threshold tol.

    Sorted neighbors closer than or equal to tol merge; the count is the
    number of gaps exceeding tol, plus one.  Deterministic, no RNG.
    """
    arr = np.sort(np.asarray(samples, dtype=np.float64))
    if arr.size == 0:
        raise ValueError("cannot cluster an empty sample set")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if arr.size == 1:
        return 1
    gaps = np.diff(arr)
    return int(np.count_nonzero(gaps > tol)) + 1
