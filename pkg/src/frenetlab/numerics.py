"""Shared numerical kernels.

Finite differences, cumulative Simpson quadrature, monotone-table
inversion, and the constancy statistic used by the curve classifiers.
All routines are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateError, DomainError, EvaluationError

__all__ = [
    "Grid",
    "CumulativeTable",
    "central_difference",
    "cumulative_simpson",
    "invert_monotone",
    "constancy_score",
    "default_step",
    "fd_weights",
    "table_derivative",
    "monotone_slopes",
    "hermite_eval",
]

#: absolute floor used when a mean is treated as zero in constancy_score
EPS_ABS = 1e-9

#: default relative-spread threshold below which a sampled function counts as constant
CONSTANCY_TOL = 1e-4


@dataclass(frozen=True)
class Grid:
    """Uniform sampling grid on a closed interval.

    count is the number of nodes (not intervals); the implied step is
    (end - start) / (count - 1).
    """

    start: float
    end: float
    count: int

    def __post_init__(self):
        if not (np.isfinite(self.start) and np.isfinite(self.end)):
            raise DomainError("grid endpoints must be finite")
        if not self.start < self.end:
            raise DomainError(f"grid requires start < end, got [{self.start}, {self.end}]")
        if self.count < 3:
            raise DomainError(f"grid requires count >= 3, got {self.count}")

    @property
    def step(self) -> float:
        return (self.end - self.start) / (self.count - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.end, self.count)

    def with_odd_count(self) -> "Grid":
        """Round count up to the next odd integer (exact Simpson tiling)."""
        if self.count % 2 == 1:
            return self
        return Grid(self.start, self.end, self.count + 1)


@dataclass(frozen=True)
class CumulativeTable:
    """Tabulated cumulative integral: values[i] = integral from parameters[0] to parameters[i].

    Parameters are strictly increasing and values[0] is exactly 0.  When the
    integrand is positive the values are strictly increasing and the table is
    invertible.
    """

    parameters: np.ndarray
    values: np.ndarray
    _slopes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = np.asarray(self.parameters, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if p.ndim != 1 or p.shape != v.shape or p.size < 2:
            raise DomainError("cumulative table needs matching 1-d arrays of length >= 2")
        if np.any(np.diff(p) <= 0):
            raise DomainError("cumulative table parameters must be strictly increasing")
        if v[0] != 0.0:
            raise DomainError("cumulative table must start at 0")
        object.__setattr__(self, "parameters", p)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "_slopes", monotone_slopes(p, v))

    @property
    def final(self) -> float:
        return float(self.values[-1])

    def interpolate(self, t) -> np.ndarray | float:
        """Monotone cubic value of the cumulative integral at parameter t."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < self.parameters[0]) or np.any(t_arr > self.parameters[-1]):
            raise DomainError("parameter outside the tabulated range")
        out = hermite_eval(self.parameters, self.values, self._slopes, t_arr)
        return float(out) if np.ndim(t) == 0 else out

    def invert(self, v: float) -> float:
        return invert_monotone(self, v)


def default_step(t: float, order: int = 1) -> float:
    """Differentiation step balancing truncation against round-off.

    The first-order step follows max(1e-5, 1e-6 * (1 + |t|)); higher orders
    scale it up because round-off grows like eps / h**order.
    """
    base = max(1e-5, 1e-6 * (1.0 + abs(t)))
    if order <= 1:
        return base
    if order == 2:
        return 10.0 * base
    return 100.0 * base


def central_difference(f: Callable, t: float, order: int = 1, h: float | None = None):
    """Symmetric finite-difference derivative of a scalar- or vector-valued function.

    Stencils are the classic O(h^2) ones: 2-point for order 1, 3-point for
    order 2, and the 5-point antisymmetric stencil for order 3.

    Parameters
    ----------
    f : callable
        Maps a float to a float or to an array.
    t : float
        Evaluation point.
    order : {1, 2, 3}
        Derivative order.
    h : float, optional
        Step size; defaults to `default_step(t, order)`.

    Raises
    ------
    EvaluationError
        If any stencil sample is non-finite.
    DomainError
        For unsupported orders or non-positive h.
    """
    if order not in (1, 2, 3):
        raise DomainError(f"derivative order must be 1, 2 or 3, got {order}")
    if h is None:
        h = default_step(t, order)
    if h <= 0:
        raise DomainError("step size must be positive")

    def sample(x):
        val = np.asarray(f(x), dtype=float)
        if not np.all(np.isfinite(val)):
            raise EvaluationError(f"non-finite function value at t={x!r}")
        return val

    if order == 1:
        res = (sample(t + h) - sample(t - h)) / (2.0 * h)
    elif order == 2:
        res = (sample(t + h) - 2.0 * sample(t) + sample(t - h)) / (h * h)
    else:
        res = (
            sample(t + 2 * h) - 2.0 * sample(t + h) + 2.0 * sample(t - h) - sample(t - 2 * h)
        ) / (2.0 * h**3)
    return float(res) if res.ndim == 0 else res


def _cumulative_simpson_values(y: np.ndarray, h: float) -> np.ndarray:
    """Cumulative integral of uniformly sampled values (shape (n,) or (n, k)).

    Pairs of intervals are integrated with Simpson's rule; the value at the
    interior midpoint of each pair comes from the same parabola, so every
    node of the output carries a degree-3-exact cumulative value.  A trailing
    odd interval falls back to trapezoid.
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    out = np.zeros_like(y)
    # integral over [x0, x1] of the parabola through (x0, x1, x2):
    #   h/12 * (5 f0 + 8 f1 - f2); over [x0, x2]: h/3 * (f0 + 4 f1 + f2)
    for i in range(0, n - 2, 2):
        f0, f1, f2 = y[i], y[i + 1], y[i + 2]
        out[i + 1] = out[i] + (h / 12.0) * (5.0 * f0 + 8.0 * f1 - f2)
        out[i + 2] = out[i] + (h / 3.0) * (f0 + 4.0 * f1 + f2)
    if n % 2 == 0:
        out[-1] = out[-2] + 0.5 * h * (y[-2] + y[-1])
    return out


def cumulative_simpson(f: Callable[[float], float], grid: Grid) -> CumulativeTable:
    """Cumulative composite-Simpson integral of f over a uniform grid.

    An even node count leaves one unpaired interval, handled by a trapezoid
    correction; callers that need the Simpson order everywhere should pass
    grids through `Grid.with_odd_count` first.
    """
    t = grid.points()
    y = np.array([f(x) for x in t], dtype=float)
    if not np.all(np.isfinite(y)):
        bad = int(np.flatnonzero(~np.isfinite(y))[0])
        raise EvaluationError(f"non-finite integrand sample at t={t[bad]!r}")
    values = _cumulative_simpson_values(y, grid.step)
    return CumulativeTable(t, values)


def invert_monotone(table: CumulativeTable, v: float) -> float:
    """Parameter t with table(t) = v, for a nondecreasing table.

    A monotone cubic interpolant supplies the initial guess; bisection
    against the forward interpolant refines it inside the bracketing
    segment, so the result can never escape that segment.

    Raises
    ------
    DomainError
        If v lies outside [values[0], values[-1]].
    DegenerateError
        If v falls in a flat segment (zero-speed interval): the parameter
        is not unique there.
    """
    vals = table.values
    params = table.parameters
    if np.any(np.diff(vals) < 0):
        raise DomainError("invert_monotone requires nondecreasing values")
    if not np.isfinite(v) or v < vals[0] or v > vals[-1]:
        raise DomainError(f"value {v!r} outside cumulative range [{vals[0]}, {vals[-1]}]")

    # exact node hits, and endpoint handling, come first
    exact = np.flatnonzero(vals == v)
    if exact.size:
        return float(params[exact[0]])

    i = int(np.searchsorted(vals, v, side="right") - 1)
    i = min(max(i, 0), len(vals) - 2)
    lo, hi = float(params[i]), float(params[i + 1])
    if vals[i + 1] - vals[i] <= 0.0:
        raise DegenerateError("value falls in a flat (zero-speed) segment", node=i)

    # initial guess from the inverse monotone cubic where the table is
    # strictly increasing, otherwise the secant through the segment
    if np.all(np.diff(vals) > 0):
        inv_slopes = monotone_slopes(vals, params)
        t0 = float(hermite_eval(vals, params, inv_slopes, np.asarray(v)))
        t0 = min(max(t0, lo), hi)
    else:
        t0 = lo + (hi - lo) * (v - vals[i]) / (vals[i + 1] - vals[i])

    forward = lambda t: float(hermite_eval(params, vals, table._slopes, np.asarray(t)))
    f_lo = vals[i] - v
    a, b = lo, hi
    t_cur = t0
    for _ in range(80):
        f_cur = forward(t_cur) - v
        if f_cur == 0.0:
            break
        if (f_cur < 0.0) == (f_lo < 0.0):
            a = t_cur
            f_lo = f_cur
        else:
            b = t_cur
        if b - a <= 1e-14 * (1.0 + abs(a)):
            break
        t_cur = 0.5 * (a + b)
    return float(t_cur)


def constancy_score(samples: Sequence[float]) -> float:
    """Relative spread of a sample set: small means 'numerically constant'.

    Returns sd / (|mean| + 1e-9); when the mean itself is below 1e-9 the
    raw standard deviation is returned, since relative spread is
    meaningless around zero.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise DomainError("constancy_score needs at least 2 samples")
    if not np.all(np.isfinite(arr)):
        raise DomainError("constancy_score requires finite samples")
    mean = float(np.mean(arr))
    sd = float(np.std(arr))
    if abs(mean) < EPS_ABS:
        return sd
    return sd / (abs(mean) + EPS_ABS)


# ---------------------------------------------------------------------------
# finite-difference weights on arbitrary nodes (Fornberg's recurrence)
# ---------------------------------------------------------------------------


def fd_weights(z: float, x: np.ndarray, m: int) -> np.ndarray:
    """Weights w with sum(w[:, k] * f(x)) = f^(k)(z) for k = 0..m.

    Classic recurrence for finite-difference weights on arbitrarily spaced
    nodes; exact for polynomials of degree < len(x).
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


def table_derivative(x: np.ndarray, y: np.ndarray, order: int, window: int = 7) -> np.ndarray:
    """Derivative of sampled data at its own nodes via sliding polynomial windows.

    y may be (n,) or (n, k).  Each node uses the `window` nearest nodes
    (shifted at the boundaries), so accuracy is O(h^(window - order))
    everywhere, including the edges.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if n < window:
        window = n
    if window <= order:
        raise DomainError("window too small for requested derivative order")
    out = np.zeros_like(y, dtype=float)
    half = window // 2
    for i in range(n):
        j0 = min(max(i - half, 0), n - window)
        idx = slice(j0, j0 + window)
        w = fd_weights(x[i], x[idx], order)[:, order]
        out[i] = w @ y[idx]
    return out


# ---------------------------------------------------------------------------
# monotone (shape-preserving) cubic interpolation
# ---------------------------------------------------------------------------


def monotone_slopes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Fritsch-Carlson node slopes: the cubic Hermite built on them never overshoots.

    Interior slopes use the weighted harmonic mean of adjacent secants and
    are zeroed across sign changes or flat segments; endpoint slopes use the
    one-sided three-point rule with the standard monotonicity clipping.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    h = np.diff(x)
    delta = np.diff(y) / h
    m = np.zeros(n)
    if n == 2:
        m[:] = delta[0]
        return m

    for i in range(1, n - 1):
        d0, d1 = delta[i - 1], delta[i]
        if d0 == 0.0 or d1 == 0.0 or np.sign(d0) != np.sign(d1):
            m[i] = 0.0
        else:
            w1 = 2.0 * h[i] + h[i - 1]
            w2 = h[i] + 2.0 * h[i - 1]
            m[i] = (w1 + w2) / (w1 / d0 + w2 / d1)

    def endpoint(h0, h1, d0, d1):
        s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
        if s == 0.0 or d0 == 0.0 or np.sign(s) != np.sign(d0):
            return 0.0
        if abs(s) > 3.0 * abs(d0):
            return 3.0 * d0
        return s

    m[0] = endpoint(h[0], h[1], delta[0], delta[1])
    m[-1] = endpoint(h[-1], h[-2], delta[-1], delta[-2])
    return m


def hermite_eval(x: np.ndarray, y: np.ndarray, slopes: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Evaluate the cubic Hermite interpolant (x, y, slopes) at points t."""
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    tq = np.atleast_1d(t)
    i = np.clip(np.searchsorted(x, tq, side="right") - 1, 0, x.size - 2)
    h = x[i + 1] - x[i]
    u = (tq - x[i]) / h
    h00 = (1.0 + 2.0 * u) * (1.0 - u) ** 2
    h10 = u * (1.0 - u) ** 2
    h01 = u * u * (3.0 - 2.0 * u)
    h11 = u * u * (u - 1.0)
    out = h00 * y[i] + h10 * h * slopes[i] + h01 * y[i + 1] + h11 * h * slopes[i + 1]
    return out[0] if scalar else out
