"""Parametric space curves and their Frenet apparatus.

A curve is a map from a real interval into 3-space with derivative access
up to order 3 (analytic suppliers when available, symmetric finite
differences otherwise).  Curvature and torsion are computed with the
parametrization-free formulas

    kappa = |a' x a''| / |a'|^3
    tau   = det(a', a'', a''') / |a' x a''|^2

so no operation requires unit speed; arc-length bookkeeping happens
through cumulative tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import numerics
from .errors import (
    DegenerateFrameError,
    DegenerateSpeedError,
    DomainError,
    EvaluationError,
)
from .numerics import CumulativeTable, Grid

__all__ = [
    "Curve3",
    "TabulatedCurve3",
    "FrenetApparatus",
    "FrenetSamples",
    "CurvatureProfile",
    "ArcLengthTable",
    "frenet_apparatus",
    "frenet_samples",
    "arclength_table",
    "reparametrize_by_arclength",
    "curvature_profile",
    "KAPPA_EPS",
    "SPEED_EPS",
]

#: curvature below this has no well-defined normal/binormal
KAPPA_EPS = 1e-8

#: speed below this means the parametrization is not regular
SPEED_EPS = 1e-10

#: probe count used to validate analytic derivative suppliers at construction
_VALIDATION_PROBES = 16
_VALIDATION_TOL = 1e-4


class Curve3:
    """Parametric curve in 3-space with derivatives up to order 3.

    Parameters
    ----------
    fn : callable
        Maps a parameter value to a length-3 point.
    domain : (float, float)
        Closed parameter interval on which the map is defined.
    d1, d2, d3 : callable, optional
        Analytic derivative suppliers.  Missing orders fall back to
        central differences of `fn`.  Supplied derivatives are checked
        against central differences at construction.
    name : str, optional
        Identifier used in error messages and CLI output.
    """

    def __init__(self, fn, domain, d1=None, d2=None, d3=None, name: str = "curve"):
        lo, hi = float(domain[0]), float(domain[1])
        if not lo < hi:
            raise DomainError(f"curve domain must be a proper interval, got [{lo}, {hi}]")
        self.fn = fn
        self.domain = (lo, hi)
        self.name = name
        self._analytic = {1: d1, 2: d2, 3: d3}
        self._validate()

    def _validate(self):
        lo, hi = self.domain
        # keep probes away from the ends so difference stencils stay inside
        pad = 0.02 * (hi - lo)
        probes = np.linspace(lo + pad, hi - pad, _VALIDATION_PROBES)
        for t in probes:
            p = np.asarray(self.fn(t), dtype=float)
            if p.shape != (3,):
                raise EvaluationError(f"{self.name}: map must return 3-vectors, got shape {p.shape}")
            if not np.all(np.isfinite(p)):
                raise EvaluationError(f"{self.name}: non-finite point at t={t!r}")
        for order, supplier in self._analytic.items():
            if supplier is None:
                continue
            for t in probes:
                exact = np.asarray(supplier(t), dtype=float)
                approx = numerics.central_difference(self.fn, t, order=order)
                err = float(np.max(np.abs(exact - approx)))
                if err > _VALIDATION_TOL:
                    raise EvaluationError(
                        f"{self.name}: supplied order-{order} derivative disagrees with "
                        f"central differences at t={t:.6g} (|diff|={err:.3g})"
                    )

    def point(self, t: float) -> np.ndarray:
        p = np.asarray(self.fn(t), dtype=float)
        if not np.all(np.isfinite(p)):
            raise EvaluationError(f"{self.name}: non-finite point at t={t!r}")
        return p

    def derivative(self, t: float, order: int) -> np.ndarray:
        if order not in (1, 2, 3):
            raise DomainError(f"derivative order must be 1, 2 or 3, got {order}")
        supplier = self._analytic[order]
        if supplier is not None:
            return np.asarray(supplier(t), dtype=float)
        return np.asarray(numerics.central_difference(self.fn, t, order=order), dtype=float)

    @property
    def has_analytic_derivatives(self) -> bool:
        return all(self._analytic[k] is not None for k in (1, 2, 3))

    def __repr__(self):
        lo, hi = self.domain
        return f"Curve3({self.name!r}, domain=[{lo:.6g}, {hi:.6g}])"


class TabulatedCurve3(Curve3):
    """Curve materialized as uniform samples, evaluated by sliding polynomial windows.

    Evaluation and derivatives at arbitrary parameters come from the degree-6
    polynomial through the 7 nearest samples, which keeps third derivatives
    accurate enough for direct Frenet measurement on the interpolated curve.
    """

    def __init__(self, parameters, points, name="tabulated"):
        params = np.asarray(parameters, dtype=float)
        pts = np.asarray(points, dtype=float)
        if params.ndim != 1 or pts.shape != (params.size, 3) or params.size < 7:
            raise DomainError("tabulated curve needs >= 7 samples of shape (n, 3)")
        if np.any(np.diff(params) <= 0):
            raise DomainError("tabulated curve parameters must be strictly increasing")
        self.parameters = params
        self.points_array = pts
        self._window = 7

        def fn(t, _self=self):
            return _self._window_eval(t, 0)

        # attributes set directly: the base-class probe validation would
        # just difference the interpolant against itself
        lo, hi = float(params[0]), float(params[-1])
        self.fn = fn
        self.domain = (lo, hi)
        self.name = name
        self._analytic = {
            1: lambda t: self._window_eval(t, 1),
            2: lambda t: self._window_eval(t, 2),
            3: lambda t: self._window_eval(t, 3),
        }

    def _window_eval(self, t: float, order: int) -> np.ndarray:
        params = self.parameters
        if t < params[0] - 1e-12 or t > params[-1] + 1e-12:
            raise DomainError(f"{self.name}: parameter {t!r} outside tabulated range")
        n = params.size
        i = int(np.searchsorted(params, t))
        j0 = min(max(i - self._window // 2, 0), n - self._window)
        idx = slice(j0, j0 + self._window)
        w = numerics.fd_weights(float(t), params[idx], order)[:, order]
        return w @ self.points_array[idx]


@dataclass(frozen=True)
class FrenetApparatus:
    """Orthonormal frame plus curvatures of a curve at one parameter value."""

    t_param: float
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: float
    tau: float


@dataclass(frozen=True)
class FrenetSamples:
    """Frenet data measured along a sampled curve (degenerate nodes masked)."""

    t_values: np.ndarray
    points: np.ndarray
    speed: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    degenerate: np.ndarray  # bool per node: frame unreliable there


@dataclass(frozen=True)
class CurvatureProfile:
    """Sampled curvature data against arc length: kappa, tau, f = tau/kappa, sigma.

    sigma is the slant-helix function kappa^2 (tau/kappa)' / (kappa^2+tau^2)^(3/2)
    with the derivative taken with respect to arc length.
    """

    s_values: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    f: np.ndarray
    sigma: np.ndarray
    t_values: np.ndarray | None = None


@dataclass(frozen=True)
class ArcLengthTable:
    """Cumulative arc length s(t) of a curve over a grid."""

    table: CumulativeTable

    @property
    def total(self) -> float:
        return self.table.final

    def arclength(self, t: float) -> float:
        return float(self.table.interpolate(t))

    def parameter(self, s: float) -> float:
        return self.table.invert(s)


def _frenet_from_derivatives(t, v1, v2, v3, kappa_eps=KAPPA_EPS):
    speed = float(np.linalg.norm(v1))
    if speed <= SPEED_EPS:
        raise DegenerateSpeedError(f"zero speed at t={t!r}")
    cross = np.cross(v1, v2)
    cross_norm = float(np.linalg.norm(cross))
    kappa = cross_norm / speed**3
    if kappa <= kappa_eps:
        raise DegenerateFrameError(
            f"curvature {kappa:.3g} at t={t!r} is at or below the frame threshold"
        )
    T = v1 / speed
    B = cross / cross_norm
    N = np.cross(B, T)
    tau = float(np.dot(cross, v3)) / cross_norm**2
    return FrenetApparatus(t_param=float(t), T=T, N=N, B=B, kappa=kappa, tau=tau)


def frenet_apparatus(curve: Curve3, t: float, kappa_eps: float = KAPPA_EPS) -> FrenetApparatus:
    """Frenet frame and curvatures at parameter t (any regular parametrization).

    Raises
    ------
    DegenerateSpeedError
        If the speed vanishes at t.
    DegenerateFrameError
        If kappa(t) <= kappa_eps, where N and B are undefined.
    """
    v1 = curve.derivative(t, 1)
    v2 = curve.derivative(t, 2)
    v3 = curve.derivative(t, 3)
    return _frenet_from_derivatives(t, v1, v2, v3, kappa_eps)


def frenet_samples(
    t_values: np.ndarray,
    points: np.ndarray,
    kappa_eps: float = KAPPA_EPS,
) -> FrenetSamples:
    """Measure the Frenet apparatus along uniformly sampled positions.

    Derivatives come from sliding 7-point polynomial windows on the sample
    arrays, so the measurement is independent of how the samples were
    produced.  Nodes where the frame is unreliable (curvature at or below
    kappa_eps, or vanishing speed) are masked rather than raised.
    """
    t_values = np.asarray(t_values, dtype=float)
    points = np.asarray(points, dtype=float)
    d1 = numerics.table_derivative(t_values, points, 1)
    d2 = numerics.table_derivative(t_values, points, 2)
    d3 = numerics.table_derivative(t_values, points, 3)
    speed = np.linalg.norm(d1, axis=1)
    cross = np.cross(d1, d2)
    cross_norm = np.linalg.norm(cross, axis=1)
    ok = (speed > SPEED_EPS) & (cross_norm > kappa_eps * np.maximum(speed, SPEED_EPS) ** 3)

    kappa = np.zeros_like(speed)
    tau = np.zeros_like(speed)
    T = np.zeros_like(points)
    N = np.zeros_like(points)
    B = np.zeros_like(points)
    np.divide(cross_norm, speed**3, out=kappa, where=speed > SPEED_EPS)
    T[speed > SPEED_EPS] = d1[speed > SPEED_EPS] / speed[speed > SPEED_EPS, None]
    B[ok] = cross[ok] / cross_norm[ok, None]
    N[ok] = np.cross(B[ok], T[ok])
    tau[ok] = np.einsum("ij,ij->i", cross[ok], d3[ok]) / cross_norm[ok] ** 2
    return FrenetSamples(
        t_values=t_values,
        points=points,
        speed=speed,
        T=T,
        N=N,
        B=B,
        kappa=kappa,
        tau=tau,
        degenerate=~ok,
    )


def arclength_table(curve: Curve3, grid: Grid) -> ArcLengthTable:
    """Cumulative arc length over the grid (Simpson on the speed)."""

    def speed(t):
        s = float(np.linalg.norm(curve.derivative(t, 1)))
        if s <= SPEED_EPS:
            raise DegenerateSpeedError(f"zero speed at t={t!r}")
        return s

    return ArcLengthTable(numerics.cumulative_simpson(speed, grid))


def reparametrize_by_arclength(curve: Curve3, grid: Grid) -> Curve3:
    """Curve with arc length as its parameter, built on the inverted length table.

    The first derivative is supplied analytically via the chain rule
    (gamma'(t) / |gamma'(t)|); higher orders fall back to differences.
    """
    table = arclength_table(curve, grid)

    def to_t(s):
        return table.parameter(s)

    def fn(s):
        return curve.point(to_t(s))

    def d1(s):
        t = to_t(s)
        v = curve.derivative(t, 1)
        return v / np.linalg.norm(v)

    return Curve3(fn, (0.0, table.total), d1=d1, name=f"{curve.name}[arclength]")


def curvature_profile(
    curve: Curve3,
    grid: Grid,
    kappa_eps: float = KAPPA_EPS,
) -> CurvatureProfile:
    """Sample kappa, tau, f = tau/kappa and sigma along the grid.

    The curve may carry any regular parametrization: curvatures are
    parametrization invariants, arc length is accumulated from the speed,
    and the derivative inside sigma is taken against arc length via the
    chain rule.  f is differentiated as a sampled array with central
    differences.

    Raises
    ------
    DegenerateFrameError
        At the first node where kappa <= kappa_eps (the node index rides
        on the exception).
    """
    t = grid.points()
    n = t.size
    speed = np.empty(n)
    kappa = np.empty(n)
    tau = np.empty(n)
    for i, ti in enumerate(t):
        try:
            app = frenet_apparatus(curve, ti, kappa_eps)
        except DegenerateFrameError as exc:
            raise DegenerateFrameError(str(exc), node=i) from None
        speed[i] = float(np.linalg.norm(curve.derivative(ti, 1)))
        kappa[i] = app.kappa
        tau[i] = app.tau
    s_values = numerics._cumulative_simpson_values(speed, grid.step)
    f = tau / kappa
    df_dt = numerics.table_derivative(t, f, 1, window=3)
    sigma = kappa**2 / (kappa**2 + tau**2) ** 1.5 * (df_dt / speed)
    return CurvatureProfile(
        s_values=s_values, kappa=kappa, tau=tau, f=f, sigma=sigma, t_values=t
    )
