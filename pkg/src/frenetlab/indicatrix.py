"""Tangent indicatrix of a space curve and its closed-form apparatus.

The unit tangents of a curve trace a curve on the unit sphere whose
natural parameter is the accumulated total curvature.  Its frame and
curvatures have closed forms in the donor curve's frame and the ratio
f = tau/kappa:

    T_ind = N
    N_ind = (-T + f B) / sqrt(1 + f^2)        kappa_ind = sqrt(1 + f^2)
    B_ind = ( f T + B) / sqrt(1 + f^2)        tau_ind   = sigma * sqrt(1 + f^2)

Sampled tables store the equivalent cleared-denominator forms
(-kappa T + tau B)/mu and (tau T + kappa B)/mu with mu = sqrt(kappa^2+tau^2),
which stay finite when kappa passes through zero.  Across an isolated
curvature zero the frame is continued by sign (kappa flips with N and B),
matching the smooth analytic continuation; on curves with kappa > 0
everywhere this reduces to the plain definitions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics
from .curves import (
    KAPPA_EPS,
    SPEED_EPS,
    Curve3,
    TabulatedCurve3,
    frenet_apparatus,
)
from .errors import DegenerateError, DegenerateFrameError, DegenerateSpeedError, DomainError
from .numerics import Grid

__all__ = [
    "IndicatrixApparatus",
    "IndicatrixTable",
    "build_indicatrix_table",
    "tangent_indicatrix",
    "indicatrix_apparatus",
    "FRAME_RELIABILITY_FLOOR",
]

#: below this curvature a node's frame direction is treated as numerically
#: unreliable and rebuilt from its neighbours (>= KAPPA_EPS)
FRAME_RELIABILITY_FLOOR = 1e-6


@dataclass(frozen=True)
class IndicatrixApparatus:
    """Closed-form frame and curvatures of the tangent indicatrix at one point."""

    s_T: float
    T_T: np.ndarray
    N_T: np.ndarray
    B_T: np.ndarray
    kappa_T: float
    tau_T: float


@dataclass(frozen=True)
class IndicatrixTable:
    """Sampled indicatrix apparatus along a donor grid.

    All arrays share the donor grid's length.  Donor frame fields carry the
    sign continuation described in the module docstring: `kappa` is signed
    and `degenerate` marks nodes whose frame was rebuilt by interpolation.
    `s_T` accumulates the signed natural parameter (equal to indicatrix arc
    length whenever kappa > 0 throughout), and `int_tau`/`int_kappa` are the
    running integrals of tau_ind and kappa_ind against it.
    """

    t_values: np.ndarray      # donor parameter
    speed: np.ndarray         # donor |gamma'|
    s_values: np.ndarray      # donor arc length
    points: np.ndarray        # indicatrix positions = unit tangents
    T: np.ndarray             # donor frame, sign-continued
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray         # signed donor curvature
    tau: np.ndarray
    f: np.ndarray             # tau/kappa (unbounded near curvature zeros)
    sigma: np.ndarray         # slant-helix function, cusp-stable form
    mu: np.ndarray            # sqrt(kappa^2 + tau^2)
    s_T: np.ndarray           # signed natural parameter of the indicatrix
    int_tau: np.ndarray       # integral of tau_ind d s_T
    int_kappa: np.ndarray     # integral of kappa_ind d s_T
    T_T: np.ndarray
    N_T: np.ndarray
    B_T: np.ndarray
    kappa_T: np.ndarray       # signed; unbounded near curvature zeros
    tau_T: np.ndarray
    degenerate: np.ndarray    # bool per node

    @property
    def is_regular(self) -> bool:
        return not bool(np.any(self.degenerate))

    @property
    def step(self) -> float:
        return float(self.t_values[1] - self.t_values[0])

    def require_regular(self):
        if not self.is_regular:
            node = int(np.flatnonzero(self.degenerate)[0])
            raise DegenerateFrameError("curvature vanishes on the grid", node=node)

    def _interp_at_s_T(self, array: np.ndarray, s_T: float) -> float:
        if not self.is_regular:
            self.require_regular()
        s = self.s_T
        if np.any(np.diff(s) <= 0):
            raise DomainError("indicatrix natural parameter is not monotone on this table")
        if s_T < s[0] or s_T > s[-1]:
            raise DomainError(f"s_T={s_T!r} outside tabulated range [{s[0]}, {s[-1]}]")
        slopes = numerics.monotone_slopes(s, array)
        return float(numerics.hermite_eval(s, array, slopes, np.asarray(s_T)))

    def int_tau_at(self, s_T: float) -> float:
        return self._interp_at_s_T(self.int_tau, s_T)

    def int_kappa_at(self, s_T: float) -> float:
        return self._interp_at_s_T(self.int_kappa, s_T)

    def frame_at(self, s_T: float):
        """Indicatrix frame vectors at s_T by componentwise interpolation."""
        T_T = np.array([self._interp_at_s_T(self.T_T[:, j], s_T) for j in range(3)])
        N_T = np.array([self._interp_at_s_T(self.N_T[:, j], s_T) for j in range(3)])
        B_T = np.array([self._interp_at_s_T(self.B_T[:, j], s_T) for j in range(3)])
        return T_T, N_T, B_T

    def curvatures_at(self, s_T: float):
        """(kappa_ind, tau_ind) at s_T, interpolating the cleared forms."""
        mu = self._interp_at_s_T(self.mu, s_T)
        kap = self._interp_at_s_T(self.kappa, s_T)
        sig = self._interp_at_s_T(self.sigma, s_T)
        if abs(kap) <= KAPPA_EPS:
            raise DegenerateFrameError(f"donor curvature vanishes at s_T={s_T!r}")
        kappa_T = mu / kap
        return kappa_T, sig * kappa_T


def _fill_masked_frames(t, T, N, B, tau, masked):
    """Rebuild frame directions at masked nodes from nearby reliable ones."""
    good = np.flatnonzero(~masked)
    if good.size < 4:
        raise DegenerateFrameError("too few reliable frames to continue through a cusp")
    for i in np.flatnonzero(masked):
        order = good[np.argsort(np.abs(good - i))][:4]
        order = np.sort(order)
        w = numerics.fd_weights(t[i], t[order], 0)[:, 0]
        n_fill = w @ N[order]
        tau[i] = w @ tau[order]
        n_fill -= np.dot(n_fill, T[i]) * T[i]
        norm = np.linalg.norm(n_fill)
        if norm <= 1e-12:
            raise DegenerateFrameError("cannot rebuild frame at a degenerate node", node=int(i))
        N[i] = n_fill / norm
        B[i] = np.cross(T[i], N[i])


def build_indicatrix_table(
    curve: Curve3,
    grid: Grid,
    kappa_eps: float = KAPPA_EPS,
    reliability_floor: float = FRAME_RELIABILITY_FLOOR,
    allow_degenerate: bool = True,
) -> IndicatrixTable:
    """Sample the donor frame along the grid and derive the indicatrix apparatus.

    With allow_degenerate=False any node with curvature <= reliability_floor
    raises DegenerateFrameError; otherwise such nodes are masked, their frame
    directions rebuilt by interpolation, and the signed continuation carries
    the apparatus through the curvature zero.

    Raises
    ------
    DegenerateSpeedError
        If the parametrization stops at a node (not recoverable).
    """
    t = grid.points()
    n = t.size
    h = grid.step
    pts = np.empty((n, 3))
    speed = np.empty(n)
    kappa = np.empty(n)
    tau = np.empty(n)
    T = np.empty((n, 3))
    N = np.zeros((n, 3))
    B = np.zeros((n, 3))

    for i, ti in enumerate(t):
        v1 = curve.derivative(ti, 1)
        v2 = curve.derivative(ti, 2)
        v3 = curve.derivative(ti, 3)
        sp = float(np.linalg.norm(v1))
        if sp <= SPEED_EPS:
            raise DegenerateSpeedError(f"zero speed at t={ti!r}", node=i)
        speed[i] = sp
        T[i] = v1 / sp
        pts[i] = T[i]
        cross = np.cross(v1, v2)
        cn = float(np.linalg.norm(cross))
        kappa[i] = cn / sp**3
        if cn > 0.0:
            B[i] = cross / cn
            N[i] = np.cross(B[i], T[i])
            tau[i] = float(np.dot(cross, v3)) / cn**2
        else:
            tau[i] = 0.0

    masked = kappa <= max(reliability_floor, kappa_eps)
    if np.any(masked) and not allow_degenerate:
        raise DegenerateFrameError(
            "curvature at or below threshold on the grid", node=int(np.flatnonzero(masked)[0])
        )

    # sign continuation: keep N continuous across curvature zeros by flipping
    # N, B and the sign of kappa past each flip
    prev = None
    for i in range(n):
        if masked[i]:
            continue
        if prev is not None and float(np.dot(N[i], N[prev])) < 0.0:
            N[i] = -N[i]
            B[i] = -B[i]
            kappa[i] = -kappa[i]
        prev = i
    # sign the masked kappas from their reliable neighbours so the array
    # stays smooth through the zero: matching signs across a run keep it,
    # a flip splits the run at its |kappa| minimum
    if np.any(masked):
        good_idx = np.flatnonzero(~masked)
        runs: list[tuple[int, int]] = []
        start = None
        for i in range(n):
            if masked[i] and start is None:
                start = i
            elif not masked[i] and start is not None:
                runs.append((start, i - 1))
                start = None
        if start is not None:
            runs.append((start, n - 1))
        for a, b in runs:
            left = good_idx[good_idx < a]
            right = good_idx[good_idx > b]
            s_left = np.sign(kappa[left[-1]]) if left.size else None
            s_right = np.sign(kappa[right[0]]) if right.size else None
            s_left = s_left if s_left is not None else s_right
            s_right = s_right if s_right is not None else s_left
            if s_left == s_right:
                kappa[a : b + 1] = np.abs(kappa[a : b + 1]) * s_left
            else:
                split = a + int(np.argmin(np.abs(kappa[a : b + 1])))
                kappa[a : split + 1] = np.abs(kappa[a : split + 1]) * s_left
                kappa[split + 1 : b + 1] = np.abs(kappa[split + 1 : b + 1]) * s_right
        _fill_masked_frames(t, T, N, B, tau, masked)

    mu = np.hypot(kappa, tau)
    if np.any(mu <= 1e-12):
        bad = int(np.flatnonzero(mu <= 1e-12)[0])
        raise DegenerateError("curvature and torsion vanish together", node=bad)

    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(np.abs(kappa) > 0.0, tau / kappa, np.inf)
        kappa_T = np.where(np.abs(kappa) > 0.0, mu / kappa, np.inf)

    dk = numerics.table_derivative(t, kappa, 1)
    dtau = numerics.table_derivative(t, tau, 1)
    sigma = (dtau * kappa - dk * tau) / (speed * mu**3)
    tau_T = sigma * kappa_T

    s_values = numerics._cumulative_simpson_values(speed, h)
    s_T = numerics._cumulative_simpson_values(kappa * speed, h)
    int_tau = numerics._cumulative_simpson_values(sigma * mu * speed, h)
    int_kappa = numerics._cumulative_simpson_values(mu * speed, h)

    T_T = N.copy()
    N_T = (-kappa[:, None] * T + tau[:, None] * B) / mu[:, None]
    B_T = (tau[:, None] * T + kappa[:, None] * B) / mu[:, None]

    return IndicatrixTable(
        t_values=t,
        speed=speed,
        s_values=s_values,
        points=pts,
        T=T,
        N=N,
        B=B,
        kappa=kappa,
        tau=tau,
        f=f,
        sigma=sigma,
        mu=mu,
        s_T=s_T,
        int_tau=int_tau,
        int_kappa=int_kappa,
        T_T=T_T,
        N_T=N_T,
        B_T=B_T,
        kappa_T=kappa_T,
        tau_T=tau_T,
        degenerate=masked,
    )


def tangent_indicatrix(curve: Curve3, grid: Grid, kappa_eps: float = KAPPA_EPS) -> Curve3:
    """The spherical curve of unit tangents, parametrized by its own arc length.

    Requires kappa > kappa_eps on the whole grid.  Every sample lies on the
    unit sphere exactly (up to normalization round-off).  The arc-length
    abscissa is accumulated on an internally doubled grid so that the kept
    nodes share one smooth quadrature error envelope.
    """
    fine_grid = Grid(grid.start, grid.end, 2 * grid.count - 1)
    table = build_indicatrix_table(curve, fine_grid, kappa_eps=kappa_eps, allow_degenerate=False)
    return TabulatedCurve3(table.s_T[::2], table.points[::2], name=f"{curve.name}[indicatrix]")


def indicatrix_apparatus(
    curve: Curve3,
    t: float,
    table: IndicatrixTable | None = None,
    kappa_eps: float = KAPPA_EPS,
) -> IndicatrixApparatus:
    """Closed-form indicatrix frame and curvatures at donor parameter t.

    The natural parameter s_T is measured from the table's grid start when a
    table is passed, otherwise from the curve's domain start with a fixed
    internal quadrature resolution.
    """
    app = frenet_apparatus(curve, t, kappa_eps)
    speed = float(np.linalg.norm(curve.derivative(t, 1)))

    def f_of(tt: float) -> float:
        a = frenet_apparatus(curve, tt, kappa_eps)
        return a.tau / a.kappa

    f = app.tau / app.kappa
    df_dt = numerics.central_difference(f_of, t, order=1)
    sigma = app.kappa**2 / (app.kappa**2 + app.tau**2) ** 1.5 * (df_dt / speed)

    root = float(np.sqrt(1.0 + f * f))
    T_T = app.N
    N_T = (-app.T + f * app.B) / root
    B_T = (f * app.T + app.B) / root
    kappa_T = root
    tau_T = sigma * root

    if table is not None:
        slopes = numerics.monotone_slopes(table.t_values, table.s_T)
        s_T = float(numerics.hermite_eval(table.t_values, table.s_T, slopes, np.asarray(t)))
    else:
        lo = curve.domain[0]
        if t < lo:
            raise DomainError(f"t={t!r} precedes the curve domain start {lo!r}")
        if t == lo:
            s_T = 0.0
        else:
            quad = Grid(lo, t, 257)
            s_T = numerics.cumulative_simpson(
                lambda x: frenet_apparatus(curve, x, kappa_eps).kappa
                * float(np.linalg.norm(curve.derivative(x, 1))),
                quad,
            ).final
    return IndicatrixApparatus(s_T=s_T, T_T=T_T, N_T=N_T, B_T=B_T, kappa_T=kappa_T, tau_T=tau_T)
