"""Direction curves of the tangent indicatrix.

Given a donor curve's indicatrix with frame (T_T, N_T, B_T) and curvatures
(kappa_T, tau_T), a unit field X = x T_T + y N_T + z B_T integrates to a
unit-speed curve beta whose principal normal can be forced onto T_T, N_T or
B_T.  The three admissible coefficient triples have closed forms:

    evolute   x = 0                    y = sin(A)   z = cos(A)   A = int tau_T ds_T + phase
    bertrand  x = cos(theta)           y = 0        z = sin(theta)
    mannheim  x = sin(A)               y = cos(A)   z = 0        A = int kappa_T ds_T + phase

together with closed-form curvature pairs for beta and their inverses.
Integration runs on the donor parameter grid with the Jacobian
(kappa * speed), which equals integration in s_T wherever the donor is
regular and continues smoothly through isolated curvature zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .curves import (
    KAPPA_EPS,
    Curve3,
    FrenetSamples,
    TabulatedCurve3,
    frenet_samples,
)
from .errors import DegenerateError, DomainError
from .indicatrix import IndicatrixTable, build_indicatrix_table
from .numerics import Grid

__all__ = [
    "DirectionKind",
    "DirectionCoefficients",
    "DirectionCurve",
    "ResidualReport",
    "coefficients",
    "coefficient_arrays",
    "direction_field",
    "integrate_direction_curve",
    "predicted_curvatures",
    "predicted_curvature_arrays",
    "recover_donor_curvatures",
    "residual_check",
]

_KINDS = ("evolute", "bertrand", "mannheim")


@dataclass(frozen=True)
class DirectionKind:
    """Which direction curve to build, plus its free constants.

    theta is the Bertrand tangent angle; phase shifts the coefficient
    integral for the evolute and mannheim kinds (it is the free constant
    that appears inside their sines and cosines) and is ignored by
    bertrand, whose coefficients carry no integral.
    """

    name: str
    theta: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.name not in _KINDS:
            raise DomainError(f"unknown direction kind {self.name!r}")
        if not (np.isfinite(self.theta) and np.isfinite(self.phase)):
            raise DomainError("direction kind constants must be finite")

    @classmethod
    def evolute(cls, phase: float = 0.0) -> "DirectionKind":
        return cls("evolute", phase=phase)

    @classmethod
    def bertrand(cls, theta: float) -> "DirectionKind":
        return cls("bertrand", theta=theta)

    @classmethod
    def mannheim(cls, phase: float = 0.0) -> "DirectionKind":
        return cls("mannheim", phase=phase)


@dataclass(frozen=True)
class DirectionCoefficients:
    """Frame coefficients (x, y, z) of the direction field at one s_T."""

    s_T: float
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class ResidualReport:
    """Numerical residuals of a direction curve against its defining system."""

    kind: DirectionKind
    equation_residuals: tuple[float, float, float]
    normal_alignment: float          # min |<N_beta, target>| over checked nodes
    kappa_match: float               # max | |measured| - |predicted| | where prediction is live
    tau_match: float
    nodes_checked: int

    def passes(
        self,
        residual_tol: float = 1e-3,
        alignment_min: float = 0.9999,
        curvature_tol: float = 1e-3,
    ) -> bool:
        return (
            max(self.equation_residuals) <= residual_tol
            and self.normal_alignment >= alignment_min
            and self.kappa_match <= curvature_tol
            and self.tau_match <= curvature_tol
        )


@dataclass(frozen=True)
class DirectionCurve:
    """An integrated direction curve with measured and predicted curvatures.

    s_beta equals the donor indicatrix natural parameter (the integration
    constant of the arc-length identification is fixed to 0); beta is
    unit speed against it.  Measured quantities come from finite
    differences on the integrated samples; predicted ones from the
    closed forms, keeping their signs.
    """

    kind: DirectionKind
    t_values: np.ndarray
    s_beta: np.ndarray
    points: np.ndarray
    coeff_x: np.ndarray
    coeff_y: np.ndarray
    coeff_z: np.ndarray
    measured: FrenetSamples
    predicted_kappa: np.ndarray
    predicted_tau: np.ndarray
    donor: IndicatrixTable
    beta0: np.ndarray

    @property
    def is_degenerate_line(self) -> bool:
        """True when the measured curvature never rises above the frame floor."""
        return bool(np.all(self.measured.kappa <= 1e-6))

    def as_curve(self, name: str | None = None) -> TabulatedCurve3:
        return TabulatedCurve3(
            self.t_values, self.points, name=name or f"{self.kind.name}-direction"
        )


def coefficient_arrays(kind: DirectionKind, table: IndicatrixTable):
    """Coefficient triples at every table node, as three arrays."""
    n = table.t_values.size
    if kind.name == "evolute":
        ang = table.int_tau + kind.phase
        return np.zeros(n), np.sin(ang), np.cos(ang)
    if kind.name == "bertrand":
        return (
            np.full(n, np.cos(kind.theta)),
            np.zeros(n),
            np.full(n, np.sin(kind.theta)),
        )
    ang = table.int_kappa + kind.phase
    return np.sin(ang), np.cos(ang), np.zeros(n)


def coefficients(kind: DirectionKind, table: IndicatrixTable, s_T: float) -> DirectionCoefficients:
    """Closed-form coefficient triple at one value of the natural parameter."""
    if kind.name == "evolute":
        ang = table.int_tau_at(s_T) + kind.phase
        x, y, z = 0.0, np.sin(ang), np.cos(ang)
    elif kind.name == "bertrand":
        table._interp_at_s_T(table.int_kappa, s_T)  # range check only
        x, y, z = np.cos(kind.theta), 0.0, np.sin(kind.theta)
    else:
        ang = table.int_kappa_at(s_T) + kind.phase
        x, y, z = np.sin(ang), np.cos(ang), 0.0
    return DirectionCoefficients(s_T=float(s_T), x=float(x), y=float(y), z=float(z))


def direction_field(kind: DirectionKind, table: IndicatrixTable, s_T: float) -> np.ndarray:
    """The unit vector X = x T_T + y N_T + z B_T at one s_T."""
    c = coefficients(kind, table, s_T)
    T_T, N_T, B_T = table.frame_at(s_T)
    return c.x * T_T + c.y * N_T + c.z * B_T


def predicted_curvature_arrays(kind: DirectionKind, table: IndicatrixTable):
    """Closed-form (kappa_beta, tau_beta) at every node, signs kept."""
    if kind.name == "evolute":
        ang = table.int_tau + kind.phase
        return -table.kappa_T * np.sin(ang), table.kappa_T * np.cos(ang)
    if kind.name == "bertrand":
        ct, st = np.cos(kind.theta), np.sin(kind.theta)
        return (
            table.kappa_T * ct - table.tau_T * st,
            table.kappa_T * st + table.tau_T * ct,
        )
    ang = table.int_kappa + kind.phase
    return table.tau_T * np.cos(ang), table.tau_T * np.sin(ang)


def predicted_curvatures(kind: DirectionKind, table: IndicatrixTable, s_T: float):
    """Closed-form (kappa_beta, tau_beta) at one s_T."""
    kappa_T, tau_T = table.curvatures_at(s_T)
    if kind.name == "evolute":
        ang = table.int_tau_at(s_T) + kind.phase
        return -kappa_T * np.sin(ang), kappa_T * np.cos(ang)
    if kind.name == "bertrand":
        ct, st = np.cos(kind.theta), np.sin(kind.theta)
        return kappa_T * ct - tau_T * st, kappa_T * st + tau_T * ct
    ang = table.int_kappa_at(s_T) + kind.phase
    return tau_T * np.cos(ang), tau_T * np.sin(ang)


def integrate_direction_curve(
    kind: DirectionKind,
    curve: Curve3,
    grid: Grid,
    beta0=(0.0, 0.0, 0.0),
    kappa_eps: float = KAPPA_EPS,
    table: IndicatrixTable | None = None,
) -> DirectionCurve:
    """Integrate the direction field into a curve and measure its apparatus.

    The integral runs over the donor grid with componentwise Simpson and
    the signed Jacobian d s_T / dt, so the result is the unit-speed
    integral curve in s_T.  Quadrature happens on an internally doubled
    grid, keeping only the requested nodes: the cumulative values at the
    kept nodes then share one smooth error envelope, which matters when
    the result is differentiated three times.  Nodes where the integrated
    curve itself has no frame (a mannheim image of a spherical circle
    degenerates to a straight line) are masked in `measured`, not raised.

    A caller-supplied `table` must match the grid and skips the internal
    refinement.
    """
    beta0 = np.asarray(beta0, dtype=float)
    if table is None:
        fine_grid = Grid(grid.start, grid.end, 2 * grid.count - 1)
        fine = build_indicatrix_table(curve, fine_grid, kappa_eps=kappa_eps)
        xf, yf, zf = coefficient_arrays(kind, fine)
        Xf = xf[:, None] * fine.T_T + yf[:, None] * fine.N_T + zf[:, None] * fine.B_T
        jac = (fine.kappa * fine.speed)[:, None]
        beta = (beta0 + numerics._cumulative_simpson_values(Xf * jac, fine.step))[::2]
        table = _subsample(fine)
        x, y, z = xf[::2], yf[::2], zf[::2]
    else:
        x, y, z = coefficient_arrays(kind, table)
        X = x[:, None] * table.T_T + y[:, None] * table.N_T + z[:, None] * table.B_T
        jac = (table.kappa * table.speed)[:, None]
        beta = beta0 + numerics._cumulative_simpson_values(X * jac, table.step)
    measured = frenet_samples(table.t_values, beta)
    pk, pt = predicted_curvature_arrays(kind, table)
    return DirectionCurve(
        kind=kind,
        t_values=table.t_values,
        s_beta=table.s_T.copy(),
        points=beta,
        coeff_x=x,
        coeff_y=y,
        coeff_z=z,
        measured=measured,
        predicted_kappa=pk,
        predicted_tau=pt,
        donor=table,
        beta0=beta0,
    )


def _subsample(table: IndicatrixTable, step: int = 2) -> IndicatrixTable:
    """Every step-th node of a table, keeping the accumulated integrals."""
    import dataclasses

    return IndicatrixTable(
        **{f.name: getattr(table, f.name)[::step] for f in dataclasses.fields(IndicatrixTable)}
    )


def recover_donor_curvatures(
    kind: DirectionKind,
    kappa_beta: np.ndarray,
    tau_beta: np.ndarray,
    s_values: np.ndarray,
):
    """Invert the curvature relations: donor (kappa_T, tau_T) from beta's pair.

    The evolute and mannheim inversions differentiate tau_beta / kappa_beta
    against s with central differences and need |kappa_beta| > 1e-6 at every
    node; all kinds need kappa_beta^2 + tau_beta^2 > 1e-12.

    Raises
    ------
    DegenerateError
        On denominator underflow, carrying the first offending node index.
    """
    kb = np.asarray(kappa_beta, dtype=float)
    tb = np.asarray(tau_beta, dtype=float)
    s = np.asarray(s_values, dtype=float)
    if kind.name == "bertrand":
        ct, st = np.cos(kind.theta), np.sin(kind.theta)
        return kb * ct + tb * st, -kb * st + tb * ct

    sq = kb * kb + tb * tb
    if np.any(sq <= 1e-12):
        raise DegenerateError(
            "kappa_beta and tau_beta vanish together", node=int(np.flatnonzero(sq <= 1e-12)[0])
        )
    if np.any(np.abs(kb) <= 1e-6):
        raise DegenerateError(
            "kappa_beta too small to differentiate tau/kappa",
            node=int(np.flatnonzero(np.abs(kb) <= 1e-6)[0]),
        )
    ratio = tb / kb
    dratio = numerics.table_derivative(s, ratio, 1, window=5)
    derived = kb * kb / sq * dratio
    if kind.name == "evolute":
        return np.sqrt(sq), derived
    return derived, np.sqrt(sq)


def residual_check(
    kind: DirectionKind,
    dcurve: DirectionCurve,
    margin: int = 3,
    prediction_floor: float = 1e-3,
) -> ResidualReport:
    """Check a direction curve against its defining first-order system.

    Evaluates the kind's three component equations with coefficient
    derivatives taken by central differences on the sampled coefficient
    arrays, verifies that the measured principal normal of beta lies along
    the kind's donor frame vector, and compares measured against predicted
    curvature magnitudes where the prediction is above `prediction_floor`.

    Nodes within `margin` of the grid ends, near donor degeneracies, or
    where beta's own frame is degenerate are excluded.

    Raises
    ------
    DegenerateError
        If no node survives the exclusions.
    """
    table = dcurve.donor
    n = table.t_values.size
    ok = ~table.degenerate & ~dcurve.measured.degenerate
    # widen the donor exclusion: differences near a cusp see the masked data
    bad = np.flatnonzero(table.degenerate)
    for b in bad:
        ok[max(0, b - 4) : min(n, b + 5)] = False
    ok[:margin] = False
    ok[n - margin :] = False
    if not np.any(ok):
        raise DegenerateError("no usable nodes for residual check")

    x, y, z = dcurve.coeff_x, dcurve.coeff_y, dcurve.coeff_z
    t = table.t_values
    jac = table.kappa * table.speed
    # d/ds_T = (d/dt) / (ds_T/dt)
    dx = numerics.table_derivative(t, x, 1, window=3) / jac
    dy = numerics.table_derivative(t, y, 1, window=3) / jac
    dz = numerics.table_derivative(t, z, 1, window=3) / jac

    kT, tT = table.kappa_T, table.tau_T
    pk = dcurve.predicted_kappa
    r1 = dx - y * kT
    r2 = dy + x * kT - z * tT
    r3 = dz + y * tT
    if kind.name == "evolute":
        r1 = r1 - pk
        target = table.T_T
    elif kind.name == "bertrand":
        r2 = r2 - pk
        target = table.N_T
    else:
        r3 = r3 - pk
        target = table.B_T

    res = (
        float(np.max(np.abs(r1[ok]))),
        float(np.max(np.abs(r2[ok]))),
        float(np.max(np.abs(r3[ok]))),
    )
    # beta's principal normal is undefined where its curvature vanishes, so
    # the alignment and magnitude checks are scoped to live predictions
    live_k = ok & (np.abs(pk) > prediction_floor)
    live_t = ok & (np.abs(dcurve.predicted_tau) > prediction_floor)
    align = (
        np.abs(np.einsum("ij,ij->i", dcurve.measured.N[live_k], target[live_k]))
        if np.any(live_k)
        else np.array([1.0])
    )
    kappa_match = (
        float(np.max(np.abs(dcurve.measured.kappa[live_k] - np.abs(pk[live_k]))))
        if np.any(live_k)
        else 0.0
    )
    tau_match = (
        float(
            np.max(
                np.abs(np.abs(dcurve.measured.tau[live_t]) - np.abs(dcurve.predicted_tau[live_t]))
            )
        )
        if np.any(live_t)
        else 0.0
    )
    return ResidualReport(
        kind=kind,
        equation_residuals=res,
        normal_alignment=float(np.min(align)),
        kappa_match=kappa_match,
        tau_match=tau_match,
        nodes_checked=int(np.count_nonzero(ok)),
    )
