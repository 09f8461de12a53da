"""Curve class detection and the donor/direction-curve correspondence checks.

A sampled curve is tested for the classical classes: general helix
(tau/kappa constant), slant helix (the sigma function constant), spherical
curve (best-fit sphere residual small), circle on a sphere, and straight
line.  "Constant" means the constancy score of the sampled function stays
below a tolerance.  The correspondence table then pairs a donor indicatrix
report with a direction-curve report and checks the biconditionals the
construction guarantees for each kind.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import KAPPA_EPS, Curve3, curvature_profile
from .errors import DegenerateFrameError, DegenerateSpeedError
from .numerics import Grid

__all__ = ["ClassReport", "CorrespondenceCheck", "classify", "correspondence_report", "LINE_KAPPA_MAX"]

#: a curve whose sampled curvature never exceeds this is treated as a straight line
LINE_KAPPA_MAX = 1e-6


@dataclass(frozen=True)
class ClassReport:
    """Boolean class flags plus the scores they were decided on.

    Curvature-based flags are None (not false) when the curve is a straight
    line, where f and sigma are undefined.
    """

    is_straight_line: bool
    is_general_helix: bool | None
    is_slant_helix: bool | None
    is_spherical: bool
    is_circle_on_sphere: bool | None
    is_spherical_helix: bool | None
    is_spherical_slant_helix: bool | None
    scores: dict[str, float]
    tolerance: float


@dataclass(frozen=True)
class CorrespondenceCheck:
    """One biconditional between a donor-side flag and a beta-side flag."""

    claim: str
    lhs_flag: str
    rhs_flag: str
    lhs: bool | None
    rhs: bool | None

    @property
    def applicable(self) -> bool:
        return self.lhs is not None and self.rhs is not None

    @property
    def passed(self) -> bool | None:
        if not self.applicable:
            return None
        return self.lhs == self.rhs


def _spread(samples: np.ndarray) -> float:
    """Spread statistic used for the constancy decisions.

    sd / (1 + |mean|): behaves like the relative constancy score for
    large-mean samples and like the absolute spread near zero, where a
    relative measure would amplify noise about a true zero (sigma of a
    helix) into an arbitrarily large score.
    """
    arr = np.asarray(samples, dtype=float)
    return float(np.std(arr) / (1.0 + abs(float(np.mean(arr)))))


def _sphere_fit(points: np.ndarray):
    """Least-squares sphere through the samples: center, radius, max residual."""
    A = np.column_stack([2.0 * points, np.ones(len(points))])
    b = np.einsum("ij,ij->i", points, points)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    center = sol[:3]
    r_sq = sol[3] + float(center @ center)
    if r_sq <= 0.0:
        return center, 0.0, np.inf
    radius = float(np.sqrt(r_sq))
    residual = float(np.max(np.abs(np.linalg.norm(points - center, axis=1) - radius)))
    return center, radius, residual


def classify(
    curve: Curve3,
    grid: Grid,
    tol: float = 1e-3,
    kappa_eps: float = KAPPA_EPS,
    line_kappa_max: float = LINE_KAPPA_MAX,
) -> ClassReport:
    """Classify a curve over a sampling grid.

    Raises
    ------
    DegenerateFrameError
        If curvature vanishes at some node of a curve that is not globally
        a straight line (isolated inflections are outside this classifier's
        scope).
    """
    t = grid.points()
    pts = np.array([curve.point(x) for x in t])
    kappas = np.empty(t.size)
    for i, ti in enumerate(t):
        v1 = curve.derivative(ti, 1)
        v2 = curve.derivative(ti, 2)
        sp = float(np.linalg.norm(v1))
        if sp <= 1e-10:
            raise DegenerateSpeedError(f"zero speed at t={ti!r}", node=i)
        kappas[i] = float(np.linalg.norm(np.cross(v1, v2))) / sp**3

    center, radius, sphere_residual = _sphere_fit(pts)
    sphere_rel = sphere_residual / radius if radius > 0 else np.inf
    is_spherical = bool(sphere_rel <= tol)

    if float(np.max(kappas)) <= line_kappa_max:
        return ClassReport(
            is_straight_line=True,
            is_general_helix=None,
            is_slant_helix=None,
            is_spherical=is_spherical,
            is_circle_on_sphere=None,
            is_spherical_helix=None,
            is_spherical_slant_helix=None,
            scores={"max_kappa": float(np.max(kappas)), "sphere_residual": sphere_rel},
            tolerance=tol,
        )

    profile = curvature_profile(curve, grid, kappa_eps=kappa_eps)
    helix_score = _spread(profile.f)
    slant_score = _spread(profile.sigma)
    kappa_score = _spread(profile.kappa)
    max_abs_tau = float(np.max(np.abs(profile.tau)))

    is_helix = bool(helix_score <= tol)
    is_slant = bool(slant_score <= tol)
    is_circle = bool(is_spherical and kappa_score <= tol and max_abs_tau <= tol)
    return ClassReport(
        is_straight_line=False,
        is_general_helix=is_helix,
        is_slant_helix=is_slant,
        is_spherical=is_spherical,
        is_circle_on_sphere=is_circle,
        is_spherical_helix=bool(is_spherical and is_helix),
        is_spherical_slant_helix=bool(is_spherical and is_slant),
        scores={
            "helix": helix_score,
            "slant_helix": slant_score,
            "kappa_constancy": kappa_score,
            "max_abs_tau": max_abs_tau,
            "sphere_residual": sphere_rel,
            "max_kappa": float(np.max(kappas)),
        },
        tolerance=tol,
    )


def _flag(report: ClassReport | None, name: str):
    if report is None:
        return None
    return getattr(report, name)


#: per kind: (claim id, lhs report role, lhs flag, rhs flag on beta)
_CLAIMS = {
    "evolute": [
        ("evolute:circle-donor<=>helix", "donor", "is_circle_on_sphere", "is_general_helix"),
        ("evolute:spherical-helix-donor<=>slant-helix", "donor", "is_spherical_helix", "is_slant_helix"),
        ("evolute:base-helix<=>helix", "base", "is_general_helix", "is_general_helix"),
        ("evolute:base-slant<=>slant", "base", "is_slant_helix", "is_slant_helix"),
    ],
    "bertrand": [
        ("bertrand:spherical-helix-donor<=>helix", "donor", "is_spherical_helix", "is_general_helix"),
        ("bertrand:spherical-slant-donor<=>slant", "donor", "is_spherical_slant_helix", "is_slant_helix"),
        ("bertrand:base-slant<=>helix", "base", "is_slant_helix", "is_general_helix"),
    ],
    "mannheim": [
        ("mannheim:spherical-helix-donor<=>slant", "donor", "is_spherical_helix", "is_slant_helix"),
        ("mannheim:circle-donor<=>line", "donor", "is_circle_on_sphere", "is_straight_line"),
        ("mannheim:base-line<=>helix", "base", "is_straight_line", "is_general_helix"),
        ("mannheim:base-slant<=>slant", "base", "is_slant_helix", "is_slant_helix"),
    ],
}


def correspondence_report(
    kind_name: str,
    donor_report: ClassReport,
    beta_report: ClassReport,
    base_report: ClassReport | None = None,
) -> list[CorrespondenceCheck]:
    """Evaluate the construction's biconditionals for one direction kind.

    donor_report classifies the tangent indicatrix, beta_report the
    direction curve, and base_report (optional) the original curve; claims
    needing an absent or degenerate flag come back non-applicable rather
    than failed.
    """
    name = getattr(kind_name, "name", kind_name)
    checks = []
    for claim, role, lhs_flag, rhs_flag in _CLAIMS[name]:
        src = donor_report if role == "donor" else base_report
        lhs = _flag(src, lhs_flag)
        rhs = _flag(beta_report, rhs_flag)
        checks.append(
            CorrespondenceCheck(claim=claim, lhs_flag=lhs_flag, rhs_flag=rhs_flag, lhs=lhs, rhs=rhs)
        )
    return checks
