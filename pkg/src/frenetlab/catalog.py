"""Built-in analytic curves and their closed-form reference solutions.

Two fully worked entries (a circular helix and a spherical-helix-indicatrix
curve) carry closed forms for the tangent indicatrix and all three
direction curves, with their free constants exposed; four standard curves
round out the test corpus.  The comparison helpers implement the reference
protocol: integrate numerically, anchor the integration constant at the
left endpoint, evaluate the closed form on the pipeline's own abscissa,
and report the per-component sup deviation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curves import Curve3
from .direction import DirectionKind, integrate_direction_curve
from .errors import DomainError
from .indicatrix import build_indicatrix_table
from .numerics import Grid

__all__ = [
    "CatalogEntry",
    "ReferenceSet",
    "ComparisonResult",
    "example_7_1",
    "example_7_2",
    "standard_curves",
    "all_entries",
    "get",
    "catalog_ids",
    "compare_direction_curves",
    "compare_indicatrix",
]

SQ2 = np.sqrt(2.0)


@dataclass(frozen=True)
class ReferenceSet:
    """Closed-form solutions attached to a catalog entry.

    `parameter` names the abscissa the closed forms use: the indicatrix
    natural parameter ("s_T") or the donor's own parameter ("t").
    `direction_factories` maps kind name to a factory taking that kind's
    free constant (evolute/mannheim integral phase, bertrand angle) and
    returning the closed-form curve with integration constants zero.
    """

    parameter: str
    indicatrix: Callable[[float], np.ndarray]
    direction_factories: dict[str, Callable[[float], Curve3]]
    figure_constants: dict[str, float]
    comparison_grid: Grid
    tolerance: float


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    curve: Curve3
    notes: str
    default_grid: Grid
    theorem_grid: Grid
    references: ReferenceSet | None = None


@dataclass(frozen=True)
class ComparisonResult:
    """Numerical-vs-closed-form deviation for one direction curve."""

    kind_name: str
    constant: float
    sup_error: float
    component_errors: tuple[float, float, float]
    samples: int


def _kind_for(kind_name: str, constant: float) -> DirectionKind:
    if kind_name == "bertrand":
        return DirectionKind.bertrand(constant)
    if kind_name == "evolute":
        return DirectionKind.evolute(phase=constant)
    return DirectionKind.mannheim(phase=constant)


# ---------------------------------------------------------------------------
# worked example 1: circular helix
# ---------------------------------------------------------------------------


def example_7_1() -> CatalogEntry:
    """Circular helix (cos(s/sqrt2), sin(s/sqrt2), s/sqrt2), unit speed.

    Curvature and torsion are both 1/2; the tangent indicatrix is a circle
    of radius 1/sqrt2 on the unit sphere, and all three direction curves
    have elementary closed forms.
    """

    def fn(s):
        w = s / SQ2
        return np.array([np.cos(w), np.sin(w), s / SQ2])

    def d1(s):
        w = s / SQ2
        return np.array([-np.sin(w) / SQ2, np.cos(w) / SQ2, 1.0 / SQ2])

    def d2(s):
        w = s / SQ2
        return np.array([-np.cos(w) / 2.0, -np.sin(w) / 2.0, 0.0])

    def d3(s):
        w = s / SQ2
        return np.array([np.sin(w) / (2.0 * SQ2), -np.cos(w) / (2.0 * SQ2), 0.0])

    curve = Curve3(fn, (-1.0, 4.0 * np.pi + 1.0), d1=d1, d2=d2, d3=d3, name="ex7.1")

    def indicatrix(s_T):
        return np.array([-np.sin(SQ2 * s_T) / SQ2, np.cos(SQ2 * s_T) / SQ2, 1.0 / SQ2])

    def make_evolute(theta1: float) -> Curve3:
        def ref(s_T):
            return np.array(
                [
                    -np.sin(theta1) * np.cos(SQ2 * s_T) / SQ2,
                    -np.sin(theta1) * np.sin(SQ2 * s_T) / SQ2,
                    s_T * np.cos(theta1),
                ]
            )

        return Curve3(ref, (0.0, 2.0 * np.pi), name="ex7.1-evolute-ref")

    def make_bertrand(theta: float) -> Curve3:
        def ref(s_T):
            return np.array(
                [
                    -np.cos(theta) * np.sin(SQ2 * s_T) / SQ2,
                    np.cos(theta) * np.cos(SQ2 * s_T) / SQ2,
                    s_T * np.sin(theta),
                ]
            )

        return Curve3(ref, (0.0, 2.0 * np.pi), name="ex7.1-bertrand-ref")

    def make_mannheim(theta2: float) -> Curve3:
        def ref(s_T):
            return np.array([-s_T * np.sin(theta2), -s_T * np.cos(theta2), 0.0])

        return Curve3(ref, (0.0, 2.0 * np.pi), name="ex7.1-mannheim-ref")

    references = ReferenceSet(
        parameter="s_T",
        indicatrix=indicatrix,
        direction_factories={
            "evolute": make_evolute,
            "bertrand": make_bertrand,
            "mannheim": make_mannheim,
        },
        figure_constants={"evolute": np.pi / 4, "bertrand": np.pi / 3, "mannheim": np.pi / 4},
        # donor arc [0, 4pi] puts 401 uniform samples on s_T in [0, 2pi]
        comparison_grid=Grid(0.0, 4.0 * np.pi, 401),
        tolerance=1e-5,
    )
    return CatalogEntry(
        id="ex7.1",
        curve=curve,
        notes="circular helix, kappa = tau = 1/2; indicatrix is a spherical circle",
        default_grid=Grid(0.0, 4.0 * np.pi, 401),
        theorem_grid=Grid(0.0, 4.0 * np.pi, 401),
        references=references,
    )


# ---------------------------------------------------------------------------
# worked example 2: slant helix whose indicatrix is a spherical helix
# ---------------------------------------------------------------------------


def _a72(t):
    u = SQ2 * t
    return np.array(
        [
            3.0 / SQ2 * np.sin(u) * np.cos(t) - 2.0 * np.sin(t) * np.cos(u),
            3.0 / SQ2 * np.cos(u) * np.cos(t) + 2.0 * np.sin(t) * np.sin(u),
            -np.cos(t) / SQ2,
        ]
    )


def _a72_d1(t):
    u = SQ2 * t
    return np.array(
        [
            np.cos(u) * np.cos(t) + np.sin(u) * np.sin(t) / SQ2,
            -np.sin(u) * np.cos(t) + np.cos(u) * np.sin(t) / SQ2,
            np.sin(t) / SQ2,
        ]
    )


def _a72_d2(t):
    u = SQ2 * t
    return np.array(
        [
            -np.sin(u) * np.cos(t) / SQ2,
            -np.cos(u) * np.cos(t) / SQ2,
            np.cos(t) / SQ2,
        ]
    )


def _a72_d3(t):
    u = SQ2 * t
    return np.array(
        [
            -np.cos(u) * np.cos(t) + np.sin(u) * np.sin(t) / SQ2,
            np.sin(u) * np.cos(t) + np.cos(u) * np.sin(t) / SQ2,
            -np.sin(t) / SQ2,
        ]
    )


def _ind72(t):
    u = SQ2 * t
    return np.array(
        [
            np.cos(u) * np.cos(t) + np.sin(u) * np.sin(t) / SQ2,
            -np.sin(u) * np.cos(t) + np.cos(u) * np.sin(t) / SQ2,
            np.sin(t) / SQ2,
        ]
    )


def example_7_2() -> CatalogEntry:
    """Unit-speed curve whose tangent indicatrix is a spherical helix.

    Curvature is |cos t| (vanishing at t = pi/2 + k pi), torsion is -sin t,
    and the slant-helix function is -1 on every regular branch.  The closed
    forms for the direction curves are stated in the raw parameter t.
    """
    curve = Curve3(
        _a72,
        (-2.0 * np.pi - 1.0, 2.0 * np.pi + 1.0),
        d1=_a72_d1,
        d2=_a72_d2,
        d3=_a72_d3,
        name="ex7.2",
    )

    def make_evolute(theta1: float) -> Curve3:
        def ref(t):
            c, s = np.cos, np.sin
            x = (
                -(-1 + SQ2) * c(theta1 - SQ2 * t)
                + (1 + SQ2) * c(theta1 + SQ2 * t)
                - (3 + 2 * SQ2) * c(theta1 + (-2 + SQ2) * t)
                + (-3 + 2 * SQ2) * c(theta1 - (2 + SQ2) * t)
            ) / 8.0
            y = (
                -(-1 + SQ2) * s(theta1 - SQ2 * t)
                - (1 + SQ2) * s(theta1 + SQ2 * t)
                + (3 + 2 * SQ2) * s(theta1 + (-2 + SQ2) * t)
                + (-3 + 2 * SQ2) * s(theta1 - (2 + SQ2) * t)
            ) / 8.0
            z = (-2.0 * t * c(theta1) + s(theta1 - 2.0 * t)) / (4.0 * SQ2)
            return np.array([x, y, z])

        return Curve3(ref, (0.0, 2.0 * np.pi), name="ex7.2-evolute-ref")

    def make_bertrand(theta: float) -> Curve3:
        def ref(t):
            u = SQ2 * t
            cs = np.cos(theta) + np.sin(theta)
            cm = np.cos(theta) - np.sin(theta)
            return np.array(
                [
                    0.5 * (2.0 * np.cos(t) * np.cos(u) + SQ2 * np.sin(t) * np.sin(u)) * cs,
                    0.5 * (SQ2 * np.cos(u) * np.sin(t) - 2.0 * np.cos(t) * np.sin(u)) * cs,
                    np.sin(t) * cm / SQ2,
                ]
            )

        return Curve3(ref, (0.0, 2.0 * np.pi), name="ex7.2-bertrand-ref")

    def make_mannheim(theta2: float) -> Curve3:
        def ref(t):
            c, s = np.cos, np.sin
            x = (
                (1 + SQ2) * s(theta2 - SQ2 * t)
                - (-1 + SQ2) * s(theta2 + SQ2 * t)
                - (3 + 2 * SQ2) * s(theta2 + (2 - SQ2) * t)
                + (-3 + 2 * SQ2) * s(theta2 + (2 + SQ2) * t)
            ) / 8.0
            y = (
                -(1 + SQ2) * c(theta2 - SQ2 * t)
                - (-1 + SQ2) * c(theta2 + SQ2 * t)
                + (3 + 2 * SQ2) * c(theta2 + (2 - SQ2) * t)
                + (-3 + 2 * SQ2) * c(theta2 + (2 + SQ2) * t)
            ) / 8.0
            z = -(c(theta2 + 2.0 * t) - 2.0 * t * s(theta2)) / (4.0 * SQ2)
            return np.array([x, y, z])

        return Curve3(ref, (0.0, 2.0 * np.pi), name="ex7.2-mannheim-ref")

    references = ReferenceSet(
        parameter="t",
        indicatrix=_ind72,
        direction_factories={
            "evolute": make_evolute,
            "bertrand": make_bertrand,
            "mannheim": make_mannheim,
        },
        figure_constants={"evolute": np.pi / 3, "bertrand": np.pi / 3, "mannheim": 0.0},
        comparison_grid=Grid(0.0, 2.0 * np.pi, 401),
        tolerance=1e-4,
    )
    return CatalogEntry(
        id="ex7.2",
        curve=curve,
        notes="unit-speed slant helix; curvature |cos t| vanishes at t = pi/2 + k pi, "
        "so frame operations use the regular branch",
        default_grid=Grid(0.0, 2.0 * np.pi, 401),
        theorem_grid=Grid(-1.0, 1.0, 401),
        references=references,
    )


# ---------------------------------------------------------------------------
# standard test corpus
# ---------------------------------------------------------------------------


def standard_curves() -> list[CatalogEntry]:
    """Planar circle, straight line, twisted cubic, and a slant helix."""
    circle = Curve3(
        lambda t: np.array([np.cos(t), np.sin(t), 0.0]),
        (-0.5, 2.0 * np.pi + 0.5),
        d1=lambda t: np.array([-np.sin(t), np.cos(t), 0.0]),
        d2=lambda t: np.array([-np.cos(t), -np.sin(t), 0.0]),
        d3=lambda t: np.array([np.sin(t), -np.cos(t), 0.0]),
        name="circle",
    )
    line = Curve3(
        lambda t: np.array([t, 0.0, 0.0]),
        (-10.0, 10.0),
        d1=lambda t: np.array([1.0, 0.0, 0.0]),
        d2=lambda t: np.zeros(3),
        d3=lambda t: np.zeros(3),
        name="line",
    )
    cubic = Curve3(
        lambda t: np.array([t, t * t, t**3]),
        (-2.0, 2.0),
        d1=lambda t: np.array([1.0, 2.0 * t, 3.0 * t * t]),
        d2=lambda t: np.array([0.0, 2.0, 6.0 * t]),
        d3=lambda t: np.array([0.0, 0.0, 6.0]),
        name="twisted-cubic",
    )
    # the regular branch of the second worked example: a genuine slant helix
    # (sigma = -1) that is not a general helix
    slant = Curve3(
        _a72,
        (-1.35, 1.35),
        d1=_a72_d1,
        d2=_a72_d2,
        d3=_a72_d3,
        name="slant-helix",
    )
    return [
        CatalogEntry(
            id="circle",
            curve=circle,
            notes="planar unit circle: kappa = 1, tau = 0",
            default_grid=Grid(0.0, 2.0 * np.pi, 201),
            theorem_grid=Grid(0.0, 2.0 * np.pi, 201),
        ),
        CatalogEntry(
            id="line",
            curve=line,
            notes="straight line: frame operations are degenerate by construction",
            default_grid=Grid(0.0, 1.0, 101),
            theorem_grid=Grid(0.0, 1.0, 101),
        ),
        CatalogEntry(
            id="twisted-cubic",
            curve=cubic,
            notes="generic non-helix: the ratio tau/kappa varies along the curve",
            default_grid=Grid(-1.0, 1.0, 201),
            theorem_grid=Grid(-0.75, 0.75, 401),
        ),
        CatalogEntry(
            id="slant-helix",
            curve=slant,
            notes="slant helix branch (sigma = -1, tau/kappa = -tan t non-constant); "
            "same parametrization as ex7.2 restricted to a regular branch",
            default_grid=Grid(-1.25, 1.25, 401),
            theorem_grid=Grid(-1.0, 1.0, 401),
        ),
    ]


def all_entries() -> list[CatalogEntry]:
    return [example_7_1(), example_7_2()] + standard_curves()


def catalog_ids() -> list[str]:
    return [e.id for e in all_entries()]


def get(curve_id: str) -> CatalogEntry:
    for entry in all_entries():
        if entry.id == curve_id:
            return entry
    raise DomainError(f"unknown catalog curve {curve_id!r}; known ids: {', '.join(catalog_ids())}")


# ---------------------------------------------------------------------------
# reference comparison protocol
# ---------------------------------------------------------------------------


def compare_direction_curves(
    entry: CatalogEntry,
    constants: dict[str, float] | None = None,
) -> dict[str, ComparisonResult]:
    """Integrate each direction curve numerically and compare with its closed form.

    The closed form fixes the free constant (figure defaults unless
    overridden); the numerical curve anchors its integration constant to
    the closed form's left-endpoint value and is compared on its own
    abscissa (s_T or t per the reference parametrization).
    """
    if entry.references is None:
        raise DomainError(f"catalog entry {entry.id!r} carries no reference solutions")
    refs = entry.references
    constants = {**refs.figure_constants, **(constants or {})}
    grid = refs.comparison_grid
    out: dict[str, ComparisonResult] = {}
    for kind_name, factory in refs.direction_factories.items():
        const = constants[kind_name]
        ref_curve = factory(const)
        kind = _kind_for(kind_name, const)
        a0 = 0.0 if refs.parameter == "s_T" else grid.start
        dc = integrate_direction_curve(kind, entry.curve, grid, beta0=ref_curve.point(a0))
        abscissa = dc.s_beta if refs.parameter == "s_T" else dc.t_values
        ref_pts = np.array([ref_curve.point(a) for a in abscissa])
        diff = np.abs(dc.points - ref_pts)
        out[kind_name] = ComparisonResult(
            kind_name=kind_name,
            constant=const,
            sup_error=float(np.max(np.linalg.norm(dc.points - ref_pts, axis=1))),
            component_errors=tuple(float(v) for v in diff.max(axis=0)),
            samples=abscissa.size,
        )
    return out


def compare_indicatrix(entry: CatalogEntry) -> ComparisonResult:
    """Compare the sampled tangent indicatrix with its printed closed form."""
    if entry.references is None:
        raise DomainError(f"catalog entry {entry.id!r} carries no reference solutions")
    refs = entry.references
    grid = refs.comparison_grid
    table = build_indicatrix_table(entry.curve, grid)
    abscissa = table.s_T if refs.parameter == "s_T" else table.t_values
    ref_pts = np.array([refs.indicatrix(a) for a in abscissa])
    diff = np.abs(table.points - ref_pts)
    return ComparisonResult(
        kind_name="indicatrix",
        constant=0.0,
        sup_error=float(np.max(np.linalg.norm(table.points - ref_pts, axis=1))),
        component_errors=tuple(float(v) for v in diff.max(axis=0)),
        samples=abscissa.size,
    )
