"""Command-line front end.

Subcommands evaluate the Frenet apparatus, construct indicatrices and
direction curves, classify curves, verify the curvature relations and
classification correspondences, and reproduce the worked examples as SVG
projections plus a JSON summary.  Exit codes: 0 success, 1 input error,
2 verification failure or degenerate geometry.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, catalog
from .classify import classify, correspondence_report
from .curves import frenet_apparatus
from .direction import (
    DirectionKind,
    integrate_direction_curve,
    recover_donor_curvatures,
    residual_check,
)
from .errors import (
    DegenerateError,
    DomainError,
    ExpressionError,
    FrenetLabError,
)
from .expressions import parse_curve_expression
from .indicatrix import build_indicatrix_table, indicatrix_apparatus, tangent_indicatrix
from .numerics import Grid
from .svgplot import render_projections

__all__ = ["RunConfig", "run", "main", "parse_grid", "resolve_curve", "verify_entry"]

_DEFAULT_TOL = 1e-3
_RESIDUAL_TOL = 1e-3
_ALIGNMENT_MIN = 0.9999
_FMT = "%.17g"

#: free constants used by `verify` when an entry has no figure defaults
_DEFAULT_CONSTANTS = {"evolute": np.pi / 4, "bertrand": np.pi / 3, "mannheim": np.pi / 4}


@dataclass
class RunConfig:
    command: str
    curve_id: str | None = None
    grid: Grid | None = None
    kind: DirectionKind | None = None
    tolerance: float = _DEFAULT_TOL
    output_format: str = "csv"
    output_path: str | None = None
    output_dir: str | None = None
    extras: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {
            "command": self.command,
            "curve": self.curve_id,
            "tolerance": self.tolerance,
            "format": self.output_format,
        }
        if self.grid is not None:
            d["grid"] = {"start": self.grid.start, "end": self.grid.end, "count": self.grid.count}
        if self.kind is not None:
            d["kind"] = {"name": self.kind.name, "theta": self.kind.theta, "phase": self.kind.phase}
        if self.output_path:
            d["output"] = self.output_path
        if self.output_dir:
            d["output_dir"] = self.output_dir
        return d


def parse_grid(text: str) -> Grid:
    """Parse 'start:end:count', normalizing the count up to odd."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must look like start:end:count, got {text!r}")
    try:
        start, end = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise DomainError(f"bad grid {text!r}: {exc}") from None
    return Grid(start, end, count).with_odd_count()


def resolve_curve(curve_id: str):
    """A catalog id, or an inline three-component expression.

    Returns (curve, entry) where entry is None for inline expressions.
    """
    if "," in curve_id:
        return parse_curve_expression(curve_id), None
    entry = catalog.get(curve_id)
    return entry.curve, entry


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_FMT % v for v in row))
    return "\n".join(lines) + "\n"


def _json_doc(config: RunConfig, results, checks) -> str:
    doc = {
        "config": config.as_dict(),
        "results": results,
        "checks": checks,
        "version": __version__,
    }
    return json.dumps(doc, indent=2) + "\n"


def _error_doc(config: RunConfig, exc: Exception) -> str:
    record = {"error": type(exc).__name__, "message": str(exc)}
    node = getattr(exc, "node", None)
    if node is not None:
        record["node"] = node
    return _json_doc(config, None, [record])


def _frenet_rows(curve, grid):
    rows = []
    for t in grid.points():
        app = frenet_apparatus(curve, float(t))
        p = curve.point(float(t))
        rows.append([t, *p, *app.T, *app.N, *app.B, app.kappa, app.tau])
    return rows


_FRENET_HEADER = [
    "param", "px", "py", "pz",
    "Tx", "Ty", "Tz", "Nx", "Ny", "Nz", "Bx", "By", "Bz",
    "kappa", "tau",
]


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------


def _largest_live_block(mask: np.ndarray) -> slice | None:
    best = None
    start = None
    for i, flag in enumerate(list(mask) + [False]):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            if best is None or i - start > best.stop - best.start:
                best = slice(start, i)
            start = None
    if best is not None and best.stop - best.start >= 9:
        return best
    return None


def _kind_with_constant(kind_name: str, constant: float) -> DirectionKind:
    if kind_name == "bertrand":
        return DirectionKind.bertrand(constant)
    if kind_name == "evolute":
        return DirectionKind.evolute(phase=constant)
    return DirectionKind.mannheim(phase=constant)


def _inset_grid(start: float, end: float, count: int, inset: int = 2) -> Grid:
    h = (end - start) / (count - 1)
    return Grid(start + inset * h, end - inset * h, count - 2 * inset)


def verify_entry(entry: catalog.CatalogEntry, tolerance: float = _DEFAULT_TOL):
    """Run the full verification suite for one catalog entry.

    Returns (checks, artifacts): checks is a list of dicts each carrying
    an id, measured numbers, and passed True/False/None (None = not
    applicable); artifacts maps names to sampled polylines for rendering.
    """
    checks: list[dict] = []
    artifacts: dict[str, np.ndarray] = {}
    curve = entry.curve

    # closed-form reference comparisons
    if entry.references is not None:
        refs = entry.references
        ind_cmp = catalog.compare_indicatrix(entry)
        checks.append(
            {
                "id": f"{entry.id}:indicatrix-closed-form",
                "sup_error": ind_cmp.sup_error,
                "tolerance": refs.tolerance,
                "passed": ind_cmp.sup_error <= refs.tolerance,
            }
        )
        for kind_name, cmp in catalog.compare_direction_curves(entry).items():
            checks.append(
                {
                    "id": f"{entry.id}:{kind_name}-closed-form",
                    "sup_error": cmp.sup_error,
                    "component_errors": list(cmp.component_errors),
                    "constant": cmp.constant,
                    "samples": cmp.samples,
                    "tolerance": refs.tolerance,
                    "passed": cmp.sup_error <= refs.tolerance,
                }
            )
        table_full = build_indicatrix_table(curve, refs.comparison_grid)
        norm_dev = float(np.max(np.abs(np.linalg.norm(table_full.points, axis=1) - 1.0)))
        checks.append(
            {
                "id": f"{entry.id}:indicatrix-unit-norm",
                "max_deviation": norm_dev,
                "tolerance": 1e-9,
                "passed": norm_dev <= 1e-9,
            }
        )

    # theorem suite on the regular grid
    grid = entry.theorem_grid
    try:
        table = build_indicatrix_table(curve, grid, allow_degenerate=False)
    except DegenerateError as exc:
        checks.append(
            {"id": f"{entry.id}:frame", "passed": None, "skipped": f"degenerate frame: {exc}"}
        )
        return checks, artifacts

    # place the free phases so the coefficient angle stays centered on the
    # flat part of its sine/cosine: predictions then stay well conditioned
    # over the whole grid (the closed forms hold for any constant)
    mid_tau = 0.5 * float(table.int_tau.min() + table.int_tau.max())
    mid_kappa = 0.5 * float(table.int_kappa.min() + table.int_kappa.max())
    constants = {
        "evolute": np.pi / 2 - mid_tau,
        "bertrand": _DEFAULT_CONSTANTS["bertrand"],
        "mannheim": -mid_kappa,
    }

    base_report = classify(curve, grid, tol=tolerance)
    ind_curve = tangent_indicatrix(curve, grid)
    donor_grid = _inset_grid(ind_curve.domain[0], ind_curve.domain[1], grid.count)
    donor_report = classify(ind_curve, donor_grid, tol=tolerance)
    artifacts["curve"] = np.array([curve.point(t) for t in entry.default_grid.points()])
    artifacts["indicatrix"] = table.points

    for kind_name in ("evolute", "bertrand", "mannheim"):
        kind = _kind_with_constant(kind_name, constants[kind_name])
        dc = integrate_direction_curve(kind, curve, grid)
        artifacts[kind_name] = dc.points

        if dc.is_degenerate_line:
            checks.append(
                {
                    "id": f"{entry.id}:{kind_name}:system-residuals",
                    "passed": None,
                    "skipped": "direction curve degenerates to a straight line",
                }
            )
        else:
            rep = residual_check(kind, dc)
            checks.append(
                {
                    "id": f"{entry.id}:{kind_name}:system-residuals",
                    "equation_residuals": list(rep.equation_residuals),
                    "normal_alignment": rep.normal_alignment,
                    "kappa_match": rep.kappa_match,
                    "tau_match": rep.tau_match,
                    "nodes": rep.nodes_checked,
                    "tolerance": _RESIDUAL_TOL,
                    "alignment_min": _ALIGNMENT_MIN,
                    "passed": rep.passes(_RESIDUAL_TOL, _ALIGNMENT_MIN, _RESIDUAL_TOL),
                }
            )

            # inverse curvature relations on the widest usable block; the
            # evolute/mannheim inversions differentiate tau/kappa, which is
            # only resolvable away from the zeros of kappa_beta
            mu_beta = np.hypot(dc.predicted_kappa, dc.predicted_tau)
            live = (
                ~dc.donor.degenerate
                & (mu_beta > 1e-3)
                & (np.abs(dc.predicted_kappa) > np.maximum(1e-3, 0.35 * mu_beta))
            )
            block = _largest_live_block(live)
            if block is not None:
                kb = dc.predicted_kappa[block]
                tb = dc.predicted_tau[block]
                kT, tT = recover_donor_curvatures(kind, kb, tb, dc.s_beta[block])
                interior = slice(3, -3)
                err_k = float(np.max(np.abs(np.abs(kT[interior]) - np.abs(dc.donor.kappa_T[block][interior]))))
                err_t = float(np.max(np.abs(np.abs(tT[interior]) - np.abs(dc.donor.tau_T[block][interior]))))
                checks.append(
                    {
                        "id": f"{entry.id}:{kind_name}:donor-curvature-roundtrip",
                        "kappa_T_error": err_k,
                        "tau_T_error": err_t,
                        "tolerance": _RESIDUAL_TOL,
                        "passed": max(err_k, err_t) <= _RESIDUAL_TOL,
                    }
                )

        beta_grid = _inset_grid(grid.start, grid.end, grid.count)
        beta_report = classify(dc.as_curve(), beta_grid, tol=tolerance)
        for chk in correspondence_report(kind_name, donor_report, beta_report, base_report):
            checks.append(
                {
                    "id": f"{entry.id}:{chk.claim}",
                    "lhs": chk.lhs,
                    "rhs": chk.rhs,
                    "passed": chk.passed,
                }
            )
    return checks, artifacts


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_frenet(config: RunConfig) -> int:
    curve, entry = resolve_curve(config.curve_id)
    grid = config.grid or (entry.default_grid if entry else Grid(0.0, 2 * np.pi, 201))
    rows = _frenet_rows(curve, grid)
    if config.output_format == "json":
        results = {"rows": [dict(zip(_FRENET_HEADER, row)) for row in rows]}
        _emit(_json_doc(config, results, []), config.output_path)
    elif config.output_format == "svg":
        pts = np.array([row[1:4] for row in rows])
        _emit(render_projections(pts, title=f"{config.curve_id}"), config.output_path)
    else:
        _emit(_csv(_FRENET_HEADER, rows), config.output_path)
    return 0


def _cmd_indicatrix(config: RunConfig) -> int:
    curve, entry = resolve_curve(config.curve_id)
    grid = config.grid or (entry.theorem_grid if entry else Grid(0.0, 2 * np.pi, 201))
    table = build_indicatrix_table(curve, grid, allow_degenerate=False)
    rows = []
    for i, t in enumerate(table.t_values):
        app = indicatrix_apparatus(curve, float(t), table=table)
        rows.append(
            [table.s_T[i], *table.points[i], *app.T_T, *app.N_T, *app.B_T, app.kappa_T, app.tau_T]
        )
    if config.output_format == "json":
        results = {"rows": [dict(zip(_FRENET_HEADER, row)) for row in rows]}
        _emit(_json_doc(config, results, []), config.output_path)
    elif config.output_format == "svg":
        _emit(render_projections(table.points, title=f"{config.curve_id} indicatrix"), config.output_path)
    else:
        _emit(_csv(_FRENET_HEADER, rows), config.output_path)
    return 0


def _cmd_direction(config: RunConfig) -> int:
    if config.kind is None:
        raise DomainError("the direction command requires --kind")
    curve, entry = resolve_curve(config.curve_id)
    grid = config.grid or (entry.theorem_grid if entry else Grid(0.0, 2 * np.pi, 201))
    dc = integrate_direction_curve(config.kind, curve, grid)
    m = dc.measured
    header = _FRENET_HEADER + ["kappa_pred", "tau_pred"]
    rows = []
    for i in range(dc.t_values.size):
        rows.append(
            [
                dc.s_beta[i], *dc.points[i], *m.T[i], *m.N[i], *m.B[i],
                m.kappa[i], m.tau[i], dc.predicted_kappa[i], dc.predicted_tau[i],
            ]
        )
    if config.output_format == "json":
        results = {"rows": [dict(zip(header, row)) for row in rows]}
        _emit(_json_doc(config, results, []), config.output_path)
    elif config.output_format == "svg":
        _emit(
            render_projections(dc.points, title=f"{config.curve_id} {config.kind.name}-direction"),
            config.output_path,
        )
    else:
        _emit(_csv(header, rows), config.output_path)
    return 0


def _cmd_classify(config: RunConfig) -> int:
    curve, entry = resolve_curve(config.curve_id)
    grid = config.grid or (entry.theorem_grid if entry else Grid(0.0, 2 * np.pi, 201))
    report = classify(curve, grid, tol=config.tolerance)
    results = {
        "is_straight_line": report.is_straight_line,
        "is_general_helix": report.is_general_helix,
        "is_slant_helix": report.is_slant_helix,
        "is_spherical": report.is_spherical,
        "is_circle_on_sphere": report.is_circle_on_sphere,
        "is_spherical_helix": report.is_spherical_helix,
        "is_spherical_slant_helix": report.is_spherical_slant_helix,
        "scores": report.scores,
        "tolerance": report.tolerance,
    }
    _emit(_json_doc(config, results, []), config.output_path)
    return 0


def _cmd_verify(config: RunConfig) -> int:
    curve, entry = resolve_curve(config.curve_id)
    if entry is None:
        raise DomainError("verify needs a catalog curve id")
    checks, _ = verify_entry(entry, tolerance=config.tolerance)
    failed = [c for c in checks if c.get("passed") is False]
    _emit(_json_doc(config, {"failed": len(failed), "total": len(checks)}, checks), config.output_path)
    return 2 if failed else 0


def _cmd_reproduce(config: RunConfig) -> int:
    curve, entry = resolve_curve(config.curve_id)
    if entry is None or entry.references is None:
        raise DomainError("reproduce needs a catalog curve with reference solutions (ex7.1, ex7.2)")
    out_dir = config.output_dir or f"reproduce_{entry.id.replace('.', '_')}"
    os.makedirs(out_dir, exist_ok=True)

    checks, artifacts = verify_entry(entry, tolerance=config.tolerance)

    # render the reference-grid objects: the curve itself, its indicatrix,
    # and the three direction curves at the figure constants
    refs = entry.references
    grid = refs.comparison_grid
    table = build_indicatrix_table(entry.curve, grid)
    stem = entry.id.replace(".", "_")
    files = {}
    curve_pts = np.array([entry.curve.point(t) for t in grid.points()])
    renders = [("curve", curve_pts), ("indicatrix", table.points)]
    for kind_name in ("evolute", "bertrand", "mannheim"):
        kind = _kind_with_constant(kind_name, refs.figure_constants[kind_name])
        dc = integrate_direction_curve(kind, entry.curve, grid)
        renders.append((f"{kind_name}", dc.points))
    for label, pts in renders:
        path = os.path.join(out_dir, f"{stem}_{label}.svg")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render_projections(pts, title=f"{entry.id} {label}"))
        files[label] = path

    failed = [c for c in checks if c.get("passed") is False]
    summary = _json_doc(config, {"files": files, "failed": len(failed), "total": len(checks)}, checks)
    with open(os.path.join(out_dir, f"{stem}_summary.json"), "w", encoding="utf-8") as fh:
        fh.write(summary)
    sys.stdout.write(summary)
    return 2 if failed else 0


_COMMANDS = {
    "frenet": _cmd_frenet,
    "indicatrix": _cmd_indicatrix,
    "direction": _cmd_direction,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
    "reproduce": _cmd_reproduce,
}


def run(config: RunConfig) -> int:
    """Execute a command; returns the process exit code.

    Input errors exit 1; degenerate geometry and verification failures
    exit 2 with a structured error record on the selected output.
    """
    try:
        return _COMMANDS[config.command](config)
    except (ExpressionError,) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except DegenerateError as exc:
        _emit(_error_doc(config, exc), config.output_path)
        return 2
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except FrenetLabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frenetlab",
        description="Frenet frames, tangent indicatrices, and direction curves of space curves.",
    )
    parser.add_argument("--version", action="version", version=f"frenetlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, formats=("csv", "json", "svg")):
        p.add_argument("--curve", required=True, help="catalog id or inline 'fx, fy, fz' expression")
        p.add_argument("--grid", help="sampling grid start:end:count (count normalized to odd)")
        p.add_argument("--format", choices=formats, default=formats[0], dest="output_format")
        p.add_argument("--output", dest="output_path", help="output file (default: stdout)")
        p.add_argument(
            "--tolerance",
            type=float,
            default=None,
            help="classification/verification tolerance (default 1e-3, env FRENETLAB_TOL)",
        )

    add_common(sub.add_parser("frenet", help="tabulate the Frenet apparatus"))
    add_common(sub.add_parser("indicatrix", help="construct the tangent indicatrix"))
    p_dir = sub.add_parser("direction", help="integrate a direction curve")
    add_common(p_dir)
    p_dir.add_argument("--kind", required=True, choices=("evolute", "bertrand", "mannheim"))
    p_dir.add_argument("--theta", type=float, default=0.0, help="bertrand tangent angle (radians)")
    p_dir.add_argument("--phase", type=float, default=0.0, help="coefficient integral phase")
    add_common(sub.add_parser("classify", help="detect curve classes"), formats=("json",))
    add_common(sub.add_parser("verify", help="run the full verification suite"), formats=("json",))
    p_rep = sub.add_parser("reproduce", help="emit the worked-example figures and summary")
    p_rep.add_argument("example", choices=("ex7.1", "ex7.2"))
    p_rep.add_argument("--output-dir", dest="output_dir")
    p_rep.add_argument("--tolerance", type=float, default=None)
    return parser


def _default_tolerance() -> float:
    env = os.environ.get("FRENETLAB_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            pass
    return _DEFAULT_TOL


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    tolerance = getattr(args, "tolerance", None)
    if tolerance is None:
        tolerance = _default_tolerance()

    try:
        if args.command == "reproduce":
            config = RunConfig(
                command="reproduce",
                curve_id=args.example,
                tolerance=tolerance,
                output_format="svg",
                output_dir=args.output_dir,
            )
        else:
            kind = None
            if args.command == "direction":
                if args.kind == "bertrand":
                    kind = DirectionKind.bertrand(args.theta)
                else:
                    kind = _kind_with_constant(args.kind, args.phase)
            config = RunConfig(
                command=args.command,
                curve_id=args.curve,
                grid=parse_grid(args.grid) if getattr(args, "grid", None) else None,
                kind=kind,
                tolerance=tolerance,
                output_format=getattr(args, "output_format", "json"),
                output_path=getattr(args, "output_path", None),
            )
    except FrenetLabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
