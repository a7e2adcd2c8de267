"""
Command line front end: ``plate solve|field|sweep|convergence|oracle <config>``.

Exit codes: 0 when every criterion passes, 2 when a criterion fails, 1 on
any error (bad config, unsolvable problem, unsupported oracle case).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace

import numpy as np

from .config import MM, MPA, ConfigError, load_problem
from .criteria import ConfigurationError, DesignReport, evaluate_problem, sweep
from .fields import derive_fields, principal_stress_max
from .model import PlateProblem, validate_problem
from .oracle_fdm import OracleCapabilityError, compare, solve_fdm
from .solver import InvalidProblem, solve, solve_adaptive

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2

# CLI sweep names -> (criteria axis, factor from the surface unit to SI)
SWEEP_PARAMS = {
    "t_mm": ("thickness", MM),
    "Lx_mm": ("Lx", MM),
    "Ly_mm": ("Ly", MM),
    "load_kg": ("load", 1.0),
    "load_Pa": ("load", 1.0),
    "load_scale": ("load_scale", 1.0),
}


class CliError(Exception):
    pass


def _problem(path) -> PlateProblem:
    try:
        p = load_problem(path)
    except FileNotFoundError as exc:
        raise CliError(str(exc)) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc})") from None
    except ConfigError as exc:
        raise CliError("invalid config:\n  " + "\n  ".join(exc.errors)) from None
    bad = validate_problem(p)
    if bad:
        raise CliError("invalid problem:\n  " + "\n  ".join(bad))
    return p


def _criterion_units(kind: str):
    return (MPA, "MPa") if kind == "max_stress" else (MM, "mm")


def report_json(rep: DesignReport, timings: bool = True) -> dict:
    """The stable machine-readable summary of one evaluated design."""
    d = rep.diagnostics
    crit = []
    for r in rep.results:
        scale, _ = _criterion_units(r.kind)
        crit.append({"kind": r.kind, "measured": r.measured / scale, "limit": r.limit / scale, "pass": r.passed})
    return {
        "omega_max_mm": d["omega_max"] / MM,
        "location_mm": [d["omega_location"][0] / MM, d["omega_location"][1] / MM],
        "sigma1_max_mpa": d["sigma1_max"] / MPA,
        "criteria": crit,
        "n_used": d["n_used"],
        "r": d["r"],
        "k": d["k"],
        "timings_s": dict(d["timings"]) if timings else None,
    }


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _print_report(rep: DesignReport):
    d = rep.diagnostics
    wx, wy = d["omega_location"]
    sx, sy = d["sigma1_location"]
    print(f"max deflection   {d['omega_max'] / MM:.6g} mm at ({wx / MM:.4g}, {wy / MM:.4g}) mm")
    print(f"max principal    {d['sigma1_max'] / MPA:.6g} MPa at ({sx / MM:.4g}, {sy / MM:.4g}) mm")
    print(f"order            n = {d['n_used']}, r = {d['r']}, k = {d['k']} ({d['termination']})")
    t = d["timings"]
    print(f"time             {t.get('total', 0.0):.3f} s total")
    if not rep.results:
        print("criteria         none")
    for r in rep.results:
        scale, unit = _criterion_units(r.kind)
        print(f"  {r.kind:<18} measured {r.measured / scale:.6g} {unit}  limit {r.limit / scale:.6g} {unit}"
              f"  margin {100 * r.margin:+.1f}%  {'PASS' if r.passed else 'FAIL'}")
    print(f"verdict          {rep.verdict}")


def cmd_solve(args) -> int:
    p = _problem(args.config)
    rep = evaluate_problem(p)
    if args.json:
        print(_dump(report_json(rep, timings=not args.no_timings)))
    else:
        _print_report(rep)
    return EXIT_PASS if rep.passed else EXIT_FAIL


FIELD_KINDS = ("deflection", "stress", "moment")


def field_grid(problem: PlateProblem, solution, kind: str, n: int):
    """``(X, Y, V)`` on an ``n x n`` grid covering the plate, edges included.

    deflection in mm, stress as the peak principal extreme-fiber stress in
    MPa, moment as the matching principal bending moment in N*m/m.
    """
    g = problem.geometry
    xs = np.linspace(0.0, g.Lx, n)
    ys = np.linspace(0.0, g.Ly, n)
    # raster order: y outer, x inner
    Y, X = np.meshgrid(ys, xs, indexing="ij")
    if kind == "deflection":
        V = np.asarray(solution(X, Y)) / MM
    else:
        t = problem.material.t
        s1 = principal_stress_max(derive_fields(solution, problem.rigidities, t), X, Y)
        V = s1 / MPA if kind == "stress" else s1 * t**2 / 6.0
    return X, Y, np.broadcast_to(V, X.shape)


def write_csv(path, X, Y, V):
    lines = ["x_mm,y_mm,value"]
    for x, y, v in zip(X.ravel(), Y.ravel(), V.ravel()):
        lines.append(f"{x / MM:.9g},{y / MM:.9g},{float(v) + 0.0:.9g}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_png(path, X, Y, V, label):
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise CliError("--png needs matplotlib (pip install matplotlib)") from None
    fig, ax = plt.subplots(figsize=(6, 6 * (Y.max() / X.max()) if X.max() else 6))
    cs = ax.contourf(X / MM, Y / MM, V, levels=24, cmap="viridis")
    fig.colorbar(cs, ax=ax, label=label)
    ax.set_xlabel("x (mm)")
    ax.set_ylabel("y (mm)")
    ax.set_aspect("equal")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def cmd_field(args) -> int:
    p = _problem(args.config)
    if args.grid < 2:
        raise CliError("--grid must be at least 2")
    sol = solve(p)
    X, Y, V = field_grid(p, sol, args.field, args.grid)
    try:
        write_csv(args.out, X, Y, V)
        if args.png:
            label = {"deflection": "deflection (mm)", "stress": "max principal stress (MPa)",
                     "moment": "principal moment (N m/m)"}[args.field]
            write_png(args.png, X, Y, V, label)
    except OSError as exc:
        raise CliError(f"cannot write output: {exc}") from None
    print(f"wrote {args.grid * args.grid} rows to {args.out}")
    return EXIT_PASS


def _parse_values(text: str, param: str):
    items = [v.strip() for v in text.split(",") if v.strip()]
    if param.startswith("bc:"):
        return items
    try:
        return [float(v) for v in items]
    except ValueError:
        raise CliError(f"--values must be numbers for {param}") from None


def cmd_sweep(args) -> int:
    p = _problem(args.config)
    values = _parse_values(args.values, args.param)
    if args.param.startswith("bc:"):
        axis, scale = args.param, None
    elif args.param in SWEEP_PARAMS:
        axis, scale = SWEEP_PARAMS[args.param]
    else:
        raise CliError(f"unknown sweep parameter {args.param!r}; choose from "
                       + ", ".join([*SWEEP_PARAMS, "bc:<index>"]))
    kinds = {ld.kind for ld in p.loads}
    if args.param == "load_kg" and kinds != {"mass_patch"}:
        raise CliError("load_kg needs a single mass load")
    if args.param == "load_Pa" and not kinds <= {"uniform", "patch"}:
        raise CliError("load_Pa needs a single uniform or patch load")
    if not values:
        print("no values given")
        return EXIT_ERROR
    si = values if scale is None else [v * scale for v in values]
    try:
        reports = sweep(p, axis, si, workers=args.workers)
    except ConfigurationError as exc:
        raise CliError(str(exc)) from None
    rows = []
    for rep in reports:
        shown = rep.value if scale is None else rep.value / scale
        if rep.error:
            rows.append({"value": shown, "omega_max_mm": None, "sigma1_max_mpa": None,
                         "verdict": "ERROR", "error": rep.error})
        else:
            row = report_json(rep, timings=not args.no_timings)
            row.update(value=shown, verdict=rep.verdict)
            rows.append(row)
    if args.json:
        print(_dump({"param": args.param, "rows": rows}))
    else:
        print(f"{args.param:>12}  {'w_max (mm)':>12}  {'s1_max (MPa)':>12}  verdict")
        for row in rows:
            v = row["value"]
            vs = f"{v:.6g}" if isinstance(v, float) else str(v)
            if row["verdict"] == "ERROR":
                print(f"{vs:>12}  {'-':>12}  {'-':>12}  ERROR  {row['error']}")
            else:
                print(f"{vs:>12}  {row['omega_max_mm']:>12.6g}  {row['sigma1_max_mpa']:>12.6g}  {row['verdict']}")
    return EXIT_PASS if any(r.passed for r in reports) else EXIT_FAIL


def cmd_convergence(args) -> int:
    p = _problem(args.config)
    p = replace(p, settings=replace(p.settings, order="auto"))
    sol = solve_adaptive(p)
    if args.json:
        rows = [{k: v for k, v in row.items()} for row in sol.trace]
        for row in rows:
            if "omega_max" in row:
                row["omega_max_mm"] = row.pop("omega_max") / MM
                row["location_mm"] = [c / MM for c in row.pop("location")]
            if args.no_timings:
                row.pop("time_s", None)
        print(_dump({"rows": rows, "termination": sol.termination}))
        return EXIT_PASS
    print(f"{'n':>3} {'r':>4} {'k':>4} {'w_max (mm)':>14} {'change':>10} {'residual':>10} {'time (s)':>9}")
    for row in sol.trace:
        if "omega_max" not in row:
            print(f"{row['n']:>3}  {row['status']}")
            continue
        delta = row.get("delta_rel")
        ds = "-" if delta is None else f"{delta:.2e}"
        print(f"{row['n']:>3} {row['r']:>4} {row['k']:>4} {row['omega_max'] / MM:>14.8g} {ds:>10}"
              f" {row['residual_rel']:>10.3e} {row['time_s']:>9.3f}")
    print(sol.termination)
    return EXIT_PASS


def cmd_oracle(args) -> int:
    p = _problem(args.config)
    if args.grid < 16:
        raise CliError("--grid must be at least 16")
    t0 = time.perf_counter()
    sol = solve(p)
    t1 = time.perf_counter()
    try:
        grid = solve_fdm(p, args.grid, args.grid)
    except OracleCapabilityError as exc:
        raise CliError(f"oracle cannot handle this problem: {exc}") from None
    t2 = time.perf_counter()
    cmp = compare(sol, grid)
    out = {
        "galerkin_omega_max_mm": cmp.omega_max / MM,
        "fdm_omega_max_mm": cmp.omega_max_ref / MM,
        "disagreement_pct": 100 * cmp.rel_diff,
        "rms_rel": cmp.rms_rel,
        "n_used": sol.n_used,
        "grid": args.grid,
        "galerkin_time_s": t1 - t0,
        "fdm_time_s": t2 - t1,
    }
    if args.json:
        print(_dump(out))
    else:
        print(f"galerkin   {out['galerkin_omega_max_mm']:.8g} mm  (n = {sol.n_used}, {out['galerkin_time_s']:.3f} s)")
        print(f"fdm        {out['fdm_omega_max_mm']:.8g} mm  ({args.grid} x {args.grid} nodes, {out['fdm_time_s']:.3f} s)")
        print(f"difference {out['disagreement_pct']:.4f} %  (nodal rms {100 * cmp.rms_rel:.4f} % of peak)")
    return EXIT_PASS


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; argparse's own 2 would read as a failed criterion."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="plate", description="Evaluate rectangular plates under transverse load.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, json_flag=True):
        p.add_argument("config", help="problem JSON file, or the name of a bundled example")
        if json_flag:
            p.add_argument("--json", action="store_true", help="machine-readable output")
            p.add_argument("--no-timings", action="store_true",
                           help="leave wall times out of --json so reruns are byte-identical")

    p = sub.add_parser("solve", help="solve and check the design criteria")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("field", help="write a field on a regular grid as CSV")
    common(p, json_flag=False)
    p.add_argument("--field", choices=FIELD_KINDS, default="deflection")
    p.add_argument("--grid", type=int, default=51)
    p.add_argument("--out", required=True)
    p.add_argument("--png", help="also render a contour image")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("sweep", help="re-solve over values of one parameter")
    common(p)
    p.add_argument("--param", required=True, help=", ".join([*SWEEP_PARAMS, "bc:<index>"]))
    p.add_argument("--values", required=True, help="comma separated")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("convergence", help="show the adaptive order trace")
    common(p)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("oracle", help="compare with a finite-difference solution")
    common(p)
    p.add_argument("--grid", type=int, default=101)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, InvalidProblem) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # anything else is still an error exit, not a traceback
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
