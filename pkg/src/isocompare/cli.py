"""Command-line interface: ``isocompare {verify,kernels,cutlocus,report,fk}``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from . import convexity, scenario as sc
from .errors import IsocompareError
from .kernels import CurvatureContext, ck, h_k, j_tube, l_of_lambda, lambda_of_l, sk

log = logging.getLogger("isocompare")


def _parse_range(text: str) -> np.ndarray:
    try:
        a, b, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must be A:B:STEP, got {text!r}") from None
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError("range needs A <= B and STEP > 0")
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(count)


def _parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"point must be X,Y, got {text!r}") from None


def tabulate_kernels(k: float, n: int, ts, rhos=(), out=None) -> None:
    """Write t, s_k, c_k, lambda_k, l_k(lambda_k(t)), h_k and j_k(t, rho) as CSV."""
    ctx = CurvatureContext(k, n)
    ts = np.asarray(ts, dtype=float)
    lam = np.atleast_1d(lambda_of_l(ctx, ts))
    back = np.atleast_1d(l_of_lambda(ctx, lam))
    h = np.atleast_1d(h_k(ctx, ts))
    cols = [ts, np.atleast_1d(sk(k, ts)), np.atleast_1d(ck(k, ts)), lam, back, h]
    cols += [np.array([j_tube(ctx, t, rho) for t in ts]) for rho in rhos]
    w = csv.writer(out or sys.stdout, lineterminator="\n")
    w.writerow(["t", "s_k", "c_k", "lambda_k", "l_inverse", "h_k"] + [f"j_k_rho={rho:.9g}" for rho in rhos])
    for row in zip(*cols):
        w.writerow([format(float(v), ".9g") for v in row])


# -- subcommands ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    scen = sc.with_overrides(sc.load_scenario(args.scenario), args.tol, args.samples)
    log.info("running %s with %d verifier(s)", scen.name, len(scen.verifiers))
    reports = sc.run(scen, args.jobs)
    for r in reports:
        print(sc.summary_line(r))
        for note in r.notes:
            print(f"    note: {note}")
    if args.out:
        for path in sc.write_outputs(reports, args.out):
            log.info("wrote %s", path)
    code = sc.exit_status(reports)
    print(f"exit status {code}")
    return code


def cmd_kernels(args) -> int:
    tabulate_kernels(args.k, args.n, args.range, args.rho or ())
    return 0


def cmd_cutlocus(args) -> int:
    from .geometry import engine
    from .geometry.closed import ProjectivePlane
    scen = sc.load_scenario(args.scenario)
    M = scen.effective_manifold.build()
    x = args.point
    if isinstance(M, ProjectivePlane):
        x = M.sphere.from_chart(x)
    elif hasattr(M, "from_chart"):
        x = M.from_chart(x)
    locus = engine.point_cut_locus(M, x, directions=scen.effective_manifold.resolution.directions)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["direction_index", "t", "chart_x", "chart_y"])
        for i, t, cx, cy in locus.rows():
            w.writerow([i, format(t, ".9g"), format(cx, ".9g"), format(cy, ".9g")])
    finally:
        if args.out:
            out.close()
    print(f"# measure={locus.measure:.9g} rad={locus.rad:.9g} measure_error={locus.measure_error:.3g}",
          file=sys.stderr)
    return 0


def cmd_report(args) -> int:
    text = Path(args.input).read_text() if args.input != "-" else sys.stdin.read()
    reports = sc.reports_from_json(text)
    if args.out:
        for path in sc.write_outputs(reports, args.out, (args.format,)):
            log.info("wrote %s", path)
        return 0
    if args.format == "json":
        sys.stdout.write(sc.reports_to_json(reports))
    elif args.format == "csv":
        sys.stdout.write(sc.reports_to_csv(reports))
    else:
        for name, body in sc.reports_to_plotdata(reports).items():
            sys.stdout.write(f"# file: {name}\n{body}\n\n")
    return 0


def _load_samples(path) -> convexity.SampledFunction:
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise IsocompareError(f"{path}: expected two columns (t, value)")
    return convexity.SampledFunction(data[:, 0], data[:, 1])


def cmd_fk(args) -> int:
    ctx = CurvatureContext(args.k, 2)
    if args.fk_cmd == "chord":
        ch = convexity.chord(ctx, args.x1, args.y1, args.x2, args.y2)
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["t", "chord"])
        for t in args.at:
            w.writerow([format(t, ".9g"), format(float(ch(t)), ".9g")])
        return 0
    phi = _load_samples(args.samples)
    if args.fk_cmd == "check":
        rep = convexity.is_fk_convex(ctx, phi, args.sense)
        print(f"{'ok' if rep.ok else 'violation'} worst={rep.worst_violation:.9g} "
              f"at t={rep.location:.9g} slack={rep.slack:.3g}")
        return 0 if rep.ok else 1
    rep = convexity.comparison_bound(ctx, phi, args.l)
    print(f"{'ok' if rep.ok else 'violated'} worst_gap={rep.worst_gap:.9g} at t={rep.location:.9g} "
          f"lambda={rep.lam:.9g} hypothesis={'ok' if rep.hypothesis_ok else 'fails'}")
    if not rep.hypothesis_ok:
        return 2
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isocompare", description="Numerical comparison-geometry verifier.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run every verifier of a scenario")
    v.add_argument("--scenario", required=True, help="scenario JSON file or bundled scenario name")
    v.add_argument("--tol", type=float, help="default tolerance (replaces per-verifier overrides)")
    v.add_argument("--samples", type=int, help="boundary quadrature panels")
    v.add_argument("--jobs", type=int, default=1, help="verifiers run in parallel")
    v.add_argument("--out", help="directory for reports.json, reports.csv and plotdata/")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("kernels", help="tabulate the model kernels as CSV")
    k.add_argument("--k", type=float, required=True)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--range", type=_parse_range, required=True, help="A:B:STEP, endpoints inclusive")
    k.add_argument("--rho", type=float, action="append", help="tube width for a j_k column (repeatable)")
    k.set_defaults(func=cmd_kernels)

    c = sub.add_parser("cutlocus", help="cut locus of a point as a CSV polyline")
    c.add_argument("--scenario", required=True)
    c.add_argument("--point", type=_parse_point, required=True, help="X,Y in the chart of the surface")
    c.add_argument("--out", help="CSV file (default: stdout)")
    c.set_defaults(func=cmd_cutlocus)

    r = sub.add_parser("report", help="convert a reports.json document")
    r.add_argument("--format", choices=("json", "csv", "plotdata"), required=True)
    r.add_argument("--input", default="reports.json", help="report JSON file, or - for stdin")
    r.add_argument("--out", help="output directory (default: stdout)")
    r.set_defaults(func=cmd_report)

    f = sub.add_parser("fk", help="F_k-convexity experiments")
    f.add_argument("--k", type=float, required=True)
    fs = f.add_subparsers(dest="fk_cmd", required=True)
    ch = fs.add_parser("chord", help="evaluate the F_k chord through two points")
    for name in ("x1", "y1", "x2", "y2"):
        ch.add_argument(f"--{name}", type=float, required=True)
    ch.add_argument("--at", type=float, nargs="+", required=True)
    chk = fs.add_parser("check", help="chord test of sampled values (two-column file)")
    chk.add_argument("samples")
    chk.add_argument("--sense", choices=("convex", "concave"), default="convex")
    bd = fs.add_parser("bound", help="compare sampled f with sigma_{k, lambda_k(l)}")
    bd.add_argument("samples")
    bd.add_argument("--l", type=float)
    f.set_defaults(func=cmd_fk)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (IsocompareError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return sc.EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
