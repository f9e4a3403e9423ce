"""Command line entry point: ``ginibre3d <command> [flags]``.

Every command writes a table either as CSV (header row always present) or
as one JSON object ``{"meta": {...}, "data": [...]}``.  Floats carry 12
significant digits; exact integers are written in full (as strings in JSON).

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from . import asymptotics as asy
from . import kernel as ker
from . import moments, polynomials
from . import quaternion as qt
from . import sampler, verify
from .errors import DomainError

TABLES_NMAX = 50
PRECISION = 12


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output


def _cell_csv(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.{PRECISION}g}"
    return "" if v is None else str(v)


def _cell_json(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return float(f"{f:.{PRECISION}g}") if math.isfinite(f) else str(f)
    if isinstance(v, dict):
        return {k: _cell_json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_cell_json(x) for x in v]
    return v


def render(columns, rows, fmt, meta) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell_csv(row[c]) for c in columns])
        return buf.getvalue()
    data = [{c: _cell_json(row[c]) for c in columns} for row in rows]
    return json.dumps({"meta": meta, "data": data}, indent=1) + "\n"


def emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _meta(args, argv):
    params = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    return {
        "command": args.command,
        "argv": list(argv),
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "parameters": params,
    }


# ---------------------------------------------------------------------------
# commands


def cmd_tables(args):
    nmax = args.nmax if args.nmax is not None else 9
    if not 0 <= nmax <= TABLES_NMAX:
        raise UsageError(f"--nmax must lie in [0, {TABLES_NMAX}]")
    which = args.which
    if which == "1":
        cols = ["m"] + [str(j) for j in range(nmax + 1)]
        rows = []
        for m in range(nmax + 1):
            row = {"m": m}
            row.update({str(j): moments.monomial_inner(m, j) for j in range(nmax + 1)})
            rows.append(row)
        return cols, rows
    if which == "2":
        rows = [
            {"n": n, "P_n": polynomials.p_poly(n).format("z"), "h_n": polynomials.h_norm(n),
             "beta_n": polynomials.beta(n) if n >= 1 else None}
            for n in range(nmax + 1)
        ]
        return ["n", "P_n", "h_n", "beta_n"], rows
    if which == "3":
        rows = [{"n": n, "Q_n": polynomials.q_poly(n).format("x")} for n in range(nmax + 1)]
        return ["n", "Q_n"], rows
    rows = []
    for m in range(nmax + 1):
        for j in range(nmax + 1):
            rows.append({"table": 1, "row": m, "column": str(j), "value": moments.monomial_inner(m, j)})
    for n in range(nmax + 1):
        rows.append({"table": 2, "row": n, "column": "P_n", "value": polynomials.p_poly(n).format("z")})
        rows.append({"table": 2, "row": n, "column": "h_n", "value": polynomials.h_norm(n)})
        if n >= 1:
            rows.append({"table": 2, "row": n, "column": "beta_n", "value": polynomials.beta(n)})
    for n in range(nmax + 1):
        rows.append({"table": 3, "row": n, "column": "Q_n", "value": polynomials.q_poly(n).format("x")})
    return ["table", "row", "column", "value"], rows


def cmd_poly(args):
    nmax = args.n if args.n is not None else 9
    if not 0 <= nmax <= polynomials.EXACT_MAX_DEGREE:
        raise UsageError(f"--n must lie in [0, {polynomials.EXACT_MAX_DEGREE}]")
    rows = []
    for n in range(nmax + 1):
        rows.append({
            "n": n,
            "P_n": polynomials.p_poly(n).format("z"),
            "Q_n": polynomials.q_poly(n).format("x"),
            "h_n": polynomials.h_norm(n),
            "beta_n": polynomials.beta(n) if n >= 1 else None,
            "det_D_n": moments.det_D(n),
        })
    return ["n", "P_n", "Q_n", "h_n", "beta_n", "det_D_n"], rows


def _n(args, default=10):
    n = args.n if args.n is not None else default
    if n < 0:
        raise UsageError("--n must be nonnegative")
    return n


def _grid(args, default=41):
    g = args.grid if args.grid is not None else default
    if g < 2:
        raise UsageError("--grid must be at least 2")
    return g


def cmd_kernel(args):
    n = _n(args)
    g = _grid(args, 11)
    if not -1.0 <= args.cos <= 1.0:
        raise UsageError("--cos must lie in [-1, 1]")
    r_max = args.rmax if args.rmax is not None else 2.0 * math.sqrt(n + 1) + 1.0
    radii = np.linspace(r_max / g, r_max, g)
    S, T = np.meshgrid(radii, radii, indexing="ij")
    S, T = S.ravel(), T.ravel()
    u = np.broadcast_to(qt.I, (S.size, 4))
    v = np.broadcast_to(qt.pure(args.cos, math.sqrt(1.0 - args.cos**2), 0.0), (S.size, 4))
    kv = ker.kernel_closed(n, u, S, v, T)
    rows = []
    for i in range(S.size):
        K = kv.value[i]
        rows.append({"n": n, "s": S[i], "t": T[i], "u_dot_v": kv.u_dot_v[i], "rho": kv.rho[i],
                     "delta": kv.delta[i], "K_real": K[0], "K_i": K[1], "K_j": K[2], "K_k": K[3]})
    return ["n", "s", "t", "u_dot_v", "rho", "delta", "K_real", "K_i", "K_j", "K_k"], rows


def _radial_grid(args, n):
    g = _grid(args, 101)
    r_max = args.rmax if args.rmax is not None else 2.0 * math.sqrt(n + 1) + 3.0
    return np.linspace(0.0, r_max, g)


def cmd_density(args):
    n = _n(args)
    r = _radial_grid(args, n)
    x = qt.I * r[:, None]
    d = ker.intensity_lebesgue(n, x)
    return ["n", "r", "density"], [{"n": n, "r": ri, "density": di} for ri, di in zip(r, d)]


def cmd_radial(args):
    n = _n(args)
    r = _radial_grid(args, n)
    d = ker.radial_density(n, r)
    return ["n", "r", "density"], [{"n": n, "r": ri, "density": di} for ri, di in zip(r, d)]


def _asym_rows(n, regime, p1, p2, exact, approx):
    rows = []
    for a, b, e, x in zip(p1, p2, exact, approx):
        err = abs(e - x)
        rows.append({"n": n, "regime": regime, "p1": a, "p2": b, "exact": e, "approx": x,
                     "abs_err": err, "rel_err": err / abs(e) if e != 0 else float("inf")})
    return rows


def cmd_asymptotics(args):
    n = _n(args, 1000)
    g = _grid(args, 41)
    regime = args.regime
    cols = ["n", "regime", "p1", "p2", "exact", "approx", "abs_err", "rel_err"]
    nan = [float("nan")] * g
    if regime == "density":
        s = np.linspace(0.2, 0.8, g)
        approx, limit, _ = asy.density_limit_check(n, s)
        return cols, _asym_rows(n, regime, s, nan, approx, limit)
    if regime == "radial":
        s = np.linspace(0.2, 0.8, g)
        approx, limit, _ = asy.radial_limit_check(n, s)
        return cols, _asym_rows(n, regime, s, nan, approx, limit)
    if regime == "hermite":
        phi = np.linspace(math.pi / 3, 2 * math.pi / 3, g)
        exact = asy.exact_hermite_function(n, asy.pr_argument(n, phi))
        return cols, _asym_rows(n, regime, phi, nan, exact, asy.pr_weighted_hermite(n, phi))
    if regime == "center-hermite":
        s = np.linspace(0.5, 3.0, g)
        return cols, _asym_rows(n, regime, s, nan, asy.exact_center_hermite(n, s), asy.center_hermite(n, s))
    if regime == "bulk":
        tau = np.linspace(-2.0, 2.0, g)
        sigma = np.zeros(g)
        u = np.broadcast_to(qt.I, (g, 4))
        kk = asy.bulk_kernel_KK(n, u, sigma, u, tau, args.x0)
        lim = asy.bulk_kernel_limit(u, sigma, u, tau)
        return cols, _asym_rows(n, regime, sigma, tau, kk[:, 0], lim[:, 0])
    if regime == "center":
        s = np.full(g, 1.0)
        t = np.linspace(0.5, 3.0, g)
        u = np.broadcast_to(qt.I, (g, 4))
        ex = asy.center_kernel_exact(n, u, s, u, t)
        ap = asy.center_kernel_approx(n, u, s, u, t)
        return cols, _asym_rows(n, regime, s, t, ex[:, 0], ap[:, 0])
    raise UsageError(f"unknown regime {regime!r}")


def cmd_sample(args):
    n = _n(args, 1)
    cfg = sampler.SamplerConfig(n=n, count=args.count, seed=args.seed, workers=args.workers)
    samples = sampler.rejection_sample(cfg)
    if args.format == "json":
        radial = sampler.estimate_radial(samples)
        rows = [_hist_row("radial", radial)]
        if n == 1:
            rows.append(_hist_row("angular", sampler.estimate_angular(samples)))
        return ["statistic", "bin_edges", "counts", "expected", "ks", "max_z", "mean",
                "acceptance_rate", "max_ratio", "configurations"], rows
    rows = []
    for c, conf in enumerate(samples.points):
        for p, x in enumerate(conf):
            rows.append({"configuration": c, "point": p, "x": x[1], "y": x[2], "z": x[3]})
    return ["configuration", "point", "x", "y", "z"], rows


def _hist_row(name, res):
    return {"statistic": name, "bin_edges": res.bin_edges, "counts": [int(c) for c in res.counts],
            "expected": res.expected, "ks": res.ks, "max_z": res.max_z, "mean": res.mean,
            "acceptance_rate": res.acceptance_rate, "max_ratio": res.max_ratio,
            "configurations": int(res.counts.sum()) if name == "angular" else None}


def cmd_figures(args):
    which = args.which
    g = _grid(args, 201)
    if which == "1":
        nmax = args.nmax if args.nmax is not None else 9
        x = np.linspace(-1.0, 1.0, g)
        rows = []
        for n in range(1, nmax + 1):
            # P_n(i r) = i^n Q_n(r); the scalar factor is plotted
            vals = polynomials.h_norm(n) ** -0.75 * polynomials.q_poly(n)(math.sqrt(3 * n) * x)
            rows += [{"x": a, "value": b, "n": n} for a, b in zip(x, vals)]
        return ["x", "value", "n"], rows
    if which == "2":
        nmax = args.nmax if args.nmax is not None else 64
        s = np.linspace(0.0, 2.0 * math.sqrt(nmax) + 2.0, g)
        rows = []
        for n in range(2, nmax + 1, 2):
            vals = ker.rho_diagonal_weighted(n, s) / (n + 1)
            rows += [{"x": a, "value": b, "n": n} for a, b in zip(s, vals)]
        return ["x", "value", "n"], rows
    if which == "3":
        n = _n(args, 2000)
        tau = np.linspace(-6.0, 6.0, g)
        rows = []
        for x0 in (0.3, 0.5, 0.7):
            phi = math.acos(x0)
            u = np.broadcast_to(qt.I, (g, 4))
            finite = asy.bulk_kernel_KK(n, u, np.zeros(g), u, tau, x0)[:, 0]
            limit = asy.sinc(tau)
            rows += [{"phi": phi, "tau": a, "limit": b, "finite_n": c, "n": n}
                     for a, b, c in zip(tau, limit, finite)]
        return ["phi", "tau", "limit", "finite_n", "n"], rows
    raise UsageError("figure id must be 1, 2 or 3")


def cmd_verify(args):
    echo = (lambda line: print(line, file=sys.stderr)) if not args.quiet else None
    only = None
    if args.criteria:
        only = tuple(int(c) for c in args.criteria.split(","))
        if any(c not in verify.CHECKS for c in only):
            raise UsageError("criteria ids must lie in 1..14")
    report = verify.run_suite(args.suite, only=only, echo=echo)
    rows = []
    for r in report.results:
        d = r.as_dict()
        rows.append({"id": d["id"], "title": d["title"], "passed": d["passed"],
                     "measured": d["measured"], "bounds": d["bounds"], "seconds": d["seconds"],
                     "note": d["note"]})
    args._report_passed = report.passed
    cols = ["id", "title", "passed", "measured", "bounds", "seconds", "note"]
    if args.format == "csv":
        rows = [{**r, "measured": json.dumps(_cell_json(r["measured"])),
                 "bounds": json.dumps(_cell_json(r["bounds"]))} for r in rows]
    return cols, rows


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ginibre3d", description="Quaternion kernel point field toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, fmt_default="csv"):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--format", choices=("csv", "json"), default=fmt_default)
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.set_defaults(func=func)
        return sp

    sp = add("tables", cmd_tables, "monomial products, P_n / h_n / beta_n, Q_n")
    sp.add_argument("--nmax", type=int, default=None)
    sp.add_argument("--which", choices=("1", "2", "3", "all"), default="all")

    sp = add("poly", cmd_poly, "exact polynomial data up to degree n")
    sp.add_argument("--n", type=int, default=None)

    sp = add("kernel", cmd_kernel, "K_n(us, vt) on a radial grid")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--cos", type=float, default=0.5, help="cosine of the angle between u and v")
    sp.add_argument("--rmax", type=float, default=None)

    for name, func, text in (("density", cmd_density, "Lebesgue intensity along a ray"),
                             ("radial", cmd_radial, "radial density p_n(r)")):
        sp = add(name, func, text)
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--grid", type=int, default=None)
        sp.add_argument("--rmax", type=float, default=None)

    sp = add("asymptotics", cmd_asymptotics, "exact vs approximate values in a limit regime")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--regime", default="density",
                    choices=("density", "radial", "hermite", "center-hermite", "bulk", "center"))
    sp.add_argument("--x0", type=float, default=0.5)

    sp = add("sample", cmd_sample, "rejection sampling for n <= 2")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--count", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("figures", cmd_figures, "data behind figures 1, 2 and 3")
    sp.add_argument("--which", choices=("1", "2", "3"), required=True)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--nmax", type=int, default=None)
    sp.add_argument("--grid", type=int, default=None)

    sp = add("verify", cmd_verify, "run the acceptance checks", fmt_default="json")
    sp.add_argument("--suite", choices=tuple(verify.SUITES), default="fast")
    sp.add_argument("--criteria", default=None, help="comma separated ids, overrides --suite")
    sp.add_argument("--quiet", action="store_true")
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cols, rows = args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    emit(render(cols, rows, args.format, _meta(args, argv)), args.out)
    if args.command == "verify" and not args._report_passed:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
