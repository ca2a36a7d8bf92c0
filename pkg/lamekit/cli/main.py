"""The `lamekit` command line.

Each subcommand builds one `OutputRecord` and writes it to stdout (or `--out`)
as JSON or CSV. Diagnostics go to stderr through logging.

Exit codes: 0 on success, 1 when a verification fails or a solver does not
converge, 2 on usage errors.

## Usage

```bash
lamekit wangerin --kind 1 --nu -1.5 --k 0.6 --mmax 0 --format csv
lamekit floquet --mu 0.4 --nu 0.3 --k 0.5 --mmax 3
lamekit verify --suite c1 --nu 0.3 --k 0.5
```
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from collections.abc import Callable, Sequence
from dataclasses import replace
from pathlib import Path

import numpy as np

from lamekit.analysis import count_zeros_segment, run_suite, verify_limit, winding_unit_circle
from lamekit.analysis.suites import DEFAULT_DEPTH, DEFAULT_KS, DEFAULT_NUS, SUITE_NAMES
from lamekit.cli.grids import parse_linear, parse_list, parse_pairs
from lamekit.cli.records import OutputRecord
from lamekit.config import DEFAULT_CONFIG, SolverConfig
from lamekit.elliptic import jacobi, modulus_from_k
from lamekit.errors import DomainError, LameError, WindingRefusedError
from lamekit.floquet import floquet_eigenvalues, scan_floquet_eigenvalues
from lamekit.recurrence import LameParams
from lamekit.special import algebraic_functions, ell_index, lame_polynomials
from lamekit.spectra import wangerin_eigenvalues
from lamekit.wangerin import eigenfunction, evaluate_in_strip, evaluate_on_real_axis, evaluate_on_segment

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
POLYNOMIAL_RESIDUAL_POINTS = 64

Command = Callable[[argparse.Namespace, SolverConfig], tuple[OutputRecord, bool]]


def _params(args: argparse.Namespace, *names: str) -> dict[str, object]:
    return {name: getattr(args, name) for name in names}


def _elliptic(args: argparse.Namespace, _config: SolverConfig) -> tuple[OutputRecord, bool]:
    m = modulus_from_k(args.k)
    x = parse_linear(args.grid) * m.bigK
    t = jacobi(x, m)
    rows = [
        {"x": float(xi), "sn": float(s), "cn": float(c), "dn": float(d), "am": float(a)}
        for xi, s, c, d, a in zip(x, np.atleast_1d(t.sn), np.atleast_1d(t.cn), np.atleast_1d(t.dn), np.atleast_1d(t.am), strict=True)
    ]
    constants = {"K": m.bigK, "Kprime": m.bigKprime, "kprime": m.kprime, "L": m.L, "eta1": m.eta1, "eta2": m.eta2}
    record = OutputRecord(command="elliptic", params=_params(args, "k", "grid"), columns=["x", "sn", "cn", "dn", "am"], results=rows, diagnostics=constants)
    return record, True


def _floquet(args: argparse.Namespace, config: SolverConfig) -> tuple[OutputRecord, bool]:
    params = LameParams(nu=args.nu, modulus=modulus_from_k(args.k))
    solver = scan_floquet_eigenvalues if args.scan else floquet_eigenvalues
    h = solver(args.mu, params, args.mmax, tol=args.tol, config=config)
    rows = [{"m": m, "h": float(value)} for m, value in enumerate(h)]
    record = OutputRecord(
        command="floquet",
        params=_params(args, "mu", "nu", "k", "mmax", "tol", "scan"),
        columns=["m", "h"],
        results=rows,
        diagnostics={"method": "scan" if args.scan else "homotopy", "homotopy_steps": config.homotopy_steps},
    )
    return record, True


def _wangerin(args: argparse.Namespace, config: SolverConfig) -> tuple[OutputRecord, bool]:
    params = LameParams(nu=args.nu, modulus=modulus_from_k(args.k))
    pairs = wangerin_eigenvalues(args.kind, params, args.mmax, tol=args.tol, config=config)
    rows = [
        {"m": pair.index, "h": pair.h, "ell": ell_index(args.kind, pair.index, args.nu).ell, "truncation": pair.truncation, "residual": pair.residual}
        for pair in pairs
    ]
    record = OutputRecord(
        command="wangerin",
        params=_params(args, "kind", "nu", "k", "mmax", "tol"),
        columns=["m", "h", "ell", "truncation", "residual"],
        results=rows,
        diagnostics={"truncation": pairs[-1].truncation, "max_residual": max(p.residual for p in pairs)},
    )
    return record, True


def _eigenfunction(args: argparse.Namespace, config: SolverConfig) -> tuple[OutputRecord, bool]:
    params = LameParams(nu=args.nu, modulus=modulus_from_k(args.k))
    f = eigenfunction(args.kind, args.form, args.m, params, args.norm, config)
    mod = params.modulus
    if args.where == "segment":
        u = parse_linear(args.grid) * mod.bigK
        values = np.atleast_1d(evaluate_on_segment(f, u))
        columns = ["u", "w"]
        rows = [{"u": float(ui), "w": float(wi)} for ui, wi in zip(u, values, strict=True)]
    elif args.where == "real":
        x = parse_linear(args.grid) * mod.bigK
        values = np.atleast_1d(evaluate_on_real_axis(f, x))
        columns = ["x", "re", "im"]
        rows = [{"x": float(xi), "re": float(wi.real), "im": float(wi.imag)} for xi, wi in zip(x, values, strict=True)]
    else:
        xm, ym = parse_pairs(args.grid)
        x, y = xm * mod.bigK, ym * mod.bigKprime
        values = np.atleast_1d(evaluate_in_strip(f, x, y))
        columns = ["x", "y", "re", "im"]
        rows = [{"x": float(xi), "y": float(yi), "re": float(wi.real), "im": float(wi.imag)} for xi, yi, wi in zip(x, y, values, strict=True)]
    record = OutputRecord(
        command="eigenfunction",
        params=_params(args, "kind", "m", "nu", "k", "grid", "where", "form", "norm"),
        columns=columns,
        results=rows,
        diagnostics={"h": f.h, "coefficients": int(f.coeffs.size), "recursion_residual": f.recursion_residual(), "terminating": f.terminating},
    )
    return record, True


def _algebraic(args: argparse.Namespace, config: SolverConfig) -> tuple[OutputRecord, bool]:
    functions = algebraic_functions(args.p, modulus_from_k(args.k), config)
    rows = [{"index": fn.index, "h": fn.h, "n": n, "a": float(a)} for fn in functions for n, a in enumerate(fn.w1.coeffs[: args.p])]
    record = OutputRecord(
        command="algebraic",
        params=_params(args, "p", "k"),
        columns=["index", "h", "n", "a"],
        results=rows,
        diagnostics={"nu": -args.p - 0.5, "kind2_coefficients": "kind-1 coefficients reversed"},
    )
    return record, True


def _polynomial(args: argparse.Namespace, config: SolverConfig) -> tuple[OutputRecord, bool]:
    mod = modulus_from_k(args.k)
    x = np.linspace(0.0, 4.0 * mod.bigK, POLYNOMIAL_RESIDUAL_POINTS)
    rows = []
    seen = {1: 0, 2: 0}
    for solution in lame_polynomials(args.p, mod, config):
        rows.append(
            {
                "kind": solution.kindj,
                "m": seen[solution.kindj],
                "classification": solution.classification,
                "h": solution.h,
                "max_residual": float(np.max(solution.residual(x))),
            }
        )
        seen[solution.kindj] += 1
    record = OutputRecord(
        command="polynomial",
        params=_params(args, "p", "k"),
        columns=["kind", "m", "classification", "h", "max_residual"],
        results=rows,
        diagnostics={"nu": -args.p - 1.0, "count": len(rows)},
    )
    return record, True


def _limit(args: argparse.Namespace, config: SolverConfig) -> tuple[OutputRecord, bool]:
    report = verify_limit(args.kind, args.m, args.nu, parse_list(args.klist), config=config)
    ratios: list[float | None] = [None, *report.ratios]
    rows = [{"k": k, "error": e, "ratio": r} for k, e, r in zip(report.ks, report.errors, ratios, strict=True)]
    record = OutputRecord(command="limit", params=_params(args, "kind", "m", "nu", "klist"), columns=["k", "error", "ratio"], results=rows)
    return record, True


def _zeros(args: argparse.Namespace, config: SolverConfig) -> tuple[OutputRecord, bool]:
    params = LameParams(nu=args.nu, modulus=modulus_from_k(args.k))
    f = eigenfunction(args.kind, "SelfAdjoint", args.m, params, config=config)
    report = count_zeros_segment(f, config)
    big_k = params.modulus.bigK
    rows = [{"index": i, "u": float(u), "u_over_K": float(u / big_k)} for i, u in enumerate(report.locations)]
    diagnostics: dict[str, object] = {"count": report.count, "grid_size": report.grid_size, "ell": ell_index(args.kind, args.m, args.nu).ell}
    try:
        winding = winding_unit_circle(f, config)
        diagnostics.update(winding=winding.winding, min_modulus_on_circle=winding.min_modulus_on_circle)
    except WindingRefusedError as exc:
        logger.warning("%s", exc)
        diagnostics.update(winding=None, winding_refused=str(exc))
    record = OutputRecord(command="zeros", params=_params(args, "kind", "m", "nu", "k"), columns=["index", "u", "u_over_K"], results=rows, diagnostics=diagnostics)
    return record, True


def _verify(args: argparse.Namespace, config: SolverConfig) -> tuple[OutputRecord, bool]:
    nus = args.nu or list(DEFAULT_NUS)
    ks = args.k or list(DEFAULT_KS)
    report = run_suite(args.suite, nus, ks, args.depth, config)
    rows = [
        {
            "label": c.label,
            "nu": c.params.get("nu"),
            "k": c.params.get("k"),
            "kind": c.params.get("kind"),
            "m": c.params.get("m"),
            "passed": c.passed,
            "skipped": c.skipped,
            "margin": c.margin,
            "detail": c.detail,
        }
        for c in report.checks
    ]
    record = OutputRecord(
        command="verify",
        params={"suite": args.suite, "nu": nus, "k": ks, "depth": args.depth},
        columns=["label", "nu", "k", "kind", "m", "passed", "skipped", "margin", "detail"],
        results=rows,
        diagnostics={"checks": len(rows), "failed": len(report.failures), "skipped": len(report.skipped), "passed": report.passed},
    )
    return record, report.passed


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per computation."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Output format (default: json).")
    common.add_argument("--out", type=Path, default=None, help="Write the output to this file instead of stdout.")
    common.add_argument("-v", "--verbose", action="store_true", help="Log DEBUG diagnostics to stderr.")

    parser = argparse.ArgumentParser(prog="lamekit", description="Eigenvalues and eigenfunctions of Lamé's equation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Command, help_text: str, columns: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text, description=f"{help_text} CSV columns: {columns}.")
        p.set_defaults(handler=handler)
        return p

    p = add("elliptic", _elliptic, "Jacobi functions and constants for modulus k.", "x, sn, cn, dn, am")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--grid", default="0:2:9", help="start:end:count in units of K (default: 0:2:9).")

    p = add("floquet", _floquet, "Floquet eigenvalues h_0..h_mmax for exponent mu.", "m, h")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--mmax", type=int, required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--scan", action="store_true", help="Use the brute-force h-scan instead of the homotopy.")

    p = add("wangerin", _wangerin, "Lamé-Wangerin eigenvalues H_0..H_mmax.", "m, h, ell, truncation, residual")
    p.add_argument("--kind", type=int, choices=[1, 2], required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--mmax", type=int, required=True)
    p.add_argument("--tol", type=float, default=None)

    p = add("eigenfunction", _eigenfunction, "Tabulate one Lamé-Wangerin eigenfunction.", "u, w (segment); x, re, im (real); x, y, re, im (strip)")
    p.add_argument("--kind", type=int, choices=[1, 2], required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--grid", required=True, help="start:end:count in units of K, or x,y;x,y in units of (K, K') for the strip.")
    p.add_argument("--where", choices=["segment", "real", "strip"], default="segment")
    p.add_argument("--form", choices=["Plain", "SelfAdjoint"], default="SelfAdjoint")
    p.add_argument("--norm", choices=["UnitCoeff", "Endpoint"], default="Endpoint")

    p = add("algebraic", _algebraic, "Algebraic Lamé functions at nu = -p - 1/2.", "index, h, n, a")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=float, required=True)

    p = add("polynomial", _polynomial, "Lamé polynomials at nu = -p - 1.", "kind, m, classification, h, max_residual")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=float, required=True)

    p = add("limit", _limit, "Distance to the k -> 0 limit along decreasing k.", "k, error, ratio")
    p.add_argument("--kind", type=int, choices=[1, 2], required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--klist", default="0.1,0.05", help="Comma-separated decreasing moduli in (0, 0.2].")

    p = add("zeros", _zeros, "Zeros on the segment and winding on the unit circle.", "index, u, u_over_K")
    p.add_argument("--kind", type=int, choices=[1, 2], required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--k", type=float, required=True)

    p = add("verify", _verify, "Run a verification suite.", "label, nu, k, kind, m, passed, skipped, margin, detail")
    p.add_argument("--suite", choices=SUITE_NAMES, required=True)
    p.add_argument("--nu", type=float, action="append", help="Repeatable; defaults to the standard grid.")
    p.add_argument("--k", type=float, action="append", help="Repeatable; defaults to the standard grid.")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--grid", choices=["default"], default="default", help="Named parameter grid used for unset --nu/--k.")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv, run the subcommand and write its record. Returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code is None:
            return EXIT_OK
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    config = DEFAULT_CONFIG
    tol = getattr(args, "tol", None)
    if tol is not None:
        if not (math.isfinite(tol) and tol > 0.0):
            logger.error("--tol must be positive, got %r", tol)
            return EXIT_USAGE
        config = replace(config, eigen_tol=tol)
    try:
        record, ok = args.handler(args, config)
    except DomainError as exc:
        logger.error("%s", exc)  # noqa: TRY400
        return EXIT_USAGE
    except LameError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)  # noqa: TRY400
        return EXIT_FAILED
    text = record.render(args.format)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
    return EXIT_OK if ok else EXIT_FAILED


def main() -> None:
    """Console entry point."""
    sys.exit(run())
