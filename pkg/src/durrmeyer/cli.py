"""Command-line front end.

Exit codes: 0 pass, 1 failed check or internal error, 2 usage error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import bd_ops
from .errors import ConvergenceFailure
from .oracle import compose_exact
from .poly import BivariatePoly, Poly, legendre_unnormalized
from .smd_ops import uniform_grid, verify_harmonic_mean_remark, verify_theorem8

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3

SUITES = ("pair", "triple", "eigen", "matrix", "iterates", "commutativity")

REPRESENTATIONS: dict[str, tuple[Callable, tuple[int, ...] | None]] = {
    "direct": (lambda o: bd_ops.kernel_direct(o[0]), (1,)),
    "pair": (lambda o: bd_ops.kernel_pair_closed(*o), (2,)),
    "eigen": (lambda o: bd_ops.kernel_eigen_expansion(*o), (2,)),
    "triple": (lambda o: bd_ops.kernel_triple_closed(*o), (3,)),
    "general": (bd_ops.kernel_general_closed, None),
    "product": (bd_ops.kernel_r_fold_product_form, None),
    "oracle": (lambda o: bd_ops.BDKernel(tuple(o), compose_exact(o), "oracle"), None),
}


def fraction_str(q: Fraction) -> str:
    """Canonical ``"num/den"`` form, also for integers."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    mode: str
    error: object
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "actual": self.actual,
            "mode": self.mode,
            "error": self.error,
            "passed": self.passed,
        }


@dataclass
class RunReport:
    command: str
    inputs: dict
    checks: list[Check] = field(default_factory=list)
    seconds: float | None = None
    status_override: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.status_override:
            return self.status_override
        return "pass" if all(c.passed for c in self.checks) else "fail"

    def exact(self, name: str, expected, actual) -> None:
        ok = expected == actual
        if isinstance(expected, BivariatePoly) and isinstance(actual, BivariatePoly):
            diff = expected - actual
            err = max((abs(c) for row in diff.coeffs for c in row), default=Fraction(0))
            error = fraction_str(err)
        else:
            error = "0" if ok else "nonzero"
        self.checks.append(Check(name, str(expected), str(actual), "exact", error, ok))

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "status": self.status,
            "checks": [c.to_dict() for c in self.checks],
            "seconds": self.seconds,
        }
        out.update(self.extra)
        return out


class UsageError(Exception):
    pass


def _parse_int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")
    if not vals or any(v < 0 for v in vals):
        raise UsageError(f"orders must be non-negative integers, got {text!r}")
    return vals


def _parse_real_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}")
    if not vals or any(not v > 0 for v in vals):
        raise UsageError(f"orders must be positive reals, got {text!r}")
    return vals


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _kernel_payload(kernel: bd_ops.BDKernel, representation: str) -> dict:
    return {
        "orders": list(kernel.orders),
        "representation": representation,
        "provenance": kernel.provenance,
        "degrees": list(kernel.kernel.degrees),
        "coefficients": [[fraction_str(c) for c in row] for row in kernel.kernel.coeffs],
    }


def cmd_bd_kernel(args) -> int:
    orders = _parse_int_list(args.orders)
    build, arity = REPRESENTATIONS[args.repr]
    if arity is not None and len(orders) not in arity:
        raise UsageError(f"representation {args.repr!r} takes {arity[0]} order(s), got {len(orders)}")
    kernel = build(orders)
    if args.format == "json":
        text = _dump_json(_kernel_payload(kernel, args.repr))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x_power", "y_power", "coefficient"])
        for i, row in enumerate(kernel.kernel.coeffs):
            for j, c in enumerate(row):
                w.writerow([i, j, fraction_str(c)])
        text = buf.getvalue()
    _write(text, args.output)
    return EXIT_PASS


def _suite_pair(report: RunReport, nmax: int) -> None:
    for m, n in itertools.product(range(nmax + 1), repeat=2):
        oracle = compose_exact([m, n])
        for label, k in (
            ("pair_closed", bd_ops.kernel_pair_closed(m, n)),
            ("eigen_expansion", bd_ops.kernel_eigen_expansion(m, n)),
            ("general_closed", bd_ops.kernel_general_closed([m, n])),
            ("r_fold_product", bd_ops.kernel_r_fold_product_form([m, n])),
        ):
            report.exact(f"pair[{m},{n}].{label}", oracle, k.kernel)


def _suite_triple(report: RunReport, nmax: int) -> None:
    for t in itertools.product(range(nmax + 1), repeat=3):
        oracle = compose_exact(list(t))
        closed = bd_ops.kernel_triple_closed(*t).kernel
        report.exact(f"triple[{','.join(map(str, t))}].triple_closed", oracle, closed)
        report.exact(f"triple[{','.join(map(str, t))}].general_closed", oracle, bd_ops.kernel_general_closed(t).kernel)
        perms = {bd_ops.kernel_triple_closed(*p).kernel for p in itertools.permutations(t)}
        report.exact(f"triple[{','.join(map(str, t))}].permutations", 1, len(perms))


def _suite_eigen(report: RunReport, nmax: int) -> None:
    for n in range(nmax + 1):
        for k in range(n + 1):
            lk = legendre_unnormalized(k).poly
            report.exact(f"eigen[{n},{k}]", lk * bd_ops.eigenvalue(n, k), bd_ops.apply(n, lk))


def _suite_matrix(report: RunReport, nmax: int) -> None:
    from .exact_core import RationalMatrix, determinant, mat_mul

    for n in range(nmax + 1):
        a = bd_ops.matrix_A(n)
        report.exact(f"matrix[{n}].inverse", RationalMatrix.identity(n + 1),
                     mat_mul(a, bd_ops.matrix_A_inverse_closed(n)))
        report.exact(f"matrix[{n}].determinant", bd_ops.matrix_A_determinant_closed(n), determinant(a))


def _suite_iterates(report: RunReport, nmax: int) -> None:
    for n in range(nmax + 1):
        for r in range(1, 5):
            for p in range(4):
                res = bd_ops.iterate_paths(n, r, Poly.monomial(p))
                report.exact(f"iterate[n={n},r={r},f=x^{p}]", res.iterated, res.decomposed)


def _suite_commutativity(report: RunReport, nmax: int) -> None:
    for m, n in itertools.product(range(nmax + 1), repeat=2):
        report.exact(f"commute[{m},{n}]", compose_exact([m, n]), compose_exact([n, m]))


def cmd_bd_verify(args) -> int:
    if args.max < 0:
        raise UsageError("--max must be non-negative")
    suites = args.suite or ["all"]
    if "all" in suites:
        suites = list(SUITES)
    report = RunReport("bd-verify", {"max": args.max, "suites": suites})
    start = time.perf_counter()
    runners = {
        "pair": _suite_pair,
        "triple": _suite_triple,
        "eigen": _suite_eigen,
        "matrix": _suite_matrix,
        "iterates": _suite_iterates,
        "commutativity": _suite_commutativity,
    }
    for s in suites:
        runners[s](report, args.max)
    report.seconds = None if args.no_timing else round(time.perf_counter() - start, 6)
    _write(_dump_json(report.to_dict()), args.output)
    return EXIT_PASS if report.status == "pass" else EXIT_FAIL


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        nx, ny = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"grid must look like 6x6, got {text!r}")
    if nx < 1 or ny < 1:
        raise UsageError("grid dimensions must be positive")
    return nx, ny


def cmd_smd_verify(args) -> int:
    orders = _parse_real_list(args.orders)
    nx, ny = _parse_grid(args.grid)
    if not args.tol > 0 or not args.xmax >= 0:
        raise UsageError("--tol must be positive and --xmax non-negative")
    grid = uniform_grid(nx, ny, args.xmax)
    report = RunReport(
        "smd-verify",
        {"orders": orders, "grid": [nx, ny], "xmax": args.xmax, "tol": args.tol},
    )
    start = time.perf_counter()
    try:
        if len(orders) == 2:
            grid_report = verify_theorem8(orders[0], orders[1], grid, args.tol)
        else:
            grid_report = verify_harmonic_mean_remark(orders, grid, args.tol)
    except ConvergenceFailure as exc:
        report.status_override = "error"
        report.extra["error"] = str(exc)
        _write(_dump_json(report.to_dict()), args.output)
        return EXIT_NONCONVERGED
    for x, y, lhs, rhs, err in grid_report.rows():
        report.checks.append(Check(f"K({x!r},{y!r})", rhs, lhs, "tol", err, err <= args.tol))
    report.extra["grid"] = grid_report.to_dict()
    report.seconds = None if args.no_timing else round(time.perf_counter() - start, 6)
    _write(_dump_json(report.to_dict()), args.output)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "y", "lhs", "rhs", "abs_error"])
            for row in grid_report.rows():
                w.writerow([f"{v:.17g}" for v in row])
    return EXIT_PASS if grid_report.passed else EXIT_FAIL


def cmd_coefficients(args) -> int:
    if args.iterate is not None:
        n, r = args.iterate
        if n < 0 or r < 1:
            raise UsageError("--iterate needs n >= 0 and r >= 1")
        orders = [n] * r
    elif args.orders is not None:
        orders = _parse_int_list(args.orders)
    else:
        raise UsageError("give --orders or --iterate N R")
    coeffs = bd_ops.composition_coefficients(orders)
    if args.format == "json":
        text = _dump_json({
            "orders": list(coeffs.orders),
            "n": coeffs.n,
            "c": [fraction_str(c) for c in coeffs.c],
        })
    else:
        text = ", ".join(str(c) for c in coeffs.c) + "\n"
    _write(text, args.output)
    return EXIT_PASS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=None, help="reserved; ignored")

    parser = _Parser(prog="durrmeyer", description="Kernels of compositions of Durrmeyer-type operators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bd-kernel", parents=[common], help="exact Bernstein-Durrmeyer composition kernel")
    p.add_argument("--orders", required=True, help="comma-separated orders, outermost first")
    p.add_argument("--repr", default="general", choices=sorted(REPRESENTATIONS))
    p.add_argument("--format", default="json", choices=("json", "csv"))
    p.set_defaults(func=cmd_bd_kernel)

    p = sub.add_parser("bd-verify", parents=[common], help="run the exact Bernstein-Durrmeyer suites")
    p.add_argument("--max", type=int, default=6)
    p.add_argument("--suite", action="append", choices=SUITES + ("all",))
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock time for byte-stable output")
    p.set_defaults(func=cmd_bd_verify)

    p = sub.add_parser("smd-verify", parents=[common], help="check the Szasz-Mirakjan-Durrmeyer composition law")
    p.add_argument("--orders", required=True, help="comma-separated positive indices")
    p.add_argument("--grid", default="4x4")
    p.add_argument("--xmax", type=float, default=1.5)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--csv", default=None, help="also write (x, y, lhs, rhs, abs_error) rows here")
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_smd_verify)

    p = sub.add_parser("coeffs", parents=[common], help="coefficients c_k of sum_k c_k M_k")
    p.add_argument("--orders", default=None)
    p.add_argument("--iterate", nargs=2, type=int, metavar=("N", "R"))
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.set_defaults(func=cmd_coefficients)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"durrmeyer: error: {exc}\n")
        return EXIT_USAGE
    except ConvergenceFailure as exc:
        sys.stderr.write(f"durrmeyer: not converged: {exc}\n")
        return EXIT_NONCONVERGED
    except Exception as exc:  # internal failure
        sys.stderr.write(f"durrmeyer: internal error: {exc!r}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
