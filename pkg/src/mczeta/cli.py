"""Command line interface for evaluation and identity verification.

Three subcommands:

  eval    evaluate one registered function at one argument tuple
  verify  check an identity at one or more points, full report output
  sweep   verify a points file in a worker pool, CSV stream output

Complex literals follow the grammar ``[-]a[.b][e+-n][+|-c[.d][e+-n]i]``
with no whitespace, for example ``-0.5``, ``2.7``, ``0.25+0.5i``,
``1.2e-1-3i``.  Points are comma-separated literals.  Points files are
UTF-8, one point per line, blank lines ignored, ``#`` starts a comment.

Exit codes: 0 all pass, 1 a residual exceeded its tolerance, 2 usage or
parse error, 3 domain error (for verify and sweep a non-evaluable point
is reported as SKIP and only forces exit 3 under --strict, or when no
point could be evaluated at all).

The MCZETA_PRECISION environment variable selects the scalar backend;
the only supported value is ``binary64`` (the default).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from mczeta.arith import divisor_sigma, divisor_sigma_ez
from mczeta.funceq import (
    FEReport,
    fe_carrier_from_definition,
    osc_divisor_sum,
    verify_carrier_two_route,
    verify_functional_equation,
    verify_odd_weight_hyperplane,
    verify_reflection_r2,
)
from mczeta.mchf import (
    PsiMultiArgs,
    lauricella_fd,
    psi_multi_quadrature,
    psi_multi_reduced,
)
from mczeta.mzv import ArgPoint, zeta_ez2_continued, zeta_ez_direct, zeta_riemann
from mczeta.numkernel import (
    DEFAULT_BUDGET,
    DomainError,
    EvalBudget,
    Evaluation,
    psi_u,
)

SCHEMA = "mczeta-report/1"
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

THEOREMS = ("main", "carrier", "reflection", "hyperplane")
FUNCTIONS = ("zeta_ez", "zeta", "psi", "psi_a", "fd", "sigma", "sigma_ez",
             "f_pm", "g_r")

CSV_COLUMNS = ("point", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
               "abs_residual", "rel_residual", "terms", "tail_est",
               "wall_ms", "status", "reason")


class CliParseError(ValueError):
    """Malformed user input: literals, point lists, points files."""


@dataclass
class RunConfig:
    """Parsed invocation: one subcommand plus its normalized inputs."""

    command: str
    function: str = ""
    args: tuple[complex, ...] = ()
    theorem: str = "main"
    r: int = 0
    tol: float = 1e-6
    points: tuple[tuple[complex, ...], ...] = ()
    output_format: str = "text"
    points_file: str = ""
    strict: bool = False
    jobs: int = 0
    budget: EvalBudget = field(default_factory=lambda: DEFAULT_BUDGET)


_LITERAL_RE = re.compile(
    r"^(?P<real>[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
    r"(?:(?P<imag>[+-]\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)i)?$")


def parse_complex_literal(text: str) -> complex:
    """Parse ``a`` or ``a+bi`` per the documented grammar, no whitespace."""
    m = _LITERAL_RE.match(text)
    if m is None:
        raise CliParseError(
            f"malformed complex literal {text!r}; expected "
            "[-]a[.b][e+-n][+|-c[.d][e+-n]i] with no whitespace")
    imag = m.group("imag")
    return complex(float(m.group("real")), float(imag) if imag else 0.0)


def parse_point(text: str) -> tuple[complex, ...]:
    """Parse a comma-separated list of complex literals."""
    parts = text.split(",")
    if not parts or any(not p for p in parts):
        raise CliParseError(f"malformed point {text!r}: empty component")
    return tuple(parse_complex_literal(p.strip()) for p in parts)


def format_complex(z: complex) -> str:
    """Render a complex value back into the literal grammar."""
    re_s = repr(float(z.real))
    if z.imag == 0.0:
        return re_s
    im_s = repr(float(z.imag))
    if not im_s.startswith("-"):
        im_s = "+" + im_s
    return f"{re_s}{im_s}i"


def format_point(values: tuple[complex, ...]) -> str:
    return ",".join(format_complex(v) for v in values)


def read_points_file(path: str) -> list[tuple[complex, ...]]:
    """One point per line, # comments, blank lines skipped.

    Raises CliParseError naming the offending line number.
    """
    points: list[tuple[complex, ...]] = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise CliParseError(f"cannot read points file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            points.append(parse_point(body))
        except CliParseError as exc:
            raise CliParseError(
                f"{path}: line {lineno}: {exc}") from exc
    return points


def _require_small_int(z: complex, desc: str) -> int:
    if z.imag != 0.0 or z.real != int(z.real):
        raise DomainError(f"{desc} must be a real integer, got "
                          f"{format_complex(z)}")
    return int(z.real)


# ---------------------------------------------------------------------------
# eval: function registry
# ---------------------------------------------------------------------------


def _eval_zeta(args: tuple[complex, ...], budget: EvalBudget) -> Evaluation:
    if len(args) != 1:
        raise DomainError("zeta takes exactly 1 argument")
    value = zeta_riemann(args[0])
    return Evaluation(value, 1e-13 * (1.0 + abs(value)), 1, False)


def _eval_zeta_ez(args: tuple[complex, ...], budget: EvalBudget) -> Evaluation:
    if not args:
        raise DomainError("zeta_ez takes at least 1 argument")
    pt = ArgPoint(args)
    if pt.depth == 2 and not pt.in_convergence:
        return zeta_ez2_continued(args[0], args[1])
    return zeta_ez_direct(args, budget)


def _eval_psi(args: tuple[complex, ...], budget: EvalBudget) -> Evaluation:
    if len(args) != 3:
        raise DomainError("psi takes exactly 3 arguments: b, c, x")
    return psi_u(args[0], args[1], args[2], budget)


def _eval_psi_a(args: tuple[complex, ...], budget: EvalBudget) -> Evaluation:
    # one exponent more than kernel arguments: 2a+1 literals for order a
    if len(args) < 3 or len(args) % 2 == 0:
        raise DomainError(
            "psi_a takes 2a+1 arguments for order a >= 1: a+1 exponents "
            "followed by a kernel arguments")
    order = (len(args) - 1) // 2
    bundle = PsiMultiArgs(args[:order + 1], args[order + 1:])
    try:
        return psi_multi_reduced(bundle, budget)
    except DomainError:
        # the shell series needs small deviations; the ray integral
        # covers the rest of the shared domain
        return psi_multi_quadrature(bundle, budget)


def _eval_fd(args: tuple[complex, ...], budget: EvalBudget) -> Evaluation:
    if len(args) < 4 or len(args) % 2 != 0:
        raise DomainError(
            "fd takes 2n+2 arguments for n >= 1: n upper parameters, "
            "b, c, then n arguments")
    n = (len(args) - 2) // 2
    return lauricella_fd(args[:n], args[n], args[n + 1], args[n + 2:],
                         budget)


def _eval_sigma(args: tuple[complex, ...], budget: EvalBudget) -> Evaluation:
    if len(args) != 2:
        raise DomainError("sigma takes exactly 2 arguments: order, n")
    n = _require_small_int(args[1], "sigma: n")
    value = divisor_sigma(args[0], n)
    return Evaluation(value, 5e-16 * abs(value), 1, False)


def _eval_sigma_ez(args: tuple[complex, ...],
                   budget: EvalBudget) -> Evaluation:
    if len(args) < 2 or len(args) % 2 != 0:
        raise DomainError(
            "sigma_ez takes 2r arguments: r orders then r indices")
    r = len(args) // 2
    ks = tuple(_require_small_int(v, "sigma_ez: index")
               for v in args[r:])
    value = divisor_sigma_ez(args[:r], ks)
    return Evaluation(value, 5e-16 * abs(value), 1, False)


def _eval_f_pm(args: tuple[complex, ...], budget: EvalBudget) -> Evaluation:
    if len(args) < 3:
        raise DomainError(
            "f_pm takes a sign (+1 or -1) followed by the point components")
    sign = _require_small_int(args[0], "f_pm: sign")
    return osc_divisor_sum(sign, args[1:], budget)


def _eval_g_r(args: tuple[complex, ...], budget: EvalBudget) -> Evaluation:
    if len(args) < 2:
        raise DomainError("g_r takes the point components, depth 2 or 3")
    return fe_carrier_from_definition(args, budget)


_REGISTRY = {
    "zeta": _eval_zeta,
    "zeta_ez": _eval_zeta_ez,
    "psi": _eval_psi,
    "psi_a": _eval_psi_a,
    "fd": _eval_fd,
    "sigma": _eval_sigma,
    "sigma_ez": _eval_sigma_ez,
    "f_pm": _eval_f_pm,
    "g_r": _eval_g_r,
}


# ---------------------------------------------------------------------------
# verify / sweep plumbing
# ---------------------------------------------------------------------------


def _budget_from_flags(ns: argparse.Namespace) -> EvalBudget:
    return EvalBudget(
        max_terms=ns.max_terms if ns.max_terms else DEFAULT_BUDGET.max_terms,
        tol=ns.budget_tol if ns.budget_tol else DEFAULT_BUDGET.tol,
        quad_nodes=(ns.quad_nodes if ns.quad_nodes
                    else DEFAULT_BUDGET.quad_nodes),
    )


def _run_theorem(theorem: str, values: tuple[complex, ...], tol: float,
                 budget: EvalBudget) -> FEReport:
    if theorem == "main":
        return verify_functional_equation(values, tol, budget)
    if theorem == "carrier":
        return verify_carrier_two_route(values, tol, budget)
    if theorem == "reflection":
        if len(values) != 2:
            raise DomainError(
                "reflection check takes exactly 2 components: u, v")
        return verify_reflection_r2(values[0], values[1], tol, budget)
    if theorem == "hyperplane":
        if len(values) != 2:
            raise DomainError(
                "hyperplane check takes exactly 2 components: k, s1")
        k = _require_small_int(values[0], "hyperplane: k")
        return verify_odd_weight_hyperplane(k, values[1], tol, budget)
    raise DomainError(f"unknown theorem {theorem!r}")


def _report_row(index: int, theorem: str, values: tuple[complex, ...],
                tol: float,
                budget_parts: tuple[int, float, int]) -> dict:
    """Evaluate one verification and flatten it into a plain dict.

    Runs in worker processes for sweep, so it takes and returns only
    picklable plain data.
    """
    budget = EvalBudget(max_terms=budget_parts[0], tol=budget_parts[1],
                        quad_nodes=budget_parts[2])
    started = time.perf_counter()
    try:
        rep = _run_theorem(theorem, values, tol, budget)
    except DomainError as exc:
        wall = 1e3 * (time.perf_counter() - started)
        return {
            "index": index,
            "status": "SKIP",
            "point": [format_complex(v) for v in values],
            "tol": tol,
            "wall_ms": wall,
            "reason": str(exc),
        }
    wall = 1e3 * (time.perf_counter() - started)
    return {
        "index": index,
        "status": "PASS" if rep.passed else "FAIL",
        "point": [format_complex(v) for v in rep.point],
        "lhs": {"re": rep.lhs.real, "im": rep.lhs.imag},
        "rhs": {"re": rep.rhs.real, "im": rep.rhs.imag},
        "abs_residual": rep.abs_residual,
        "rel_residual": rep.rel_residual,
        "tol": rep.tol,
        "terms": len(rep.term_breakdown),
        "tail_est": sum(rep.tail_estimates.values()),
        "term_breakdown": {
            key: {"re": val.real, "im": val.imag}
            for key, val in rep.term_breakdown.items()
        },
        "tail_estimates": dict(rep.tail_estimates),
        "budgets": dict(rep.budgets),
        "wall_ms": wall,
    }


def _emit_json(rows: list[dict], out: io.TextIOBase) -> None:
    payload = {"schema": SCHEMA, "reports": rows}
    out.write(json.dumps(payload, sort_keys=True, indent=2))
    out.write("\n")


def _emit_csv(rows: list[dict], out: io.TextIOBase) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        if row["status"] == "SKIP":
            writer.writerow([",".join(row["point"]), "", "", "", "", "", "",
                             "", "", f"{row['wall_ms']:.3f}", "SKIP",
                             row["reason"]])
            continue
        writer.writerow([
            ",".join(row["point"]),
            repr(row["lhs"]["re"]), repr(row["lhs"]["im"]),
            repr(row["rhs"]["re"]), repr(row["rhs"]["im"]),
            repr(row["abs_residual"]), repr(row["rel_residual"]),
            row["terms"], repr(row["tail_est"]),
            f"{row['wall_ms']:.3f}", row["status"], "",
        ])


def _emit_text(rows: list[dict], out: io.TextIOBase) -> None:
    for row in rows:
        point = ",".join(row["point"])
        if row["status"] == "SKIP":
            out.write(f"SKIP  point={point}  reason={row['reason']}\n")
            continue
        out.write(
            f"{row['status']}  point={point}  "
            f"rel_residual={row['rel_residual']:.3e}  "
            f"tol={row['tol']:g}\n")


_EMITTERS = {"json": _emit_json, "csv": _emit_csv, "text": _emit_text}


def _verdict_exit(rows: list[dict], strict: bool) -> int:
    skips = sum(1 for r in rows if r["status"] == "SKIP")
    fails = sum(1 for r in rows if r["status"] == "FAIL")
    if skips and (strict or skips == len(rows)):
        return EXIT_DOMAIN
    if fails:
        return EXIT_FAIL
    return EXIT_PASS


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------


def _cmd_eval(cfg: RunConfig, out: io.TextIOBase,
              err: io.TextIOBase) -> int:
    fn = _REGISTRY[cfg.function]
    try:
        ev = fn(cfg.args, cfg.budget)
    except ValueError as exc:
        # DomainError and PoleError both derive from ValueError, as do
        # the argument-bundle shape errors
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    if cfg.output_format == "json":
        payload = {
            "schema": SCHEMA,
            "command": "eval",
            "function": cfg.function,
            "args": [format_complex(v) for v in cfg.args],
            "value": {"re": ev.value.real, "im": ev.value.imag},
            "abs_err_est": ev.abs_err_est,
            "terms_used": ev.terms_used,
            "truncated": ev.truncated,
        }
        out.write(json.dumps(payload, sort_keys=True, indent=2))
        out.write("\n")
    elif cfg.output_format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["function", "value_re", "value_im", "abs_err_est",
                         "terms_used"])
        writer.writerow([cfg.function, repr(ev.value.real),
                         repr(ev.value.imag), repr(ev.abs_err_est),
                         ev.terms_used])
    else:
        out.write(f"value = {format_complex(ev.value)}\n")
        out.write(f"abs_err_est = {ev.abs_err_est:.3e}\n")
        out.write(f"terms_used = {ev.terms_used}\n")
    return EXIT_PASS


def _cmd_verify(cfg: RunConfig, out: io.TextIOBase,
                err: io.TextIOBase) -> int:
    parts = (cfg.budget.max_terms, cfg.budget.tol, cfg.budget.quad_nodes)
    rows = [_report_row(i, cfg.theorem, vals, cfg.tol, parts)
            for i, vals in enumerate(cfg.points)]
    _EMITTERS[cfg.output_format](rows, out)
    return _verdict_exit(rows, cfg.strict)


def _cmd_sweep(cfg: RunConfig, out: io.TextIOBase,
               err: io.TextIOBase) -> int:
    parts = (cfg.budget.max_terms, cfg.budget.tol, cfg.budget.quad_nodes)
    tasks = [(i, cfg.theorem, vals, cfg.tol, parts)
             for i, vals in enumerate(cfg.points)]
    if not tasks:
        rows: list[dict] = []
    elif len(tasks) == 1 or cfg.jobs == 1:
        rows = [_report_row(*t) for t in tasks]
    else:
        workers = cfg.jobs or min(len(tasks), os.cpu_count() or 1)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_report_row_star, tasks))
    if cfg.output_format == "json":
        _emit_json(rows, out)
    else:
        _emit_csv(rows, out)
    return _verdict_exit(rows, cfg.strict)


def _report_row_star(task: tuple) -> dict:
    return _report_row(*task)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mczeta",
        description="Evaluate nested zeta and confluent kernel functions "
                    "and verify their identities numerically.",
        epilog="Complex literal grammar: [-]a[.b][e+-n][+|-c[.d][e+-n]i], "
               "no whitespace (examples: -0.5, 2.7, 0.25+0.5i). "
               "MCZETA_PRECISION selects the scalar backend; only "
               "binary64 is supported.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json", "csv"),
                       default=None, help="output format")
        p.add_argument("--max-terms", type=int, default=0,
                       help="series term budget override")
        p.add_argument("--quad-nodes", type=int, default=0,
                       help="quadrature node budget override")
        p.add_argument("--budget-tol", type=float, default=0.0,
                       help="internal evaluation tolerance override")

    p_eval = sub.add_parser(
        "eval", help="evaluate one function at one argument tuple")
    p_eval.add_argument("--fn", required=True, choices=FUNCTIONS,
                        help="registered function name")
    p_eval.add_argument("--args", required=True,
                        help="comma-separated complex literals")
    add_shared(p_eval)

    p_verify = sub.add_parser(
        "verify", help="check an identity at one or more points")
    p_verify.add_argument("--theorem", choices=THEOREMS, default="main",
                          help="which identity to check")
    p_verify.add_argument("--r", type=int, default=0,
                          help="expected point depth (checked if given)")
    p_verify.add_argument("--point", action="append", default=[],
                          help="comma-separated components; repeatable")
    p_verify.add_argument("--points-file", default="",
                          help="UTF-8 file, one point per line, # comments")
    p_verify.add_argument("--k", type=int, default=0,
                          help="hyperplane index (with --theorem hyperplane)")
    p_verify.add_argument("--s1", default="",
                          help="hyperplane free component (complex literal)")
    p_verify.add_argument("--tol", type=float, default=1e-6,
                          help="pass threshold on rel_residual")
    p_verify.add_argument("--strict", action="store_true",
                          help="treat SKIP points as run failures (exit 3)")
    add_shared(p_verify)

    p_sweep = sub.add_parser(
        "sweep", help="verify every point in a file, CSV stream output")
    p_sweep.add_argument("--theorem", choices=THEOREMS, default="main",
                         help="which identity to check")
    p_sweep.add_argument("--points-file", required=True,
                         help="UTF-8 file, one point per line, # comments")
    p_sweep.add_argument("--tol", type=float, default=1e-6,
                         help="pass threshold on rel_residual")
    p_sweep.add_argument("--strict", action="store_true",
                         help="treat SKIP points as run failures (exit 3)")
    p_sweep.add_argument("--jobs", type=int, default=0,
                         help="worker processes (default: cpu count)")
    add_shared(p_sweep)
    return parser


def _config_from_namespace(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    cfg.budget = _budget_from_flags(ns)
    default_format = "csv" if ns.command == "sweep" else "text"
    cfg.output_format = ns.format or default_format

    if ns.command == "eval":
        cfg.function = ns.fn
        cfg.args = parse_point(ns.args)
        return cfg

    cfg.theorem = ns.theorem
    cfg.tol = float(ns.tol)
    if cfg.tol <= 0.0:
        raise CliParseError("--tol must be positive")
    cfg.strict = ns.strict

    if ns.command == "sweep":
        cfg.points_file = ns.points_file
        cfg.points = tuple(read_points_file(ns.points_file))
        cfg.jobs = max(0, ns.jobs)
        return cfg

    points: list[tuple[complex, ...]] = []
    if cfg.theorem == "hyperplane" and (ns.k or ns.s1):
        if not (ns.k and ns.s1):
            raise CliParseError(
                "hyperplane points need both --k and --s1")
        points.append((complex(ns.k), parse_complex_literal(ns.s1)))
    for text in ns.point:
        points.append(parse_point(text))
    if ns.points_file:
        cfg.points_file = ns.points_file
        points.extend(read_points_file(ns.points_file))
    if not points:
        raise CliParseError(
            "verify needs --point, --points-file, or (--k, --s1)")
    if ns.r:
        cfg.r = ns.r
        if ns.r not in (1, 2, 3):
            raise CliParseError("--r must be 1, 2, or 3")
        bad = [p for p in points
               if cfg.theorem in ("main", "carrier") and len(p) != ns.r]
        if bad:
            raise CliParseError(
                f"--r {ns.r} does not match point "
                f"{format_point(bad[0])}")
    cfg.points = tuple(points)
    return cfg


_VALUE_FLAGS = ("--point", "--args", "--s1")


def _merge_negative_values(argv: list[str]) -> list[str]:
    """Join value flags with leading-minus values into --flag=value form.

    argparse would otherwise read "-0.5,2.7" as an option string.
    """
    merged: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok in _VALUE_FLAGS and i + 1 < len(argv)
                and argv[i + 1].startswith("-")):
            merged.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            merged.append(tok)
            i += 1
    return merged


def main(argv: list[str] | None = None) -> int:
    out = sys.stdout
    err = sys.stderr
    backend = os.environ.get("MCZETA_PRECISION", "binary64")
    if backend not in ("", "binary64"):
        err.write(f"error: unsupported MCZETA_PRECISION {backend!r}; "
                  "supported backends: binary64\n")
        return EXIT_USAGE
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = _build_parser()
    try:
        ns = parser.parse_args(_merge_negative_values(argv))
    except SystemExit as exc:
        # argparse already printed the message; normalize its code
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        cfg = _config_from_namespace(ns)
    except CliParseError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE

    if cfg.command == "eval":
        return _cmd_eval(cfg, out, err)
    if cfg.command == "verify":
        return _cmd_verify(cfg, out, err)
    return _cmd_sweep(cfg, out, err)


if __name__ == "__main__":
    sys.exit(main())
