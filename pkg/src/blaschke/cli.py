"""Command-line interface.

Four subcommands:

* ``analyze``  — full pipeline on one product; emits the JSON analysis
  report.  Exit code mirrors the report status (0 PASS, 2 FAILED,
  3 LOW_CONFIDENCE).
* ``classify`` — enumerate the admissible block partitions of Z_n grouped
  into structural scenarios; emits a deterministic JSON catalog.
* ``verify``   — run the numerical identity suite (power identity,
  boundary modulus, composition law, commutativity, eigenrelations), the
  structural invariants, a monodromy re-tracking consistency check, and
  the factorization round trip; emits a JSON check report.  Exit 0 when
  every check passes, 2 otherwise.
* ``plot``     — render the disk picture (zeros, critical points, branch
  locus, cut polyline, working circle, monodromy loops) as an SVG file.

Every command takes the product either as ``--expr TEXT`` (see
``expressions`` for the grammar) or as ``--zeros FILE`` where the file
holds a JSON array of ``[re, im]`` pairs, or an object
``{"zeros": [[re, im], ...], "factor": [re, im]}``.

Exit codes: 0 pass, 1 usage/input error, 2 invariant failure (including
pipeline errors that prevent certification), 3 low confidence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .analysis import AnalysisResult, analyze
from .classify import classify_report
from .errors import BlaschkeError, ExpressionSyntaxError
from .expressions import expr_text, parse_expr, to_product
from .monodromy import branch_locus, make_loops, monodromy_generator
from .nthroot import build_branch, choose_frame
from .products import FiniteBlaschkeProduct, critical_points
from .report import analysis_report, dumps, verification_view
from .svgplot import render_disk

__all__ = ["main"]

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_FAILED = 2
EXIT_LOW_CONFIDENCE = 3


class _UsageError(Exception):
    """Bad command line or bad input file; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    """argparse variant that raises instead of calling sys.exit(2)."""

    def error(self, message):  # noqa: D102 - argparse hook
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="blaschke",
        description=(
            "Monodromy partitions, reducing-subspace counts, and "
            "factorization of finite Blaschke products."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_product_flags(p: _Parser) -> None:
        p.add_argument(
            "--expr",
            help="product expression, e.g. 'mobius(0.5)^2 @ z^4'",
        )
        p.add_argument(
            "--zeros",
            metavar="FILE",
            help="JSON file with zeros as [re, im] pairs",
        )

    def add_common_flags(p: _Parser) -> None:
        p.add_argument(
            "--seed",
            type=int,
            default=0,
            help="seed for randomized inputs (reserved; the pipeline "
            "itself is deterministic)",
        )
        p.add_argument(
            "--json",
            metavar="PATH",
            help="also write the JSON report to PATH",
        )
        p.add_argument(
            "-q",
            "--quiet",
            action="store_true",
            help="suppress the report on stdout",
        )

    p_analyze = sub.add_parser(
        "analyze", help="full monodromy/reducibility analysis of one product"
    )
    add_product_flags(p_analyze)
    p_analyze.add_argument(
        "--samples", type=int, default=50, help="sample points per identity"
    )
    p_analyze.add_argument(
        "--tol", type=float, default=1e-8, help="residual tolerance"
    )
    p_analyze.add_argument(
        "--svg", metavar="PATH", help="also write the disk picture to PATH"
    )
    add_common_flags(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_classify = sub.add_parser(
        "classify", help="enumerate admissible block partitions of Z_n"
    )
    p_classify.add_argument("n", type=int, help="cyclic group order")
    add_common_flags(p_classify)
    p_classify.set_defaults(func=cmd_classify)

    p_verify = sub.add_parser(
        "verify", help="numerical identity and invariant check suite"
    )
    add_product_flags(p_verify)
    p_verify.add_argument(
        "--samples", type=int, default=50, help="sample points per identity"
    )
    p_verify.add_argument(
        "--tol", type=float, default=1e-8, help="residual tolerance"
    )
    p_verify.add_argument(
        "--corrupt-generator",
        action="store_true",
        help="test mode: deliberately corrupt one monodromy generator "
        "before checking (must FAIL)",
    )
    add_common_flags(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_plot = sub.add_parser("plot", help="render the disk picture as SVG")
    add_product_flags(p_plot)
    p_plot.add_argument(
        "--svg", metavar="PATH", required=True, help="output SVG path"
    )
    p_plot.add_argument("--seed", type=int, default=0, help="unused; accepted")
    p_plot.add_argument(
        "-q", "--quiet", action="store_true", help="suppress the note on stdout"
    )
    p_plot.set_defaults(func=cmd_plot)

    return parser


def _parse_pair(entry, what: str) -> complex:
    if (
        not isinstance(entry, (list, tuple))
        or len(entry) != 2
        or not all(isinstance(v, (int, float)) for v in entry)
    ):
        raise _UsageError(f"{what} must be a two-element [re, im] array")
    return complex(entry[0], entry[1])


def _load_product(args) -> tuple[FiniteBlaschkeProduct, str | None]:
    """Build the product from --expr or --zeros; exactly one is required."""
    if (args.expr is None) == (args.zeros is None):
        raise _UsageError("exactly one of --expr or --zeros is required")
    if args.expr is not None:
        tree = parse_expr(args.expr)
        return to_product(tree), expr_text(tree)
    path = Path(args.zeros)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise _UsageError(f"cannot read zeros file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(f"zeros file is not valid JSON: {exc}") from exc
    factor = 1.0 + 0j
    if isinstance(data, dict):
        raw = data.get("zeros")
        if "factor" in data:
            factor = _parse_pair(data["factor"], "factor")
    else:
        raw = data
    if not isinstance(raw, list) or not raw:
        raise _UsageError("zeros file must hold a nonempty array of zeros")
    zeros = tuple(_parse_pair(entry, "zero") for entry in raw)
    try:
        product = FiniteBlaschkeProduct(
            zeros=zeros, unimodular_factor=factor
        )
    except (BlaschkeError, ValueError) as exc:
        raise _UsageError(str(exc)) from exc
    return product, None


def _emit(args, text: str) -> None:
    """Write the report: to --json PATH when given, to stdout unless -q."""
    if args.json:
        Path(args.json).write_text(text)
    if not args.quiet:
        sys.stdout.write(text)


def _status_code(status: str) -> int:
    if status == "PASS":
        return EXIT_PASS
    if status == "LOW_CONFIDENCE":
        return EXIT_LOW_CONFIDENCE
    return EXIT_FAILED


def cmd_analyze(args) -> int:
    product, expression = _load_product(args)
    result = analyze(
        product,
        expression=expression,
        samples=args.samples,
        tol=args.tol,
    )
    _emit(args, dumps(analysis_report(result)))
    if args.svg:
        Path(args.svg).write_text(
            render_disk(
                product,
                critical=result.critical,
                locus=result.locus,
                frame=result.context.frame,
                loops=result.loops,
            )
        )
    if result.status != "PASS":
        print(f"status: {result.status}", file=sys.stderr)
        for note in result.notes:
            print(f"note: {note}", file=sys.stderr)
    return _status_code(result.status)


def cmd_classify(args) -> int:
    report = classify_report(args.n)
    _emit(args, dumps(report))
    return EXIT_PASS


def _retrack_check(result: AnalysisResult) -> dict:
    """Re-run the fiber continuation and compare the permutations.

    An independent second tracking pass over the same loops must reproduce
    every stored generator and the full-circle permutation.  This is the
    check that catches a corrupted permutation: the spectral identities
    alone hold for arbitrary index subsets, so they cannot.
    """
    locus = result.locus
    mismatches = 0
    generator_index = 0
    for loop in result.loops:
        perm = monodromy_generator(
            result.context.product,
            result.context.frame,
            loop,
            locus.values if locus is not None else (),
        )
        if loop.target_index is None:
            stored = result.full_circle
        else:
            stored = result.generators[generator_index]
            generator_index += 1
        if perm != stored:
            mismatches += 1
    return {
        "name": "monodromy_retrack",
        "passed": mismatches == 0,
        "detail": (
            "independent re-tracking reproduced all permutations"
            if mismatches == 0
            else f"{mismatches} permutation(s) differ from the stored run"
        ),
    }


def cmd_verify(args) -> int:
    product, expression = _load_product(args)
    result = analyze(
        product,
        expression=expression,
        samples=args.samples,
        tol=args.tol,
        corrupt_generator=args.corrupt_generator,
    )

    checks: list[dict] = []
    for name, res in result.residuals.items():
        view = {"name": name}
        view.update(verification_view(res))
        checks.append(view)

    structure_ok = result.admissible and result.dual.q == result.q
    checks.append(
        {
            "name": "structure",
            "passed": structure_ok,
            "detail": (
                "partition admissible and block count matches the dual"
                if structure_ok
                else "; ".join(result.notes) or "structural invariant violated"
            ),
        }
    )

    checks.append(_retrack_check(result))

    nontrivial = [a for a in result.factorizations]
    if result.reducible:
        fact_ok = bool(nontrivial) and all(a.success for a in nontrivial)
        detail = (
            "all subgroup-union factorizations reached the residual target"
            if fact_ok
            else "a factorization attempt failed or fell short"
        )
    else:
        fact_ok = not nontrivial
        detail = "irreducible: no nontrivial subgroup union to factor through"
    checks.append(
        {"name": "factorization_roundtrip", "passed": fact_ok, "detail": detail}
    )

    all_passed = all(c["passed"] for c in checks)
    report = {
        "kind": "verification-report",
        "expression": expression,
        "order": result.order,
        "status": result.status,
        "samples": args.samples,
        "tolerance": args.tol,
        "corrupted_generator": bool(args.corrupt_generator),
        "checks": checks,
        "all_passed": all_passed,
    }
    _emit(args, dumps(report))
    if not all_passed:
        for c in checks:
            if not c["passed"]:
                detail = c.get("detail", f"residual {c.get('max_residual')}")
                print(f"FAIL {c['name']}: {detail}", file=sys.stderr)
        return EXIT_FAILED
    if result.status == "LOW_CONFIDENCE":
        return EXIT_LOW_CONFIDENCE
    return EXIT_PASS


def cmd_plot(args) -> int:
    product, _ = _load_product(args)
    if product.order >= 2:
        locus = branch_locus(product)
        branch = build_branch(product)
        frame = choose_frame(branch, locus.hull_radius)
        loops = tuple(make_loops(locus, frame))
        critical = critical_points(product)
    else:
        locus = None
        branch = build_branch(product)
        frame = choose_frame(branch, abs(product.zeros[0]))
        loops = ()
        critical = ()
    svg = render_disk(
        product, critical=critical, locus=locus, frame=frame, loops=loops
    )
    try:
        Path(args.svg).write_text(svg)
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not args.quiet:
        print(f"wrote {args.svg}")
    return EXIT_PASS


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExpressionSyntaxError as exc:
        position = getattr(exc, "position", None)
        where = f" at position {position}" if position is not None else ""
        print(f"error[{exc.code}]: {exc}{where}", file=sys.stderr)
        return EXIT_USAGE
    except BlaschkeError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
