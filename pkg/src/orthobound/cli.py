"""Command-line interface: ``orthobound check | bound | sharpness``.

Exit codes: 0 success, 1 input error, 3 hypothesis unsatisfied,
4 chain violation (a library bug on valid input).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time

from . import __version__, bounds, problem, sharpness
from .conditions import check_norm_form, check_re_form, check_mixture
from .errors import HypothesisError, OrthoboundError, ProblemError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_HYPOTHESIS = 3
EXIT_CHAIN = 4

log = logging.getLogger("orthobound")


def _read(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fp:
            return json.load(fp)
    except OSError as exc:
        raise ProblemError(str(exc), "input")
    except json.JSONDecodeError as exc:
        raise ProblemError(f"invalid JSON ({exc.msg}) at line {exc.lineno} column {exc.colno}",
                           "input")


def _document(kind, body, args, started):
    doc = {"schema": problem.SCHEMA_ID, "tool": "orthobound", "version": __version__,
           "command": kind}
    doc.update(body)
    if getattr(args, "timing", False):
        doc["timing_seconds"] = time.perf_counter() - started
    return doc


def _emit(doc, args, csv_rows=None):
    text = json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if args.out:
        with open(args.out, "w") as fp:
            fp.write(text)
    if getattr(args, "csv", False) and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["theorem", "term", "value"])
        for row in csv_rows:
            writer.writerow([row[0], row[1], format(row[2], ".17g")])
        sys.stdout.write(buf.getvalue())
    elif not args.out:
        sys.stdout.write(text)


def cmd_check(args, started):
    doc = _read(args.input)
    prob = problem.load_problem(doc)
    tol = args.tolerance if args.tolerance is not None else prob.tolerance
    names = args.vector or sorted(n for n in prob.vectors if n in prob.boxes)
    if not names:
        raise ProblemError("no vector has a matching box to check", "boxes")
    results = {}
    satisfied = True
    for name in names:
        x = prob.vector(name)
        box = prob.box(name)
        re_rep = check_re_form(x, prob.family, box, tol)
        norm_rep = check_norm_form(x, prob.family, box, tol)
        results[name] = {"re_form": re_rep.as_dict(), "norm_form": norm_rep.as_dict(),
                         "equivalence_residual": re_rep.identity_residual}
        satisfied &= re_rep.satisfied
    if prob.lam is not None and "x" in prob.vectors and "y" in prob.vectors:
        box = prob.boxes.get("mixture", prob.boxes.get("x"))
        if box is not None:
            for sign, label in ((1, "mixture_plus"), (-1, "mixture_minus")):
                rep = check_mixture(prob.vector("x"), prob.vector("y"), prob.family, box,
                                    prob.lam, sign, tol)
                results[label] = {"re_form": rep.as_dict(),
                                  "equivalence_residual": rep.identity_residual}
    out = _document("check", {"input": doc, "conditions": results, "satisfied": satisfied},
                    args, started)
    _emit(out, args)
    return EXIT_OK if satisfied else EXIT_HYPOTHESIS


def cmd_bound(args, started):
    doc = _read(args.input)
    prob = problem.load_problem(doc)
    if args.tolerance is not None:
        prob.tolerance = args.tolerance
    tags = list(bounds.TAGS) if args.theorem == "all" else [args.theorem]
    reports, status, rows = [], EXIT_OK, []
    for tag in tags:
        try:
            rep = problem.evaluate(prob, tag, force=args.force)
        except ProblemError as exc:
            if args.theorem != "all":
                raise
            reports.append({"theorem": tag, "skipped": str(exc)})
            continue
        except HypothesisError as exc:
            log.error("%s", exc)
            reports.append({"theorem": tag, "error": str(exc), "failed": list(exc.failed),
                            "excess": exc.excess,
                            "conditions": [r.as_dict() for r in exc.reports]})
            status = max(status, EXIT_HYPOTHESIS)
            continue
        reports.append(rep.as_dict())
        rows += [(tag, "left_value", rep.left_value), (tag, "refined_bound", rep.refined_bound),
                 (tag, "outer_bound", rep.outer_bound)]
        if not rep.hypotheses_satisfied:
            status = max(status, EXIT_HYPOTHESIS)
        elif not rep.chain_ok:
            status = EXIT_CHAIN
    body = {"input": doc, "reports": reports, "forced": bool(args.force)}
    _emit(_document("bound", body, args, started), args, rows)
    return status


def cmd_sharpness(args, started):
    if args.probes < 1:
        raise ProblemError("must be at least 1", "--probes")
    if args.family_size > args.dim or args.family_size < 1:
        raise ProblemError("must lie in [1, dim]", "--family-size")
    if args.lam is not None and not 0 < args.lam < 1:
        raise ProblemError("must lie in (0, 1)", "--lambda")
    result = sharpness.probe(args.theorem, args.dim, args.family_size, args.probes, args.seed,
                             args.lam, args.mode)
    _emit(_document("sharpness", {"result": result.as_dict()}, args, started), args)
    return EXIT_OK if result.soundness_violations == 0 else EXIT_CHAIN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthobound",
        description="Evaluate and probe Bessel- and Grüss-type bounds for orthonormal families.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--timing", action="store_true",
                       help="include wall-clock timing (makes output run-dependent)")
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("check", help="evaluate both forms of the box hypotheses")
    p.add_argument("input", help="problem document (JSON), '-' for stdin")
    p.add_argument("--vector", action="append", help="vector name to check (default: all)")
    p.add_argument("--tolerance", type=float)
    common(p)

    p = sub.add_parser("bound", help="evaluate an inequality chain")
    p.add_argument("input", help="problem document (JSON), '-' for stdin")
    p.add_argument("--theorem", required=True, choices=list(bounds.TAGS) + ["all"])
    p.add_argument("--tolerance", type=float)
    p.add_argument("--force", action="store_true",
                   help="report the chain even when a hypothesis fails")
    p.add_argument("--csv", action="store_true",
                   help="print one CSV row per chain term to stdout")
    common(p)

    p = sub.add_parser("sharpness", help="probe the tightness of a bound")
    p.add_argument("--theorem", required=True, choices=list(sharpness.PROBE_TAGS))
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--family-size", type=int, default=1)
    p.add_argument("--probes", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--mode", choices=["real", "complex"], default="real")
    common(p)
    return parser


COMMANDS = {"check": cmd_check, "bound": cmd_bound, "sharpness": cmd_sharpness}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    started = time.perf_counter()
    try:
        return COMMANDS[args.command](args, started)
    except ProblemError as exc:
        print(f"orthobound: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OrthoboundError as exc:
        print(f"orthobound: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
