"""Command-line entry points.

    taxprob check <kb>
        Coherence report plus the pool chains that fail the consistency
        conditions (with the forced-false events).

    taxprob query <kb> --goal "( F | E )" [--method local|oracle|both]
        Interval bounds for a goal, via the local rule engine, the exact LP
        oracle, or both (the default, which also shows the gap between them).

Exit codes: 0 ok, 1 input error, 2 incoherent knowledge base (override with
--force), 3 probabilistic conflict.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .engine import EngineConfig, local_query, survey_chains
from .errors import (AtomSpaceError, CoherenceError, ProbabilisticConflictError,
                     TaxprobError)
from .intervals import fmt_decimal
from .kb import QueryAnswer, validate_coherence
from .kbformat import KbFormatError, parse_goal, parse_kb
from .oracle import tight_answer
from .rules import ALL_RULES

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCOHERENT = 2
EXIT_CONFLICT = 3

_STATUS_CODE = {"ok": EXIT_OK, "input-error": EXIT_INPUT,
                "incoherent": EXIT_INCOHERENT, "conflict": EXIT_CONFLICT}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taxprob",
        description="Deduction over taxonomic-probabilistic knowledge bases")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="coherence and chain-consistency report")
    check.add_argument("kb", help="knowledge-base file")
    check.add_argument("--json", action="store_true", dest="as_json")

    query = sub.add_parser("query", help="answer a probabilistic query")
    query.add_argument("kb", help="knowledge-base file")
    query.add_argument("--goal", action="append", default=None,
                       help="goal '( F | E )'; may be repeated; defaults to "
                            "the file's query: lines")
    query.add_argument("--method", choices=("local", "oracle", "both"),
                       default="both")
    query.add_argument("--rules", default=None,
                       help="comma-separated subset of "
                            "sharpening,chaining,fusion,combination")
    query.add_argument("--trace", action="store_true")
    query.add_argument("--json", action="store_true", dest="as_json")
    query.add_argument("--force", action="store_true",
                       help="query even when the KB is incoherent")
    query.add_argument("--max-sweeps", type=int, default=100)
    query.add_argument("--pool", choices=("kb-events", "kb-plus-products"),
                       default="kb-plus-products")
    query.add_argument("--precision", type=int, default=4,
                       help="decimal places in rendered bounds")
    return parser


def _parse_rules(text: Optional[str]) -> frozenset:
    if text is None:
        return ALL_RULES
    names = [t.strip() for t in text.replace(",", " ").split() if t.strip()]
    unknown = sorted(set(names) - ALL_RULES)
    if unknown:
        raise KbFormatError([])  # replaced by caller message
    return frozenset(names)


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None
    try:
        return parse_kb(text)
    except KbFormatError as exc:
        for diag in exc.diagnostics:
            print(f"{path}:{diag}", file=sys.stderr)
        return None


def _answer_json(answer: QueryAnswer, places: int, with_trace: bool) -> dict:
    out = {
        "lower": fmt_decimal(answer.lower, places),
        "upper": fmt_decimal(answer.upper, places),
        "exact_lower": str(answer.lower),
        "exact_upper": str(answer.upper),
        "trace": [str(step) for step in answer.trace] if with_trace else [],
    }
    return out


def _print_answer(label: str, answer: QueryAnswer, places: int):
    if answer.empty:
        print(f"  {label}: [1, 0] (empty: premise has no "
              "positive-probability model)")
        return
    lo, hi = answer.lower, answer.upper
    print(f"  {label}: [{fmt_decimal(lo, places)}, {fmt_decimal(hi, places)}]"
          f"  (exact [{lo}, {hi}])")


def cmd_check(args) -> int:
    parsed = _load(args.kb)
    if parsed is None:
        return EXIT_INPUT
    kb = parsed.kb
    status = "ok"
    violations = validate_coherence(kb)
    findings = []
    if violations:
        status = "incoherent"
    else:
        try:
            findings = survey_chains(kb)
        except ProbabilisticConflictError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFLICT

    if args.as_json:
        report = {
            "status": status,
            "warnings": parsed.warnings,
            "coherence_violations": [str(v) for v in violations],
            "inconsistent_chains": [
                {
                    "a": str(d.a), "b": str(d.b), "c": str(d.c),
                    "conditions": sorted(d.verdict.fired_conditions),
                    "forced_false": sorted(d.verdict.forced_false),
                }
                for d in findings
            ],
        }
        print(json.dumps(report, indent=2))
        return _STATUS_CODE[status]

    for warning in parsed.warnings:
        print(f"warning: {warning}")
    if violations:
        print(f"{args.kb}: incoherent ({len(violations)} violation(s))")
        for v in violations:
            print(f"  {v}")
        return EXIT_INCOHERENT
    print(f"{args.kb}: coherent")
    if findings:
        print(f"{len(findings)} inconsistent chain(s):")
        for d in findings:
            print(f"  {d}")
    else:
        print("all pool chains consistent")
    return EXIT_OK


def cmd_query(args) -> int:
    parsed = _load(args.kb)
    if parsed is None:
        return EXIT_INPUT
    kb = parsed.kb
    try:
        rules = _parse_rules(args.rules)
    except KbFormatError:
        print(f"error: unknown rule name in --rules {args.rules!r}",
              file=sys.stderr)
        return EXIT_INPUT

    if args.goal:
        try:
            goals = [parse_goal(g, kb.universe) for g in args.goal]
        except KbFormatError as exc:
            for diag in exc.diagnostics:
                print(f"goal:{diag}", file=sys.stderr)
            return EXIT_INPUT
    else:
        goals = parsed.queries
    if not goals:
        print("error: no goal given (use --goal or query: lines)",
              file=sys.stderr)
        return EXIT_INPUT

    violations = validate_coherence(kb)
    if violations and not args.force:
        print(f"{args.kb}: incoherent ({len(violations)} violation(s)); "
              "use --force to query anyway", file=sys.stderr)
        for v in violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INCOHERENT

    config = EngineConfig(enabled_rules=rules,
                          pool_policy=args.pool,
                          max_sweeps=args.max_sweeps)
    places = args.precision
    reports = []
    status = "ok"
    try:
        for f, e in goals:
            report = {"goal": f"({f} | {e})", "method": args.method}
            if args.method in ("local", "both"):
                local = local_query(kb, (f, e), config, check_coherence=False)
                report["local"] = _answer_json(local, places, args.trace)
                report["local_answer"] = local
            if args.method in ("oracle", "both"):
                oracle_ans = tight_answer(kb, (f, e))
                report["oracle"] = {
                    "lower": fmt_decimal(oracle_ans.lower, places),
                    "upper": fmt_decimal(oracle_ans.upper, places),
                    "empty": oracle_ans.empty,
                }
                report["oracle_answer"] = oracle_ans
            report["status"] = status
            reports.append(report)
    except ProbabilisticConflictError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except AtomSpaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.as_json:
        payload = []
        for report in reports:
            item = {"goal": report["goal"], "method": report["method"]}
            if "local" in report:
                item["local"] = report["local"]
            if "oracle" in report:
                item["oracle"] = report["oracle"]
            item["status"] = report["status"]
            payload.append(item)
        print(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2))
        return EXIT_OK

    for warning in parsed.warnings:
        print(f"warning: {warning}")
    for report in reports:
        print(f"{report['goal']}:")
        local = report.get("local_answer")
        oracle_ans = report.get("oracle_answer")
        if local is not None:
            _print_answer("local ", local, places)
            if args.trace:
                if local.trace:
                    print("  trace:")
                    for step in local.trace:
                        print(f"    {step}")
                else:
                    print("  trace: (no rule application needed)")
        if oracle_ans is not None:
            _print_answer("oracle", oracle_ans, places)
        if local is not None and oracle_ans is not None:
            if local.empty or oracle_ans.empty:
                if local.empty != oracle_ans.empty:
                    print("  gap: local did not detect the empty premise")
            else:
                gap_lo = oracle_ans.lower - local.lower
                gap_hi = local.upper - oracle_ans.upper
                print(f"  gap:    lower {fmt_decimal(gap_lo, places)}, "
                      f"upper {fmt_decimal(gap_hi, places)} "
                      "(local minus oracle tightness)")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args)
        return cmd_query(args)
    except CoherenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOHERENT
    except TaxprobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
