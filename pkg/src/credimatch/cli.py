"""Command-line interface.

Subcommands: ``match`` (catalog alignment), ``combine`` and ``decide`` (bba
documents), ``sim`` (one similarity score).  Results go to stdout, messages
to stderr.  Exit status is 0 on success, 1 on domain errors and 2 on usage
or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .combination import CombinationRule, combine_all
from .decision import (
    AppriouParams,
    DecisionConfig,
    appriou_decide,
    decide_max_bel,
    decide_max_betp,
    decide_max_pl,
    decide_min_distance,
)
from .errors import EmptySetMass, EvidenceError
from .formats import FormatError, bba_document, dumps, read_bbas, read_catalog, read_scores
from .pipeline import PipelineConfig, run_pipeline
from .similarity import MatcherKind, score

log = logging.getLogger("credimatch")

EXIT_DOMAIN = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _matcher_list(text: str) -> tuple[MatcherKind, ...]:
    try:
        return tuple(MatcherKind(part.strip().lower()) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"matchers must be drawn from {', '.join(k.value for k in MatcherKind)}"
        ) from None


def _matcher(text: str) -> MatcherKind:
    try:
        return MatcherKind(text.strip().lower())
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown matcher {text!r}") from None


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{value} is outside [0, 1]")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="credimatch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", help="align two entity catalogs")
    p.add_argument("--source", required=True, type=Path)
    p.add_argument("--target", required=True, type=Path)
    p.add_argument("--matchers", type=_matcher_list, default=tuple(MatcherKind))
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--kmin", type=_positive_int, default=1)
    p.add_argument("--kmax", type=_positive_int, default=2)
    p.add_argument("--rule", choices=[r.value for r in CombinationRule], default="dempster")
    p.add_argument("--scores", type=Path, help="JSON list of precomputed similarity records")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--output", type=Path)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("combine", help="combine the bbas of a bba document")
    p.add_argument("--bbas", required=True, type=Path)
    p.add_argument("--rule", choices=[r.value for r in CombinationRule], default="dempster")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("decide", help="decide on a single bba")
    p.add_argument("--bba", required=True, type=Path)
    p.add_argument("--rule", choices=["mindist", "betp", "bel", "pl", "appriou"], default="mindist")
    p.add_argument("--kmin", type=_positive_int, default=1)
    p.add_argument("--kmax", type=_positive_int, default=2)
    p.add_argument("--r", type=_unit_interval, default=1.0)
    p.add_argument("--include-frame", action="store_true", help="add the whole frame to the candidates")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("sim", help="similarity of two strings")
    p.add_argument("--matcher", required=True, type=_matcher)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_sim)
    return parser


def _decision_config(args) -> DecisionConfig:
    if args.kmax < args.kmin:
        raise UsageError("--kmax must be >= --kmin")
    return DecisionConfig(
        min_cardinality=args.kmin,
        max_cardinality=args.kmax,
        include_full_frame=getattr(args, "include_frame", False),
    )


def cmd_match(args) -> str:
    if not 0.0 <= args.threshold < 1.0:
        raise UsageError("--threshold must lie in [0, 1)")
    config = PipelineConfig(
        matchers=args.matchers,
        threshold=args.threshold,
        combination=CombinationRule(args.rule),
        decision=_decision_config(args),
    )
    try:
        c1 = read_catalog(args.source)
        c2 = read_catalog(args.target)
        records = read_scores(args.scores) if args.scores else None
    except FormatError as exc:
        raise UsageError(str(exc)) from exc
    except ValueError as exc:
        if isinstance(exc, EvidenceError):
            raise
        raise UsageError(str(exc)) from exc
    doc = run_pipeline(c1, c2, config, records=records, workers=args.workers)
    for diag in doc.diagnostics:
        print(f"warning: {diag['source']}: {diag['message']}", file=sys.stderr)
    text = dumps(doc.to_dict())
    if args.output:
        args.output.write_text(text, encoding="utf-8")
        return ""
    return text


def cmd_combine(args) -> str:
    frame, named = read_bbas(args.bbas)
    rule = CombinationRule(args.rule)
    combined = combine_all(rule, [m for _, m in named])
    name = named[0][0] if len(named) == 1 else f"{rule.value}({','.join(n for n, _ in named)})"
    return dumps(bba_document(frame, [(name, combined)]))


def cmd_decide(args) -> str:
    frame, named = read_bbas(args.bba)
    if len(named) != 1:
        raise FormatError(f"expected exactly one bba, found {len(named)}")
    m = named[0][1]
    if args.rule != "betp" and not m.normalized:
        raise EmptySetMass(f"rule {args.rule} needs a normalized bba; m({{}}) = {m.empty_mass}")
    config = _decision_config(args)
    if args.rule == "mindist":
        outcome = decide_min_distance(m, config)
    elif args.rule == "appriou":
        outcome = appriou_decide(m, AppriouParams(r=args.r), config)
    else:
        fn = {"betp": decide_max_betp, "bel": decide_max_bel, "pl": decide_max_pl}[args.rule]
        outcome = fn(m, config.tie_tolerance)
    return dumps({
        "rule": args.rule,
        "chosen": frame.format(outcome.chosen),
        "score": round(outcome.score, 6),
        "tie": outcome.tie,
        "table": [{"subset": frame.format(x), "score": round(v, 6)} for x, v in outcome.score_table],
    })


def cmd_sim(args) -> str:
    return f"{score(args.matcher, args.a, args.b):.6f}\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        out = args.func(args)
    except (UsageError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EvidenceError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
