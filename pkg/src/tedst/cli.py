"""Command line interface.

    tedst distance --t1 A --t2 B [--costs unit|illustration|entailment] [--grouped]
    tedst entail   --pairs FILE --method M --low X [--high Y] [--lexicon F] ...
    tedst tune     --pairs FILE --method M [--objective accuracy|f_yes]
    tedst oracle   --t1 A --t2 B

Exit status: 0 on success, 1 on usage errors, 2 on bad input data.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from tedst.costs import MODEL_KINDS, make_model
from tedst.entailment import BINARY, METHODS, THREE_WAY, Thresholds, polarity_of, run_pipeline, tune_thresholds
from tedst.grouping import ted_st
from tedst.io import ParseError, load_lexicon, parse_overrides, parse_pairs, read_tree_file
from tedst.oracle import DEFAULT_BOUND, OracleBoundError, brute_force_ted
from tedst.ted import ScriptError, build_alignment, ted
from tedst.tree import TreeError

USAGE_ERROR = 1
DATA_ERROR = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    method: str = "ted_st"
    costs: str = "entailment"
    low: Optional[float] = None
    high: Optional[float] = None
    mode: str = BINARY
    lexicon: Optional[Path] = None
    stopwords: Optional[Path] = None
    overrides: Optional[Path] = None
    output: str = "tsv"

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        cfg = cls()
        for name in ("method", "costs", "low", "high", "lexicon", "stopwords", "overrides"):
            if getattr(args, name, None) is not None:
                setattr(cfg, name, getattr(args, name))
        cfg.output = getattr(args, "output", "tsv")
        if getattr(args, "mode", None):
            cfg.mode = args.mode
        elif cfg.high is not None:
            cfg.mode = THREE_WAY
        for path in (cfg.lexicon, cfg.stopwords, cfg.overrides):
            if path is not None and not Path(path).is_file():
                raise FileNotFoundError(f"no such file: {path}")
        return cfg

    def model(self):
        overrides = parse_overrides(Path(self.overrides).read_text(encoding="utf-8")) if self.overrides else {}
        kind = overrides.pop("model_kind", self.costs)
        return make_model(kind, load_lexicon(self.lexicon, self.stopwords), overrides)


def _fmt(x: float) -> str:
    return f"{x:g}"


def _add_cost_flags(p, default="entailment"):
    p.add_argument("--costs", choices=MODEL_KINDS, default=default, help="cost schedule")
    p.add_argument("--lexicon", type=Path, help="word<TAB>relation<TAB>word file")
    p.add_argument("--stopwords", type=Path, help="one stop word per line")
    p.add_argument("--overrides", type=Path, help="'name = number' cost overrides")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tedst", description="Tree edit distance with subtree operations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("distance", help="edit distance, script and alignment of two trees")
    p.add_argument("--t1", type=Path, required=True)
    p.add_argument("--t2", type=Path, required=True)
    p.add_argument("--format", choices=("auto", "bracket", "conll"), default="auto")
    p.add_argument("--grouped", action="store_true", help="group subtree operations")
    _add_cost_flags(p, default="unit")

    p = sub.add_parser("entail", help="classify premise/hypothesis pairs")
    p.add_argument("--pairs", type=Path, required=True)
    p.add_argument("--method", choices=METHODS, default="ted_st")
    p.add_argument("--low", type=float, required=True)
    p.add_argument("--high", type=float)
    p.add_argument("--mode", choices=(BINARY, THREE_WAY))
    p.add_argument("--output", choices=("tsv", "json"), default="tsv")
    _add_cost_flags(p)

    p = sub.add_parser("tune", help="choose thresholds on a development set")
    p.add_argument("--pairs", type=Path, required=True)
    p.add_argument("--method", choices=METHODS, default="ted_st")
    p.add_argument("--objective", choices=("accuracy", "f_yes"), default="accuracy")
    p.add_argument("--mode", choices=(BINARY, THREE_WAY), default=BINARY)
    _add_cost_flags(p)

    p = sub.add_parser("oracle", help="brute-force distance for small trees")
    p.add_argument("--t1", type=Path, required=True)
    p.add_argument("--t2", type=Path, required=True)
    p.add_argument("--format", choices=("auto", "bracket", "conll"), default="auto")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    _add_cost_flags(p, default="unit")
    return parser


def cmd_distance(args, out):
    t1 = read_tree_file(args.t1, args.format)
    t2 = read_tree_file(args.t2, args.format)
    model = RunConfig.from_args(args).model()
    script = ted(t1, t2, model)
    align = build_alignment(t1, t2, script)
    if args.grouped:
        grouped = ted_st(t1, t2, model)
        print(f"cost\t{_fmt(grouped.total_cost)}", file=out)
        print(f"ops\t{script.kinds}", file=out)
        print(f"marker\t{grouped.marker_string}", file=out)
        print(align.render(t1, t2, grouped.marker_string), file=out)
        for line in grouped.describe():
            print(line, file=out)
    else:
        print(f"cost\t{_fmt(script.total_cost)}", file=out)
        print(f"ops\t{script.kinds}", file=out)
        print(align.render(t1, t2, script.kinds), file=out)


def cmd_entail(args, out):
    cfg = RunConfig.from_args(args)
    records = parse_pairs(args.pairs.read_text(encoding="utf-8"))
    if not records:
        raise ParseError(f"{args.pairs}: no pairs found")
    th = Thresholds(cfg.low, cfg.high, polarity_of(cfg.method))
    report, results = run_pipeline(records, cfg.method, cfg.model(), th, cfg.mode)
    if cfg.output == "json":
        doc = {
            "results": [
                {"id": r.id, "method": r.method, "score": r.score, "decision": r.decision,
                 "gold": r.gold, "marker_string": r.marker_string}
                for r in results
            ],
            "metrics": report.as_dict(),
        }
        print(json.dumps(doc, indent=2, sort_keys=True), file=out)
        return
    print("id\tmethod\tscore\tdecision\tgold\tmarker", file=out)
    for r in results:
        print(f"{r.id}\t{r.method}\t{_fmt(r.score)}\t{r.decision}\t{r.gold}\t{r.marker_string}", file=out)
    print(file=out)
    for line in report.lines():
        print(f"# {line}", file=out)


def cmd_tune(args, out):
    cfg = RunConfig.from_args(args)
    records = parse_pairs(args.pairs.read_text(encoding="utf-8"))
    th = tune_thresholds(records, cfg.method, cfg.model(), args.mode, args.objective)
    print(f"low\t{_fmt(th.low)}", file=out)
    if args.mode == THREE_WAY:
        print(f"high\t{_fmt(th.high)}", file=out)
    print(f"polarity\t{th.polarity}", file=out)
    if th.degenerate:
        print("warning\tall scores equal; threshold is degenerate", file=out)


def cmd_oracle(args, out):
    t1 = read_tree_file(args.t1, args.format)
    t2 = read_tree_file(args.t2, args.format)
    model = RunConfig.from_args(args).model()
    print(f"cost\t{_fmt(brute_force_ted(t1, t2, model, bound=args.bound))}", file=out)


COMMANDS = {"distance": cmd_distance, "entail": cmd_entail, "tune": cmd_tune, "oracle": cmd_oracle}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=err)
        return USAGE_ERROR
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=err)
    try:
        COMMANDS[args.command](args, out)
    except OracleBoundError as exc:
        print(f"tedst: {exc}", file=err)
        return USAGE_ERROR
    except (OSError, ParseError, TreeError, ScriptError, ValueError) as exc:
        print(f"tedst: {exc}", file=err)
        return DATA_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
