"""Command-line entry point: ``skillnet <subcommand> [options]``.

Exit codes:
    0   success
    2   usage or configuration error
    3   workdir locked by another run
    10  ingest        14  centrality    18  export
    11  build         15  communities
    12  graph         16  coverage
    13  stats         17  trend
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .centrality import MEASURES
from .config import make_config, read_config
from .errors import ConfigError
from .export import FORMATS
from .pipeline import (
    CONFIG_COPY,
    EXIT_CODES,
    EXIT_USAGE,
    ORDER,
    StageError,
    WorkdirLocked,
    run_pipeline,
)

logger = logging.getLogger("skillnet")

# stage run by each subcommand, and the report file echoed to stdout
_TARGETS = {
    "ingest": ("ingest", "ingest.json"),
    "build": ("build", "match_stats.json"),
    "stats": ("stats", "stats.txt"),
    "centrality": ("centrality", "centrality_top.txt"),
    "communities": ("communities", "communities.txt"),
    "coverage": ("coverage", "coverage.txt"),
    "trend": ("trend", "trend.txt"),
    "export": ("export", None),
}

_DEFAULT_EXPORT = {"gexf": "graph.gexf", "edgelist-csv": "edges.csv", "report-json": "report.json"}


def _measures(text: str) -> tuple[str, ...]:
    items = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = [m for m in items if m not in MEASURES]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"choose from {','.join(MEASURES)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skillnet",
        description="Skill co-occurrence networks from job advertisements.",
    )
    _global_flags(parser, None)
    # subcommands accept the same flags; SUPPRESS keeps them from resetting
    # values given before the subcommand name
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="validate and cache lexicon and corpus")
    p.add_argument("--lexicon", type=Path)
    p.add_argument("--corpus", type=Path)
    p.add_argument("--out", type=Path, dest="out", help="alias of --workdir")

    sub.add_parser("build", parents=[common], help="build the ad-skill matrix")
    sub.add_parser("stats", parents=[common], help="network macro measures")

    p = sub.add_parser("centrality", parents=[common], help="centrality scores and rankings")
    _centrality_flags(p)

    for name, text in (
        ("communities", "Louvain communities and profiles"),
        ("coverage", "share of ads touching each community"),
        ("trend", "coverage per posting year"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--labels", type=Path, help="community_id,label file")

    p = sub.add_parser("export", parents=[common], help="export graph or report")
    p.add_argument("--format", choices=FORMATS, default="gexf")
    p.add_argument("--output", type=Path, help="destination (default: inside the workdir)")

    p = sub.add_parser("run", parents=[common], help="run the whole pipeline")
    p.add_argument("--lexicon", type=Path)
    p.add_argument("--corpus", type=Path)
    p.add_argument("--labels", type=Path)
    _centrality_flags(p)
    return parser


def _global_flags(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--config", type=Path, default=default, help="flat key = value config file")
    p.add_argument("--workdir", type=Path, default=default, help="pipeline working directory")
    p.add_argument("--seed", type=int, default=default, help="community detection seed (default 42)")
    p.add_argument("-v", "--verbose", action="store_true", default=default or False)


def _centrality_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--measures", type=_measures, help="comma list (default: all four)")
    p.add_argument("--top", type=int, help="rows per ranking (default 15)")
    p.add_argument("--weighted-paths", action="store_const", const=True, default=None,
                   help="path length 1/weight for betweenness and closeness")
    p.add_argument("--normalized", action="store_const", const=True, default=None)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--max-iterations", type=int)


def resolve_config(args: argparse.Namespace):
    workdir = getattr(args, "out", None) or args.workdir
    layers = []
    if workdir is not None and (workdir / CONFIG_COPY).is_file():
        layers.append(read_config(workdir / CONFIG_COPY))
    if args.config is not None:
        layers.append(read_config(args.config))
    layers.append(
        {
            "workdir": workdir,
            "seed": args.seed,
            "lexicon": getattr(args, "lexicon", None),
            "corpus": getattr(args, "corpus", None),
            "labels": getattr(args, "labels", None),
            "measures": getattr(args, "measures", None),
            "top": getattr(args, "top", None),
            "weighted_paths": getattr(args, "weighted_paths", None),
            "normalized": getattr(args, "normalized", None),
            "tolerance": getattr(args, "tolerance", None),
            "max_iterations": getattr(args, "max_iterations", None),
        }
    )
    return make_config(*layers)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = resolve_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "run":
        targets = ORDER
    else:
        targets = (_TARGETS[args.command][0],)

    try:
        pipeline = run_pipeline(config, targets)
    except (StageError, WorkdirLocked) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code

    wd = pipeline.workdir
    if args.command == "run":
        for name in sorted(p.name for p in wd.root.iterdir() if not p.name.startswith(".")):
            print(wd.root / name)
    elif args.command == "export":
        return _export(args, pipeline)
    else:
        report = _TARGETS[args.command][1]
        text = wd.read(report)
        if report.endswith(".json"):
            text = json.dumps(json.loads(text), indent=2) + "\n"
        sys.stdout.write(text)
    return 0


def _export(args, pipeline) -> int:
    source = pipeline.workdir.path(_DEFAULT_EXPORT[args.format])
    if args.output is None:
        print(source)
        return 0
    try:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_bytes(source.read_bytes())
    except OSError as exc:
        print(f"error: [export] {exc}", file=sys.stderr)
        return EXIT_CODES["export"]
    print(args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
