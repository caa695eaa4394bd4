"""Stage orchestration over a working directory.

Each stage declares the workdir files it reads, the files it writes and the
config values it depends on. ``manifest.json`` records a digest of those
inputs plus the hash of every output; a stage is skipped only when both still
match, so a changed input always forces a rebuild downstream.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import centrality as cen
from .community import louvain, parse_partition
from .config import PipelineConfig
from .errors import SkillNetError
from .export import gexf_document, report_document
from .graph import SkillGraph, build_graph, macro_measures, parse_graph
from .lexicon import Corpus, SkillLexicon, load_corpus, load_lexicon, parse_corpus, parse_lexicon
from .market import CommunityProfile, ad_coverage, community_profiles, load_labels, profiles_table, yearly_trend
from .matrix import AdSkillMatrix, build_matrix, match_summary, parse_matrix

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"
CONFIG_COPY = "config.txt"
LOCK = ".lock"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_LOCKED = 3


class StageError(SkillNetError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.exit_code = STAGES[stage].exit_code


class WorkdirLocked(SkillNetError):
    exit_code = EXIT_LOCKED


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _sha(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class Workdir:
    """Read/write helpers for one pipeline working directory."""

    def __init__(self, root: Path, config: PipelineConfig):
        self.root = Path(root)
        self.config = config

    def path(self, name: str) -> Path:
        return self.root / name

    def read(self, name: str) -> str:
        return self.path(name).read_text(encoding="utf-8")

    def lexicon(self) -> SkillLexicon:
        return parse_lexicon(self.read("lexicon.txt").splitlines(), source="lexicon.txt")

    def corpus(self) -> Corpus:
        return parse_corpus(self.read("corpus.jsonl").splitlines(), source="corpus.jsonl", normalize=False)

    def matrix(self) -> AdSkillMatrix:
        ads = [ad.id for ad in self.corpus().ads]
        return parse_matrix(self.read("matrix.csv"), ads, self.lexicon().names)

    def graph(self) -> SkillGraph:
        return parse_graph(self.read("edges.csv"), self.read("nodes.csv"))

    def partition(self):
        return parse_partition(self.read("communities.csv"))

    def labels(self) -> dict[int, str]:
        return load_labels(self.config.labels) if self.config.labels else {}


@dataclass(frozen=True)
class Stage:
    name: str
    exit_code: int
    deps: tuple[str, ...]
    reads: Callable[[PipelineConfig], list[str]]
    outputs: Callable[[PipelineConfig], list[str]]
    external: Callable[[PipelineConfig], list[Path]]
    params: Callable[[PipelineConfig], dict]
    run: Callable[[Workdir], dict[str, str]]


def _ingest(wd: Workdir) -> dict[str, str]:
    lexicon = load_lexicon(wd.config.lexicon)
    corpus = load_corpus(wd.config.corpus)
    span = corpus.year_range
    summary = {
        "lexicon_size": lexicon.size,
        "aliases": sum(len(e.aliases) for e in lexicon.entries),
        "ads": len(corpus),
        "undated_ads": sum(1 for ad in corpus.ads if ad.posted_date is None),
        "unparseable_dates": corpus.bad_dates,
        "skipped_records": corpus.skipped,
        "year_range": list(span) if span else None,
    }
    return {
        "lexicon.txt": lexicon.dumps(),
        "corpus.jsonl": corpus.dumps(),
        "ingest.json": _dump_json(summary),
    }


def _build(wd: Workdir) -> dict[str, str]:
    matrix = build_matrix(wd.corpus(), wd.lexicon())
    summary = match_summary(matrix)
    logger.info(
        "matched %d of %d skills across %d ads (%d ads without matches)",
        summary["skills_matched"], summary["lexicon_size"],
        summary["ads_processed"], summary["zero_match_ads"],
    )
    return {"matrix.csv": matrix.dumps(), "match_stats.json": _dump_json(summary)}


def _graph(wd: Workdir) -> dict[str, str]:
    graph = build_graph(wd.matrix())
    return {"nodes.csv": graph.dumps_nodes(), "edges.csv": graph.dumps_edges()}


def _stats(wd: Workdir) -> dict[str, str]:
    stats = macro_measures(wd.graph())
    return {"stats.json": _dump_json(stats.as_dict()), "stats.txt": stats.table()}


def _centrality(wd: Workdir) -> dict[str, str]:
    cfg = wd.config
    graph = wd.graph()
    out = {}
    rankings = []
    for measure in cfg.measures:
        scores = cen.compute(
            graph, measure,
            normalized=cfg.normalized, weighted_paths=cfg.weighted_paths,
            tolerance=cfg.tolerance, max_iterations=cfg.max_iterations,
        )
        out[f"centrality_{measure}.csv"] = scores.dumps()
        rankings.append(cen.top_k(scores, cfg.top))
    out["centrality_top.csv"] = cen.ranking_csv(rankings)
    out["centrality_top.txt"] = cen.ranking_table(rankings)
    return out


def _communities(wd: Workdir) -> dict[str, str]:
    graph = wd.graph()
    partition = louvain(graph, seed=wd.config.seed)
    profiles = community_profiles(graph, partition, wd.labels())
    summary = {
        "seed": wd.config.seed,
        "modularity": partition.modularity,
        "community_count": partition.community_count,
        "node_count": graph.n,
        "profiles": [p.as_dict() for p in profiles],
    }
    table = f"Modularity Q = {partition.modularity:.4f}\n\n" + profiles_table(profiles)
    return {
        "communities.csv": partition.dumps(),
        "communities.json": _dump_json(summary),
        "communities.txt": table,
    }


def _coverage(wd: Workdir) -> dict[str, str]:
    report = ad_coverage(wd.matrix(), wd.partition())
    labels = wd.labels()
    doc = {"ads": report.ads, "any_community": report.any_covered, "communities": report.records(labels)}
    return {"coverage.json": _dump_json(doc), "coverage.txt": report.table(labels)}


def _trend(wd: Workdir) -> dict[str, str]:
    report = yearly_trend(wd.corpus(), wd.matrix(), wd.partition())
    labels = wd.labels()
    doc = {"years": list(report.years), "dated_ads": list(report.dated_ads), "cells": report.records(labels)}
    return {"trend.json": _dump_json(doc), "trend.txt": report.table(labels)}


def _load_scores(wd: Workdir, graph: SkillGraph) -> list[cen.CentralityScores]:
    out = []
    for measure in wd.config.measures:
        rows = list(csv.reader(io.StringIO(wd.read(f"centrality_{measure}.csv"))))[1:]
        by_name = {name: float(score) for name, score in rows}
        out.append(cen.CentralityScores(measure, graph.nodes, tuple(by_name[n] for n in graph.nodes)))
    return out


def _export(wd: Workdir) -> dict[str, str]:
    graph = wd.graph()
    partition = wd.partition()
    scores = _load_scores(wd, graph)
    communities = json.loads(wd.read("communities.json"))
    profiles = [
        CommunityProfile(**{**p, "top_members": tuple(p["top_members"])}) for p in communities["profiles"]
    ]
    rankings = [cen.top_k(s, wd.config.top) for s in scores]
    report = report_document(macro_measures(graph), profiles, rankings, communities["modularity"])
    return {"graph.gexf": gexf_document(graph, partition, scores), "report.json": report}


def _none(cfg):
    return []


def _labels(cfg):
    return [cfg.labels] if cfg.labels else []


_centrality_params = lambda c: {
    "measures": list(c.measures), "normalized": c.normalized, "weighted_paths": c.weighted_paths,
    "tolerance": c.tolerance, "max_iterations": c.max_iterations, "top": c.top,
}

STAGES: dict[str, Stage] = {
    s.name: s
    for s in [
        Stage("ingest", 10, (), _none,
              lambda c: ["lexicon.txt", "corpus.jsonl", "ingest.json"],
              lambda c: [c.lexicon, c.corpus], lambda c: {}, _ingest),
        Stage("build", 11, ("ingest",), lambda c: ["lexicon.txt", "corpus.jsonl"],
              lambda c: ["matrix.csv", "match_stats.json"], _none, lambda c: {}, _build),
        Stage("graph", 12, ("build",), lambda c: ["lexicon.txt", "corpus.jsonl", "matrix.csv"],
              lambda c: ["nodes.csv", "edges.csv"], _none, lambda c: {}, _graph),
        Stage("stats", 13, ("graph",), lambda c: ["nodes.csv", "edges.csv"],
              lambda c: ["stats.json", "stats.txt"], _none, lambda c: {}, _stats),
        Stage("centrality", 14, ("graph",), lambda c: ["nodes.csv", "edges.csv"],
              lambda c: [f"centrality_{m}.csv" for m in c.measures] + ["centrality_top.csv", "centrality_top.txt"],
              _none, _centrality_params, _centrality),
        Stage("communities", 15, ("graph",), lambda c: ["nodes.csv", "edges.csv"],
              lambda c: ["communities.csv", "communities.json", "communities.txt"],
              _labels, lambda c: {"seed": c.seed}, _communities),
        Stage("coverage", 16, ("build", "communities"),
              lambda c: ["lexicon.txt", "corpus.jsonl", "matrix.csv", "communities.csv"],
              lambda c: ["coverage.json", "coverage.txt"], _labels, lambda c: {}, _coverage),
        Stage("trend", 17, ("build", "communities"),
              lambda c: ["lexicon.txt", "corpus.jsonl", "matrix.csv", "communities.csv"],
              lambda c: ["trend.json", "trend.txt"], _labels, lambda c: {}, _trend),
        Stage("export", 18, ("stats", "centrality", "communities"),
              lambda c: ["nodes.csv", "edges.csv", "communities.csv", "communities.json"]
              + [f"centrality_{m}.csv" for m in c.measures],
              lambda c: ["graph.gexf", "report.json"], _none, _centrality_params, _export),
    ]
}

ORDER = tuple(STAGES)

EXIT_CODES = {name: stage.exit_code for name, stage in STAGES.items()}


class Pipeline:
    def __init__(self, config: PipelineConfig):
        self.config = config
        self.workdir = Workdir(config.workdir, config)
        self._done: set[str] = set()
        self.ran: list[str] = []

    def _manifest(self) -> dict:
        try:
            return json.loads(self.workdir.read(MANIFEST))
        except (OSError, ValueError):
            return {}

    def _save_manifest(self, manifest: dict) -> None:
        self.workdir.path(MANIFEST).write_text(_dump_json(manifest), encoding="utf-8")

    def _input_digest(self, stage: Stage) -> str:
        h = hashlib.sha256()
        for name in stage.reads(self.config):
            h.update(name.encode() + b"\0" + _sha(self.workdir.path(name).read_bytes()).encode() + b"\n")
        for path in stage.external(self.config):
            h.update(str(path).encode() + b"\0" + _sha(Path(path).read_bytes()).encode() + b"\n")
        h.update(json.dumps(stage.params(self.config), sort_keys=True).encode())
        return h.hexdigest()

    def _fresh(self, stage: Stage, digest: str, manifest: dict) -> bool:
        entry = manifest.get(stage.name)
        if not entry or entry.get("inputs") != digest:
            return False
        outputs = entry.get("outputs", {})
        if sorted(outputs) != sorted(stage.outputs(self.config)):
            return False
        for name, sha in outputs.items():
            p = self.workdir.path(name)
            if not p.is_file() or _sha(p.read_bytes()) != sha:
                return False
        return True

    def ensure(self, name: str) -> None:
        """Bring ``name`` and everything it depends on up to date."""
        if name in self._done:
            return
        stage = STAGES[name]
        for dep in stage.deps:
            self.ensure(dep)
        try:
            digest = self._input_digest(stage)
        except OSError as exc:
            raise StageError(name, f"missing input: {exc}") from exc
        manifest = self._manifest()
        if self._fresh(stage, digest, manifest):
            logger.info("%s: up to date", name)
        else:
            logger.info("%s: running", name)
            try:
                outputs = stage.run(self.workdir)
            except StageError:
                raise
            except (SkillNetError, ValueError, OSError, KeyError) as exc:
                raise StageError(name, str(exc)) from exc
            for fname, text in outputs.items():
                self.workdir.path(fname).write_text(text, encoding="utf-8")
            manifest[name] = {
                "inputs": digest,
                "outputs": {f: _sha(t.encode("utf-8")) for f, t in sorted(outputs.items())},
            }
            self._save_manifest(manifest)
            self.ran.append(name)
        self._done.add(name)

    def run(self, targets: tuple[str, ...] = ORDER) -> None:
        for name in targets:
            self.ensure(name)


def validate_inputs(config: PipelineConfig) -> None:
    """Check ingest inputs before anything is written."""
    for label, path in (("lexicon", config.lexicon), ("corpus", config.corpus)):
        if path is None:
            raise StageError("ingest", f"no {label} path configured")
        if not Path(path).is_file():
            raise StageError("ingest", f"{label} file not found: {path}")
    if config.labels is not None and not Path(config.labels).is_file():
        raise StageError("communities", f"label file not found: {config.labels}")


@contextmanager
def locked(root: Path):
    root.mkdir(parents=True, exist_ok=True)
    lock = root / LOCK
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise WorkdirLocked(f"workdir {root} is in use (remove {lock} if stale)") from None
    try:
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        yield
    finally:
        lock.unlink(missing_ok=True)


def run_pipeline(config: PipelineConfig, targets: tuple[str, ...] = ORDER) -> Pipeline:
    """Validate, lock the workdir, record the config and run ``targets``.

    Raises:
        StageError: carrying the failing stage and its exit code.
        WorkdirLocked: if another run owns the workdir.
    """
    validate_inputs(config)
    root = Path(config.workdir)
    pipeline = Pipeline(config)
    with locked(root):
        (root / CONFIG_COPY).write_text(config.dumps(), encoding="utf-8")
        pipeline.run(targets)
    return pipeline


def declared_artifacts(config: PipelineConfig) -> set[str]:
    names = {MANIFEST, CONFIG_COPY}
    for stage in STAGES.values():
        names.update(stage.outputs(config))
    return names
