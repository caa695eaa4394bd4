"""Graph export for external visualization tools and report bundling."""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from pathlib import Path

from .centrality import CentralityRanking, CentralityScores
from .community import Partition
from .graph import MacroStats, SkillGraph, macro_measures
from .market import CommunityProfile

FORMATS = ("gexf", "edgelist-csv", "report-json")

GEXF_NS = "http://gexf.net/1.3"


def gexf_document(
    graph: SkillGraph,
    partition: Partition | None = None,
    scores: list[CentralityScores] | None = None,
) -> str:
    """GEXF 1.3 text with community and centrality node attributes."""
    scores = scores or []
    ET.register_namespace("", GEXF_NS)
    root = ET.Element(f"{{{GEXF_NS}}}gexf", version="1.3")
    meta = ET.SubElement(root, f"{{{GEXF_NS}}}meta")
    ET.SubElement(meta, f"{{{GEXF_NS}}}creator").text = "skillnet"
    g = ET.SubElement(root, f"{{{GEXF_NS}}}graph", defaultedgetype="undirected", mode="static")

    attrs = ET.SubElement(g, f"{{{GEXF_NS}}}attributes", {"class": "node"})
    columns = [("occurrences", "integer")]
    if partition is not None:
        columns.append(("community", "integer"))
    columns += [(s.measure, "double") for s in scores]
    for i, (title, kind) in enumerate(columns):
        ET.SubElement(attrs, f"{{{GEXF_NS}}}attribute", id=str(i), title=title, type=kind)

    nodes_el = ET.SubElement(g, f"{{{GEXF_NS}}}nodes")
    for v, name in enumerate(graph.nodes):
        node = ET.SubElement(nodes_el, f"{{{GEXF_NS}}}node", id=str(v), label=name)
        values = ET.SubElement(node, f"{{{GEXF_NS}}}attvalues")
        row = [str(graph.occurrences[v])]
        if partition is not None:
            row.append(str(partition.assignment[v]))
        row += [repr(float(s.scores[v])) for s in scores]
        for i, value in enumerate(row):
            ET.SubElement(values, f"{{{GEXF_NS}}}attvalue", {"for": str(i), "value": value})

    edges_el = ET.SubElement(g, f"{{{GEXF_NS}}}edges")
    for k, (u, v, w) in enumerate(graph.edges()):
        ET.SubElement(
            edges_el, f"{{{GEXF_NS}}}edge",
            id=str(k), source=str(u), target=str(v), weight=str(w),
        )

    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def report_document(
    stats: MacroStats,
    profiles: list[CommunityProfile] | None = None,
    rankings: list[CentralityRanking] | None = None,
    modularity: float | None = None,
) -> str:
    doc = {
        "macro_measures": stats.as_dict(),
        "modularity": modularity,
        "communities": [p.as_dict() for p in profiles or []],
        "rankings": {
            r.measure: [{"rank": k, "skill": s, "score": x} for k, s, x in r.rows]
            for r in rankings or []
        },
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def export_graph(
    graph: SkillGraph,
    fmt: str,
    path: str | Path,
    partition: Partition | None = None,
    scores: list[CentralityScores] | None = None,
    *,
    stats: MacroStats | None = None,
    profiles: list[CommunityProfile] | None = None,
    rankings: list[CentralityRanking] | None = None,
) -> Path:
    """Write ``graph`` to ``path`` as one of :data:`FORMATS`."""
    if fmt == "gexf":
        text = gexf_document(graph, partition, scores)
    elif fmt == "edgelist-csv":
        text = graph.dumps_edges()
    elif fmt == "report-json":
        text = report_document(
            stats or macro_measures(graph),
            profiles,
            rankings,
            partition.modularity if partition is not None else None,
        )
    else:
        raise ValueError(f"unknown export format {fmt!r}; supported: {', '.join(FORMATS)}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
