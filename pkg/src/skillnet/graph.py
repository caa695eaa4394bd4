"""Weighted skill co-occurrence graph and its macro measures."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import asdict, dataclass
from typing import Iterable, Iterator

import numpy as np
import scipy.sparse as sp

from .matrix import AdSkillMatrix

logger = logging.getLogger(__name__)

# Ads with more distinct skills than this trigger a warning (k*(k-1)/2 pairs).
PAIR_BLOWUP_WARNING = 200


@dataclass(frozen=True, eq=False)
class SkillGraph:
    """Undirected integer-weighted graph without self-loops.

    Node ``i`` is ``nodes[i]``; ``adjacency[i]`` maps neighbor id to edge
    weight and is symmetric. Treat every container as read-only.
    """

    nodes: tuple[str, ...]
    adjacency: tuple[dict[int, int], ...]
    occurrences: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.nodes) == len(self.adjacency) == len(self.occurrences)):
            raise ValueError("nodes, adjacency and occurrences differ in length")

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str, int]],
        nodes: Iterable[str] | None = None,
        occurrences: dict[str, int] | None = None,
    ) -> "SkillGraph":
        """Build from ``(a, b, weight)`` triples.

        ``nodes`` fixes the node order and may include isolated nodes; nodes
        only seen in ``edges`` are appended in first-seen order.
        """
        order: list[str] = list(nodes) if nodes is not None else []
        index = {name: i for i, name in enumerate(order)}
        if len(index) != len(order):
            raise ValueError("duplicate node names")
        adjacency: list[dict[int, int]] = [{} for _ in order]

        def node_id(name: str) -> int:
            if name not in index:
                index[name] = len(order)
                order.append(name)
                adjacency.append({})
            return index[name]

        for a, b, w in edges:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            w = int(w)
            if w < 1:
                raise ValueError(f"edge ({a!r}, {b!r}) has non-positive weight {w}")
            u, v = node_id(a), node_id(b)
            if v in adjacency[u]:
                raise ValueError(f"duplicate edge ({a!r}, {b!r})")
            adjacency[u][v] = w
            adjacency[v][u] = w

        occ = occurrences or {}
        return cls(tuple(order), tuple(adjacency), tuple(int(occ.get(n, 0)) for n in order))

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def total_weight(self) -> int:
        return sum(sum(a.values()) for a in self.adjacency) // 2

    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.nodes)}

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def strength(self, v: int) -> int:
        return sum(self.adjacency[v].values())

    def weight(self, u: int, v: int) -> int:
        return self.adjacency[u].get(v, 0)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(u, v, weight)`` once per edge with ``u < v``."""
        for u, nbrs in enumerate(self.adjacency):
            for v in sorted(nbrs):
                if u < v:
                    yield u, v, nbrs[v]

    def named_edges(self) -> list[tuple[str, str, int]]:
        """Edges as names with the lexicographically smaller name first, sorted."""
        out = []
        for u, v, w in self.edges():
            a, b = sorted((self.nodes[u], self.nodes[v]))
            out.append((a, b, w))
        out.sort()
        return out

    def to_sparse(self) -> sp.csr_array:
        rows, cols, vals = [], [], []
        for u, nbrs in enumerate(self.adjacency):
            for v, w in nbrs.items():
                rows.append(u)
                cols.append(v)
                vals.append(w)
        return sp.csr_array(
            (np.array(vals, dtype=float), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
            shape=(self.n, self.n),
        )

    def relabel(self, order: list[int]) -> "SkillGraph":
        """Return the same graph with node ``order[k]`` moved to position ``k``."""
        new_id = {old: k for k, old in enumerate(order)}
        adjacency = tuple(
            {new_id[v]: w for v, w in self.adjacency[old].items()} for old in order
        )
        return SkillGraph(
            tuple(self.nodes[o] for o in order),
            adjacency,
            tuple(self.occurrences[o] for o in order),
        )

    def dumps_edges(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["skill_a", "skill_b", "weight"])
        writer.writerows(self.named_edges())
        return buf.getvalue()

    def dumps_nodes(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["skill", "occurrence_count"])
        writer.writerows(zip(self.nodes, self.occurrences))
        return buf.getvalue()


def parse_graph(edges_text: str, nodes_text: str | None = None) -> SkillGraph:
    """Inverse of :meth:`SkillGraph.dumps_edges` / :meth:`SkillGraph.dumps_nodes`.

    Without a node file, node order is first appearance in the edge list and
    occurrence counts are zero.
    """
    nodes = None
    occurrences = None
    if nodes_text is not None:
        reader = csv.reader(io.StringIO(nodes_text))
        if next(reader, None) != ["skill", "occurrence_count"]:
            raise ValueError("unexpected node list header")
        rows = list(reader)
        nodes = [r[0] for r in rows]
        occurrences = {r[0]: int(r[1]) for r in rows}
    reader = csv.reader(io.StringIO(edges_text))
    if next(reader, None) != ["skill_a", "skill_b", "weight"]:
        raise ValueError("unexpected edge list header")
    edges = [(a, b, int(w)) for a, b, w in reader]
    return SkillGraph.from_edges(edges, nodes=nodes, occurrences=occurrences)


def build_graph(matrix: AdSkillMatrix) -> SkillGraph:
    """Co-occurrence graph: edge weight = number of ads containing both skills.

    Nodes are the skills occurring at least once, kept in lexicon order.
    """
    presence = matrix.presence()
    per_ad = np.diff(presence.indptr)
    for i in np.flatnonzero(per_ad > PAIR_BLOWUP_WARNING):
        logger.warning(
            "ad %s holds %d skills (%d pairs)",
            matrix.ad_ids[i], per_ad[i], per_ad[i] * (per_ad[i] - 1) // 2,
        )

    totals = matrix.column_totals()
    kept = np.flatnonzero(totals > 0)
    b = presence[:, kept]
    co = (b.T @ b).tocoo()

    adjacency: list[dict[int, int]] = [{} for _ in kept]
    for u, v, w in zip(co.row, co.col, co.data):
        if u != v:
            adjacency[u][int(v)] = int(w)
    return SkillGraph(
        tuple(matrix.skills[c] for c in kept),
        tuple(adjacency),
        tuple(int(totals[c]) for c in kept),
    )


@dataclass(frozen=True)
class MacroStats:
    node_count: int
    edge_count: int
    average_degree: float
    density: float

    def as_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        rows = [
            ("Number of nodes", str(self.node_count)),
            ("Number of Edges", str(self.edge_count)),
            ("Average Degree", f"{self.average_degree:.3f}"),
            ("Density", f"{self.density:.3f}"),
        ]
        width = max(len(r[0]) for r in rows)
        lines = [f"{'Measure'.ljust(width)}  Value", f"{'-' * width}  -----"]
        lines += [f"{k.ljust(width)}  {v}" for k, v in rows]
        return "\n".join(lines) + "\n"


def macro_measures(graph: SkillGraph) -> MacroStats:
    n = graph.n
    m = graph.edge_count
    avg = 2 * m / n if n else 0.0
    density = 2 * m / (n * (n - 1)) if n >= 2 else 0.0
    return MacroStats(n, m, avg, density)
