"""Degree, betweenness, closeness and eigenvector centrality.

Path-based measures use hop counts unless ``weighted_paths`` is set, in which
case an edge of weight ``w`` has length ``1 / w``.
"""

from __future__ import annotations

import csv
import heapq
import io
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, GraphError
from .graph import SkillGraph

MEASURES = ("degree", "betweenness", "closeness", "eigenvector")

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 1000

# Relative slack when comparing weighted path lengths for equality.
_PATH_EPS = 1e-12


@dataclass(frozen=True)
class CentralityScores:
    measure: str
    nodes: tuple[str, ...]
    scores: tuple[float, ...]
    normalized: bool = False

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.nodes, self.scores))

    def __getitem__(self, name: str) -> float:
        return self.scores[self.nodes.index(name)]

    def dumps(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["skill", "score"])
        for name, score in zip(self.nodes, self.scores):
            writer.writerow([name, repr(float(score))])
        return buf.getvalue()


def degree_centrality(graph: SkillGraph, normalized: bool = False) -> CentralityScores:
    scores = [float(graph.degree(v)) for v in range(graph.n)]
    if normalized and graph.n > 1:
        scores = [s / (graph.n - 1) for s in scores]
    return CentralityScores("degree", graph.nodes, tuple(scores), normalized and graph.n > 1)


def _bfs(graph: SkillGraph, s: int):
    """Hop-count single-source shortest paths.

    Returns nodes in order of non-decreasing distance, predecessor lists,
    path counts and distances (-1 for unreachable).
    """
    n = graph.n
    dist = [-1] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    dist[s] = 0
    sigma[s] = 1
    order = []
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v] + 1
        for w in graph.adjacency[v]:
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
            if dist[w] == dv:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma, dist


def _dijkstra(graph: SkillGraph, s: int):
    """Same contract as :func:`_bfs` with edge length ``1 / weight``."""
    n = graph.n
    dist = [math.inf] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    done = [False] * n
    dist[s] = 0.0
    sigma[s] = 1
    order = []
    heap = [(0.0, s)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        order.append(v)
        for w, weight in graph.adjacency[v].items():
            if done[w]:
                continue
            nd = d + 1.0 / weight
            if nd < dist[w] * (1 - _PATH_EPS):
                dist[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (nd, w))
            elif abs(nd - dist[w]) <= _PATH_EPS * max(nd, dist[w]):
                sigma[w] += sigma[v]
                preds[w].append(v)
    dist = [-1 if math.isinf(d) else d for d in dist]
    return order, preds, sigma, dist


def betweenness_centrality(
    graph: SkillGraph, normalized: bool = False, weighted_paths: bool = False
) -> CentralityScores:
    """Shortest-path betweenness by dependency accumulation over every source.

    Unnormalized scores count each unordered pair once.
    """
    sssp = _dijkstra if weighted_paths else _bfs
    n = graph.n
    between = [0.0] * n
    for s in range(n):
        order, preds, sigma, _ = sssp(graph, s)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                between[w] += delta[w]
    scale = 0.5
    if normalized and n > 2:
        scale *= 2.0 / ((n - 1) * (n - 2))
    return CentralityScores(
        "betweenness", graph.nodes, tuple(b * scale for b in between), normalized and n > 2
    )


def closeness_centrality(graph: SkillGraph, weighted_paths: bool = False) -> CentralityScores:
    """Reachable count divided by the distance sum to the reachable nodes.

    A node that reaches nothing scores 0.
    """
    sssp = _dijkstra if weighted_paths else _bfs
    scores = []
    for v in range(graph.n):
        _, _, _, dist = sssp(graph, v)
        reach = [d for d in dist if d > 0]
        scores.append(len(reach) / sum(reach) if reach else 0.0)
    return CentralityScores("closeness", graph.nodes, tuple(scores))


def eigenvector_centrality(
    graph: SkillGraph,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> CentralityScores:
    """Principal eigenvector of the weighted adjacency matrix.

    Power iteration on ``A + I`` from the uniform vector over non-isolated
    nodes, rescaled to unit L2 norm after every step. Isolated nodes score 0.

    Raises:
        GraphError: if the graph has no edges.
        ConvergenceError: if successive iterates still differ by ``tolerance``
            or more (max-abs) after ``max_iterations`` steps.
    """
    if graph.edge_count == 0:
        raise GraphError("eigenvector centrality needs at least one edge")
    adj = graph.to_sparse()
    active = np.array([graph.degree(v) > 0 for v in range(graph.n)])
    x = active / np.sqrt(active.sum())
    residual = math.inf
    for it in range(1, max_iterations + 1):
        y = adj @ x + x
        y /= np.linalg.norm(y)
        residual = float(np.max(np.abs(y - x)))
        x = y
        if residual < tolerance:
            return CentralityScores("eigenvector", graph.nodes, tuple(float(v) for v in x))
    raise ConvergenceError(
        f"power iteration did not converge in {max_iterations} iterations "
        f"(last change {residual:.3e})",
        residual=residual,
        iterations=max_iterations,
    )


def compute(
    graph: SkillGraph,
    measure: str,
    normalized: bool = False,
    weighted_paths: bool = False,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> CentralityScores:
    if measure == "degree":
        return degree_centrality(graph, normalized)
    if measure == "betweenness":
        return betweenness_centrality(graph, normalized, weighted_paths)
    if measure == "closeness":
        return closeness_centrality(graph, weighted_paths)
    if measure == "eigenvector":
        return eigenvector_centrality(graph, tolerance, max_iterations)
    raise ValueError(f"unknown measure {measure!r}; choose from {', '.join(MEASURES)}")


@dataclass(frozen=True)
class CentralityRanking:
    measure: str
    rows: tuple[tuple[int, str, float], ...]
    truncated: bool = False
    """True when more rows were requested than the graph has nodes."""


def top_k(scores: CentralityScores, k: int) -> CentralityRanking:
    """Highest ``k`` scores; ties go to the alphabetically first name."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ranked = sorted(zip(scores.nodes, scores.scores), key=lambda p: (-p[1], p[0].lower()))
    rows = tuple((i + 1, name, score) for i, (name, score) in enumerate(ranked[:k]))
    return CentralityRanking(scores.measure, rows, truncated=k > len(ranked))


def ranking_table(rankings: list[CentralityRanking]) -> str:
    """Side-by-side rank table, one column of skill names per measure."""
    depth = max((len(r.rows) for r in rankings), default=0)
    header = ["Rank"] + [f"{r.measure.capitalize()} centrality" for r in rankings]
    body = []
    for i in range(depth):
        body.append([str(i + 1)] + [r.rows[i][1] if i < len(r.rows) else "" for r in rankings])
    widths = [max(len(row[c]) for row in [header] + body) for c in range(len(header))]
    fmt = lambda row: "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
    lines = [fmt(header), fmt(["-" * w for w in widths])] + [fmt(row) for row in body]
    return "\n".join(lines) + "\n"


def ranking_csv(rankings: list[CentralityRanking]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["measure", "rank", "skill", "score"])
    for r in rankings:
        for rank, name, score in r.rows:
            writer.writerow([r.measure, rank, name, repr(float(score))])
    return buf.getvalue()
