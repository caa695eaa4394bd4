"""Weighted modularity and Louvain community detection.

The Louvain implementation works on :class:`Level`, a weighted graph that may
carry self-loops, so that aggregated community graphs and the original skill
graph share one code path. A self-loop of weight ``w`` counts once toward the
total edge weight and twice toward its node's degree.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import GraphError
from .graph import SkillGraph

DEFAULT_SEED = 42

# Gains within this margin count as ties.
_GAIN_EPS = 1e-12


@dataclass(frozen=True)
class Partition:
    nodes: tuple[str, ...]
    assignment: tuple[int, ...]
    modularity: float = float("nan")

    def __post_init__(self):
        if len(self.nodes) != len(self.assignment):
            raise ValueError("assignment must cover every node exactly once")
        if self.assignment:
            ids = set(self.assignment)
            if ids != set(range(len(ids))):
                raise ValueError("community ids must be contiguous from 0")

    @property
    def community_count(self) -> int:
        return len(set(self.assignment))

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.nodes, self.assignment))

    def members(self) -> list[list[int]]:
        groups: list[list[int]] = [[] for _ in range(self.community_count)]
        for v, c in enumerate(self.assignment):
            groups[c].append(v)
        return groups

    def dumps(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["skill", "community_id"])
        writer.writerows(zip(self.nodes, self.assignment))
        return buf.getvalue()

    @classmethod
    def from_labels(cls, nodes: Sequence[str], labels: Sequence) -> "Partition":
        """Relabel arbitrary hashable labels to ids in order of first appearance."""
        ids: dict = {}
        assignment = tuple(ids.setdefault(lab, len(ids)) for lab in labels)
        return cls(tuple(nodes), assignment)


def parse_partition(text: str) -> Partition:
    reader = csv.reader(io.StringIO(text))
    if next(reader, None) != ["skill", "community_id"]:
        raise ValueError("unexpected assignment header")
    rows = list(reader)
    return Partition(tuple(r[0] for r in rows), tuple(int(r[1]) for r in rows))


class Level:
    """Weighted undirected graph with optional self-loops."""

    def __init__(self, adjacency: list[dict[int, float]], loops: list[float]):
        self.adjacency = adjacency
        self.loops = loops
        self.degree = [sum(a.values()) + 2 * l for a, l in zip(adjacency, loops)]
        self.total = sum(self.degree) / 2

    @classmethod
    def from_graph(cls, graph: SkillGraph) -> "Level":
        return cls([dict(a) for a in graph.adjacency], [0] * graph.n)

    @property
    def n(self) -> int:
        return len(self.loops)

    def aggregate(self, assignment: Sequence[int]) -> "Level":
        """Collapse each community (ids must be dense) into one node."""
        k = max(assignment) + 1
        adjacency: list[dict[int, float]] = [{} for _ in range(k)]
        loops = [0] * k
        for u, c in enumerate(assignment):
            loops[c] += self.loops[u]
            for v, w in self.adjacency[u].items():
                d = assignment[v]
                if d == c:
                    if u < v:
                        loops[c] += w
                else:
                    adjacency[c][d] = adjacency[c].get(d, 0) + w
        return Level(adjacency, loops)


def level_modularity(level: Level, assignment: Sequence[int]) -> float:
    """Q = sum over communities of W_in/W - (S/2W)^2, recomputed from scratch."""
    if level.total == 0:
        raise GraphError("modularity is undefined for a graph without edges")
    internal: dict[int, float] = {}
    strength: dict[int, float] = {}
    for u, c in enumerate(assignment):
        strength[c] = strength.get(c, 0) + level.degree[u]
        inside = level.loops[u]
        for v, w in level.adjacency[u].items():
            if u < v and assignment[v] == c:
                inside += w
        internal[c] = internal.get(c, 0) + inside
    m = level.total
    return sum(internal[c] / m - (strength[c] / (2 * m)) ** 2 for c in strength)


def modularity(graph: SkillGraph, partition: Partition | Sequence[int]) -> float:
    """Weighted modularity (resolution 1) of ``partition`` on ``graph``.

    Raises:
        GraphError: if the graph has no edges.
    """
    assignment = partition.assignment if isinstance(partition, Partition) else partition
    if len(assignment) != graph.n:
        raise ValueError("partition does not cover the graph")
    return level_modularity(Level.from_graph(graph), assignment)


MoveObserver = Callable[[Level, list, int, int, int, float], None]


def _move_nodes(
    level: Level, rng: random.Random, on_move: MoveObserver | None = None
) -> tuple[list[int], bool]:
    """Local-move phase from the singleton partition.

    Returns the assignment and whether any node moved.
    """
    n = level.n
    m2 = 2 * level.total
    comm = list(range(n))
    tot = list(level.degree)
    order = list(range(n))
    rng.shuffle(order)
    moved_any = False

    while True:
        moved = False
        for v in order:
            kv = level.degree[v]
            if kv == 0:
                continue
            home = comm[v]
            links: dict[int, float] = {}
            for u, w in level.adjacency[v].items():
                links[comm[u]] = links.get(comm[u], 0) + w
            tot[home] -= kv

            # gain of inserting v into community c, up to a constant shared by all c
            def gain(c):
                return links.get(c, 0) / level.total - tot[c] * kv / (m2 * level.total)

            stay = gain(home)
            best, best_gain = home, stay
            for c in sorted(links):
                if c == home:
                    continue
                g = gain(c)
                if g > best_gain + _GAIN_EPS:
                    best, best_gain = c, g
            if best_gain - stay <= _GAIN_EPS:
                best = home

            tot[best] += kv
            if best != home:
                comm[v] = best
                moved = True
                if on_move is not None:
                    on_move(level, comm, v, home, best, best_gain - stay)
        if not moved:
            return comm, moved_any
        moved_any = True


def _dense(labels: Sequence[int]) -> list[int]:
    ids: dict[int, int] = {}
    for c in sorted(set(labels)):
        ids[c] = len(ids)
    return [ids[c] for c in labels]


def louvain(
    graph: SkillGraph, seed: int = DEFAULT_SEED, on_move: MoveObserver | None = None
) -> Partition:
    """Two-phase greedy modularity maximization.

    Nodes are visited in an order shuffled by ``seed``; each moves to the
    neighboring community with the largest strictly positive gain (ties keep
    the current community, otherwise the lowest id wins). Communities are then
    aggregated into super-nodes and the process repeats until a level makes no
    move. ``on_move(level, assignment, node, src, dst, gain)`` is called after
    every accepted move.

    Raises:
        GraphError: if the graph has no edges.
    """
    if graph.edge_count == 0:
        raise GraphError("community detection needs at least one edge")
    rng = random.Random(seed)
    level = Level.from_graph(graph)
    membership = list(range(graph.n))
    while True:
        comm, moved = _move_nodes(level, rng, on_move)
        if not moved:
            break
        comm = _dense(comm)
        membership = [comm[c] for c in membership]
        level = level.aggregate(comm)

    partition = Partition.from_labels(graph.nodes, membership)
    return Partition(partition.nodes, partition.assignment, modularity(graph, partition))


def singleton_partition(graph: SkillGraph) -> Partition:
    return Partition(graph.nodes, tuple(range(graph.n)))


def single_community(graph: SkillGraph) -> Partition:
    return Partition(graph.nodes, (0,) * graph.n)
