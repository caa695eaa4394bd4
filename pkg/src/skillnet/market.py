"""Community profiles, ad coverage ratios and yearly coverage trends."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .community import Partition
from .errors import CorpusError
from .graph import SkillGraph
from .lexicon import Corpus
from .matrix import AdSkillMatrix

logger = logging.getLogger(__name__)

DEFAULT_TOP_MEMBERS = 15


def load_labels(path: str | Path) -> dict[int, str]:
    """Read a ``community_id,label`` file (header optional)."""
    labels: dict[int, str] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                cid = int(row[0])
            except ValueError:
                continue  # header
            labels[cid] = ",".join(row[1:]).strip()
    return labels


@dataclass(frozen=True)
class CommunityProfile:
    community_id: int
    label: str | None
    member_count: int
    percent_of_total: float
    top_members: tuple[str, ...]

    def as_dict(self) -> dict:
        d = asdict(self)
        d["top_members"] = list(self.top_members)
        return d


def community_profiles(
    graph: SkillGraph,
    partition: Partition,
    labels: dict[int, str] | None = None,
    top: int = DEFAULT_TOP_MEMBERS,
) -> list[CommunityProfile]:
    """One profile per community, largest first.

    ``top_members`` are the community's highest-degree skills, ties broken by
    name. Labels for ids not present in ``partition`` are dropped with a
    warning.
    """
    labels = dict(labels or {})
    groups = partition.members()
    for cid in sorted(set(labels) - set(range(len(groups)))):
        logger.warning("label %r refers to unknown community %d; dropped", labels[cid], cid)
        del labels[cid]

    profiles = []
    for cid, members in enumerate(groups):
        ranked = sorted(members, key=lambda v: (-graph.degree(v), graph.nodes[v].lower()))
        profiles.append(
            CommunityProfile(
                community_id=cid,
                label=labels.get(cid),
                member_count=len(members),
                percent_of_total=len(members) / graph.n * 100,
                top_members=tuple(graph.nodes[v] for v in ranked[:top]),
            )
        )
    profiles.sort(key=lambda p: (-p.member_count, p.community_id))
    return profiles


def profiles_table(profiles: list[CommunityProfile]) -> str:
    header = ["Community", "Label", "Number of Members", "Percent of total", "The main members"]
    body = [
        [
            str(p.community_id),
            p.label or "",
            str(p.member_count),
            f"{p.percent_of_total:.1f}",
            ", ".join(p.top_members),
        ]
        for p in profiles
    ]
    return _aligned(header, body)


def _aligned(header: list[str], body: list[list[str]]) -> str:
    widths = [max(len(row[c]) for row in [header] + body) for c in range(len(header))]
    fmt = lambda row: "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
    return "\n".join([fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in body]) + "\n"


def _community_hits(matrix: AdSkillMatrix, partition: Partition) -> np.ndarray:
    """Boolean ads-by-communities array: does the ad mention any member skill."""
    column_of = {s: j for j, s in enumerate(matrix.skills)}
    k = partition.community_count
    membership = np.zeros((len(matrix.skills), k), dtype=np.int64)
    for name, cid in zip(partition.nodes, partition.assignment):
        if name not in column_of:
            raise ValueError(f"partition skill {name!r} is not a matrix column")
        membership[column_of[name], cid] = 1
    return (matrix.presence() @ membership) > 0


@dataclass(frozen=True)
class CoverageReport:
    ads: int
    covered_ads: tuple[int, ...]
    any_covered: int
    """Ads containing at least one skill of any community."""

    @property
    def ratios(self) -> tuple[float, ...]:
        return tuple(c / self.ads for c in self.covered_ads)

    @property
    def union_ratio(self) -> float:
        return self.any_covered / self.ads

    def records(self, labels: dict[int, str] | None = None) -> list[dict]:
        labels = labels or {}
        return [
            {"community_id": c, "label": labels.get(c), "covered_ads": n, "ads": self.ads, "ratio": n / self.ads}
            for c, n in enumerate(self.covered_ads)
        ]

    def table(self, labels: dict[int, str] | None = None) -> str:
        labels = labels or {}
        body = [
            [str(c), labels.get(c, ""), str(n), f"{100 * n / self.ads:.1f}%"]
            for c, n in enumerate(self.covered_ads)
        ]
        body.append(["any", "", str(self.any_covered), f"{100 * self.union_ratio:.1f}%"])
        return _aligned(["Community", "Label", "Covered ads", "Ratio"], body)


def ad_coverage(matrix: AdSkillMatrix, partition: Partition) -> CoverageReport:
    """Per community, count ads mentioning at least one of its skills.

    An ad counts for every community it touches.
    """
    if not matrix.ad_ids:
        raise CorpusError("coverage needs at least one ad")
    hits = _community_hits(matrix, partition)
    return CoverageReport(
        ads=len(matrix.ad_ids),
        covered_ads=tuple(int(x) for x in hits.sum(axis=0)),
        any_covered=int(np.count_nonzero(hits.any(axis=1))),
    )


@dataclass(frozen=True)
class TrendReport:
    years: tuple[int, ...]
    dated_ads: tuple[int, ...]
    """Denominator per year."""
    covered: tuple[tuple[int, ...], ...]
    """``covered[c][j]``: dated ads of ``years[j]`` touching community ``c``."""

    def cell(self, community: int, year: int) -> float | None:
        j = self.years.index(year)
        if self.dated_ads[j] == 0:
            return None
        return self.covered[community][j] / self.dated_ads[j]

    def grid(self) -> list[list[float | None]]:
        return [[self.cell(c, y) for y in self.years] for c in range(len(self.covered))]

    def records(self, labels: dict[int, str] | None = None) -> list[dict]:
        labels = labels or {}
        out = []
        for c in range(len(self.covered)):
            for j, y in enumerate(self.years):
                out.append(
                    {
                        "community_id": c,
                        "label": labels.get(c),
                        "year": y,
                        "covered_ads": self.covered[c][j],
                        "dated_ads": self.dated_ads[j],
                        "ratio": self.cell(c, y),
                    }
                )
        return out

    def table(self, labels: dict[int, str] | None = None) -> str:
        labels = labels or {}
        header = ["Community"] + [str(y) for y in self.years]
        body = []
        for c, row in enumerate(self.grid()):
            name = labels.get(c) or str(c)
            body.append([name] + ["-" if r is None else f"{100 * r:.1f}%" for r in row])
        body.append(["dated ads"] + [str(n) for n in self.dated_ads])
        return _aligned(header, body)


def yearly_trend(corpus: Corpus, matrix: AdSkillMatrix, partition: Partition) -> TrendReport:
    """Coverage ratio per community and posting year over dated ads only.

    Years without dated ads stay in the grid with an absent cell.

    Raises:
        CorpusError: if no ad carries a date.
    """
    if tuple(ad.id for ad in corpus.ads) != matrix.ad_ids:
        raise ValueError("corpus and matrix rows are not aligned")
    span = corpus.year_range
    if span is None:
        raise CorpusError("yearly trend needs at least one dated ad")
    years = tuple(range(span[0], span[1] + 1))
    hits = _community_hits(matrix, partition)
    k = partition.community_count
    dated = [0] * len(years)
    covered = [[0] * len(years) for _ in range(k)]
    for i, ad in enumerate(corpus.ads):
        if ad.year is None:
            continue
        j = ad.year - span[0]
        dated[j] += 1
        for c in np.flatnonzero(hits[i]):
            covered[c][j] += 1
    return TrendReport(years, tuple(dated), tuple(tuple(r) for r in covered))
