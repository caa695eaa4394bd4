"""Skill matching and the sparse ad-by-skill count matrix."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .lexicon import Corpus, SkillLexicon

_END = object()


class PhraseMatcher:
    """Longest-match, left-to-right, non-overlapping phrase scanner.

    Phrases are token sequences; every canonical name and alias of the
    lexicon is inserted into a token trie whose terminal marker holds the
    column index of the owning skill.
    """

    def __init__(self, lexicon: SkillLexicon):
        self.lexicon = lexicon
        self._root: dict = {}
        for col, entry in enumerate(lexicon.entries):
            for phrase in entry.phrases:
                node = self._root
                for token in phrase.split():
                    node = node.setdefault(token, {})
                node[_END] = col

    def spans(self, tokens: list[str]) -> list[tuple[int, int, int]]:
        """Return ``(start, stop, column)`` for every accepted match."""
        found = []
        i = 0
        n = len(tokens)
        while i < n:
            node = self._root
            best = None
            j = i
            while j < n and tokens[j] in node:
                node = node[tokens[j]]
                j += 1
                if _END in node:
                    best = (j, node[_END])
            if best is None:
                i += 1
            else:
                found.append((i, best[0], best[1]))
                i = best[0]
        return found

    def count(self, text: str) -> Counter:
        return Counter(col for _, _, col in self.spans(text.split()))


def match_skills(ad_text: str, lexicon: SkillLexicon) -> dict[str, int]:
    """Count whole-token occurrences of each skill in normalized ``ad_text``.

    Alias hits accrue to the canonical name. Only skills with at least one hit
    appear in the result.
    """
    names = lexicon.names
    counts = PhraseMatcher(lexicon).count(ad_text)
    return {names[col]: n for col, n in sorted(counts.items())}


@dataclass(frozen=True)
class AdSkillMatrix:
    """Ads (rows, corpus order) by skills (columns, lexicon order)."""

    ad_ids: tuple[str, ...]
    skills: tuple[str, ...]
    counts: sp.csr_array

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    @property
    def matched_skill_count(self) -> int:
        return int(np.count_nonzero(self.column_totals()))

    def column_totals(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=0)).ravel()

    def presence(self) -> sp.csr_array:
        """Binary ads-by-skills matrix: 1 where a skill occurs at least once."""
        b = self.counts.copy()
        b.data = np.ones_like(b.data)
        return b

    def row(self, i: int) -> dict[str, int]:
        start, stop = self.counts.indptr[i], self.counts.indptr[i + 1]
        return {
            self.skills[c]: int(v)
            for c, v in zip(self.counts.indices[start:stop], self.counts.data[start:stop])
        }

    def rows(self) -> list[dict[str, int]]:
        return [self.row(i) for i in range(len(self.ad_ids))]

    def zero_match_ads(self) -> int:
        return int(np.count_nonzero(np.diff(self.counts.indptr) == 0))

    def triplets(self) -> Iterable[tuple[str, str, int]]:
        for i, ad_id in enumerate(self.ad_ids):
            start, stop = self.counts.indptr[i], self.counts.indptr[i + 1]
            for c, v in zip(self.counts.indices[start:stop], self.counts.data[start:stop]):
                yield ad_id, self.skills[c], int(v)

    def dumps(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["ad_id", "skill_canonical", "count"])
        writer.writerows(self.triplets())
        return buf.getvalue()


def _from_rows(ad_ids, skills, rows: list[dict[int, int]]) -> AdSkillMatrix:
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    for row in rows:
        for col in sorted(row):
            indices.append(col)
            data.append(row[col])
        indptr.append(len(indices))
    counts = sp.csr_array(
        (np.array(data, dtype=np.int64), np.array(indices, dtype=np.int64), np.array(indptr)),
        shape=(len(ad_ids), len(skills)),
    )
    return AdSkillMatrix(tuple(ad_ids), tuple(skills), counts)


def build_matrix(corpus: Corpus, lexicon: SkillLexicon) -> AdSkillMatrix:
    matcher = PhraseMatcher(lexicon)
    rows = [dict(matcher.count(ad.text)) for ad in corpus.ads]
    return _from_rows([ad.id for ad in corpus.ads], lexicon.names, rows)


def parse_matrix(text: str, ad_ids, skills) -> AdSkillMatrix:
    """Rebuild a matrix from its triplet CSV given the row and column universes."""
    row_of = {a: i for i, a in enumerate(ad_ids)}
    col_of = {s: j for j, s in enumerate(skills)}
    rows: list[dict[int, int]] = [{} for _ in ad_ids]
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["ad_id", "skill_canonical", "count"]:
        raise ValueError(f"unexpected matrix header {header!r}")
    for ad_id, skill, count in reader:
        rows[row_of[ad_id]][col_of[skill]] = int(count)
    return _from_rows(ad_ids, skills, rows)


def match_summary(matrix: AdSkillMatrix) -> dict:
    return {
        "ads_processed": len(matrix.ad_ids),
        "lexicon_size": len(matrix.skills),
        "skills_matched": matrix.matched_skill_count,
        "zero_match_ads": matrix.zero_match_ads(),
        "total_matches": int(matrix.counts.sum()),
    }
