"""Skill lexicon and job-ad corpus loading.

Both loaders normalize text with :func:`normalize_text` so that lexicon
phrases and ad bodies share one token space before matching.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable

from .errors import CorpusError, LexiconError

logger = logging.getLogger(__name__)

# Symbols kept when they trail a token ("c++", "c#") or sit before an
# alphanumeric character ("asp.net", ".net").
SUFFIX_SYMBOLS = "+#"
INFIX_SYMBOLS = "."


def normalize_text(
    raw: str,
    suffix_symbols: str = SUFFIX_SYMBOLS,
    infix_symbols: str = INFIX_SYMBOLS,
) -> str:
    """Case-fold ``raw`` and reduce it to space-separated tokens.

    Alphanumerics are kept. Characters in ``suffix_symbols`` survive only when
    they directly follow a kept character, characters in ``infix_symbols`` only
    when the next character is alphanumeric. Everything else becomes a space,
    and whitespace runs collapse.

    >>> normalize_text("C++ / C# dev")
    'c++ c# dev'
    >>> normalize_text("Java, and JavaScript!")
    'java and javascript'
    """
    text = raw.lower()
    out: list[str] = []
    last = " "
    for i, ch in enumerate(text):
        if ch.isalnum():
            keep = True
        elif ch in suffix_symbols:
            keep = last != " "
        elif ch in infix_symbols:
            keep = i + 1 < len(text) and text[i + 1].isalnum()
        else:
            keep = False
        if keep:
            out.append(ch)
            last = ch
        elif last != " ":
            out.append(" ")
            last = " "
    return "".join(out).strip()


@dataclass(frozen=True)
class SkillEntry:
    canonical: str
    aliases: tuple[str, ...] = ()

    @property
    def phrases(self) -> tuple[str, ...]:
        """Canonical name followed by its aliases."""
        return (self.canonical,) + self.aliases


@dataclass(frozen=True)
class SkillLexicon:
    entries: tuple[SkillEntry, ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e.canonical for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def index(self) -> dict[str, int]:
        """Map canonical name to column position."""
        return {e.canonical: i for i, e in enumerate(self.entries)}

    def dumps(self) -> str:
        """Serialize back to the line format accepted by :func:`parse_lexicon`."""
        return "".join("|".join(e.phrases) + "\n" for e in self.entries)


def parse_lexicon(lines: Iterable[str], source: str = "<lexicon>") -> SkillLexicon:
    """Build a lexicon from lines of ``Canonical|alias|alias``.

    Raises:
        LexiconError: on duplicate canonicals, alias collisions, an entry that
            normalizes to nothing, or when no entries are present.
    """
    entries: list[SkillEntry] = []
    # phrase -> (line number, canonical that owns it)
    owners: dict[str, tuple[int, str]] = {}

    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = [normalize_text(p) for p in stripped.split("|")]
        canonical = parts[0]
        if not canonical:
            raise LexiconError(f"{source}:{lineno}: empty skill name in {stripped!r}")
        if canonical in owners:
            first, owner = owners[canonical]
            if owner == canonical:
                raise LexiconError(
                    f"{source}:{lineno}: duplicate skill {canonical!r} "
                    f"after case-folding (first defined on line {first})"
                )
            raise LexiconError(
                f"{source}:{lineno}: skill {canonical!r} collides with an alias "
                f"of {owner!r} (line {first})"
            )
        owners[canonical] = (lineno, canonical)

        aliases: list[str] = []
        for alias in parts[1:]:
            if not alias or alias == canonical or alias in aliases:
                continue
            if alias in owners:
                first, owner = owners[alias]
                raise LexiconError(
                    f"{source}:{lineno}: alias {alias!r} of {canonical!r} collides "
                    f"with {owner!r} (line {first})"
                )
            owners[alias] = (lineno, canonical)
            aliases.append(alias)
        entries.append(SkillEntry(canonical, tuple(aliases)))

    if not entries:
        raise LexiconError(f"{source}: lexicon contains no skills")
    return SkillLexicon(tuple(entries))


def load_lexicon(path: str | Path) -> SkillLexicon:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LexiconError(f"cannot read lexicon {path}: {exc}") from exc
    return parse_lexicon(text.splitlines(), source=str(path))


@dataclass(frozen=True)
class JobAd:
    id: str
    text: str
    posted_date: date | None = None

    @property
    def year(self) -> int | None:
        return self.posted_date.year if self.posted_date else None


@dataclass(frozen=True)
class Corpus:
    ads: tuple[JobAd, ...]
    bad_dates: int = 0
    skipped: int = 0

    def __len__(self) -> int:
        return len(self.ads)

    def __iter__(self):
        return iter(self.ads)

    @property
    def year_range(self) -> tuple[int, int] | None:
        years = [ad.year for ad in self.ads if ad.year is not None]
        if not years:
            return None
        return min(years), max(years)

    def subset(self, ids: Iterable[str]) -> "Corpus":
        wanted = set(ids)
        return Corpus(tuple(ad for ad in self.ads if ad.id in wanted))

    def dumps(self) -> str:
        """Serialize as JSON lines in the corpus interchange format."""
        rows = []
        for ad in self.ads:
            record = {
                "id": ad.id,
                "text": ad.text,
                "date": ad.posted_date.isoformat() if ad.posted_date else "",
            }
            rows.append(json.dumps(record, ensure_ascii=False) + "\n")
        return "".join(rows)


def _parse_date(value) -> tuple[date | None, bool]:
    """Return ``(date, ok)``; ``ok`` is False only for a present but bad value."""
    if value is None or value == "":
        return None, True
    if not isinstance(value, str):
        return None, False
    try:
        return date.fromisoformat(value.strip()), True
    except ValueError:
        return None, False


def parse_corpus(
    lines: Iterable[str], source: str = "<corpus>", normalize: bool = True
) -> Corpus:
    ads: list[JobAd] = []
    seen: dict[str, int] = {}
    bad_dates = 0
    skipped = 0

    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            logger.warning("%s:%d: not a JSON object, skipped", source, lineno)
            skipped += 1
            continue
        if (
            not isinstance(record, dict)
            or not isinstance(record.get("id"), str)
            or not isinstance(record.get("text"), str)
        ):
            logger.warning("%s:%d: record lacks string id/text, skipped", source, lineno)
            skipped += 1
            continue

        ad_id = record["id"]
        if ad_id in seen:
            raise CorpusError(
                f"{source}:{lineno}: duplicate ad id {ad_id!r} (first on line {seen[ad_id]})"
            )
        seen[ad_id] = lineno

        posted, ok = _parse_date(record.get("date"))
        if not ok:
            bad_dates += 1
        text = normalize_text(record["text"]) if normalize else record["text"]
        ads.append(JobAd(ad_id, text, posted))

    if not ads:
        raise CorpusError(f"{source}: no valid job ad records")
    if bad_dates:
        logger.warning("%s: %d ad(s) with unparseable dates kept undated", source, bad_dates)
    return Corpus(tuple(ads), bad_dates=bad_dates, skipped=skipped)


def load_corpus(path: str | Path) -> Corpus:
    """Load a JSON-lines corpus, normalizing each ad's text.

    Records with unparseable dates are kept undated and tallied in
    ``Corpus.bad_dates``; malformed records are skipped and tallied in
    ``Corpus.skipped``.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
    return parse_corpus(text.splitlines(), source=str(path))
