import json
import logging
from datetime import date

import pytest
from hypothesis import given, strategies as st

from skillnet.errors import CorpusError, LexiconError
from skillnet.lexicon import load_corpus, load_lexicon, normalize_text, parse_corpus, parse_lexicon


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("Java, and JavaScript!", "java and javascript"),
        ("C++ / C# dev", "c++ c# dev"),
        ("", ""),
        ("ASP.NET and .NET Core.", "asp.net and .net core"),
        ("Node.js...", "node.js"),
        ("  Problem\tSolving \n", "problem solving"),
        ("#hashtag + plus", "hashtag plus"),
        ("3+ years", "3+ years"),
    ],
)
def test_normalize_text(raw, expected):
    assert normalize_text(raw) == expected


@given(st.text())
def test_normalize_is_idempotent(raw):
    once = normalize_text(raw)
    assert normalize_text(once) == once


@given(st.text(alphabet="abcXYZ019 .+#,/-!\t\n"))
def test_normalize_idempotent_on_symbol_heavy_text(raw):
    once = normalize_text(raw)
    assert normalize_text(once) == once
    assert "  " not in once and once == once.strip()


def test_lexicon_three_entries():
    lex = parse_lexicon(["SQL", "Git", "Communication"])
    assert lex.size == 3
    assert lex.names == ("sql", "git", "communication")


def test_lexicon_duplicate_after_casefold_names_both_lines():
    with pytest.raises(LexiconError, match=r":2: duplicate skill 'sql'.*line 1"):
        parse_lexicon(["sql", "SQL"])


def test_lexicon_alias_collisions():
    with pytest.raises(LexiconError, match="alias 'js'"):
        parse_lexicon(["JavaScript|JS", "JSON|js"])
    with pytest.raises(LexiconError, match="collides with an alias"):
        parse_lexicon(["JavaScript|JS", "JS"])
    with pytest.raises(LexiconError, match="alias 'java'"):
        parse_lexicon(["Java", "JavaScript|Java"])


def test_lexicon_empty_and_comment_only():
    with pytest.raises(LexiconError, match="no skills"):
        parse_lexicon([])
    with pytest.raises(LexiconError, match="no skills"):
        parse_lexicon(["# comment", "   "])
    with pytest.raises(LexiconError, match="empty skill name"):
        parse_lexicon(["!!!"])


def test_lexicon_aliases_normalized_and_deduplicated():
    lex = parse_lexicon(["# skills", "JavaScript|JS|ECMAScript|js|JavaScript", "C++|CPP"])
    assert lex.entries[0].aliases == ("js", "ecmascript")
    assert lex.entries[1].canonical == "c++"
    for entry in lex:
        for phrase in entry.phrases:
            assert normalize_text(phrase) == phrase


def test_load_lexicon_order_stable(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text("Python\nGit\nSQL|structured query language\n", encoding="utf-8")
    assert load_lexicon(path) == load_lexicon(path)
    assert load_lexicon(path).names == ("python", "git", "sql")


def test_load_lexicon_missing_file(tmp_path):
    with pytest.raises(LexiconError, match="cannot read"):
        load_lexicon(tmp_path / "absent.txt")


def test_lexicon_dumps_roundtrip(sample_lexicon_path):
    lex = load_lexicon(sample_lexicon_path)
    assert parse_lexicon(lex.dumps().splitlines()) == lex


def _jsonl(*records):
    return [json.dumps(r) for r in records]


def test_corpus_two_records():
    corpus = parse_corpus(
        _jsonl(
            {"id": "a", "text": "Java dev", "date": "2020-05-01"},
            {"id": "b", "text": "SQL", "date": ""},
        )
    )
    assert len(corpus) == 2
    assert corpus.ads[0].text == "java dev"
    assert corpus.ads[0].posted_date == date(2020, 5, 1)
    assert corpus.ads[1].posted_date is None
    assert corpus.bad_dates == 0
    assert corpus.year_range == (2020, 2020)


def test_corpus_bad_date_kept_undated(caplog):
    with caplog.at_level(logging.WARNING):
        corpus = parse_corpus(_jsonl({"id": "a", "text": "x", "date": "2019-13-40"}))
    assert len(corpus) == 1
    assert corpus.ads[0].posted_date is None
    assert corpus.bad_dates == 1
    assert "unparseable dates" in caplog.text


def test_corpus_duplicate_id():
    with pytest.raises(CorpusError, match="duplicate ad id 'a'"):
        parse_corpus(_jsonl({"id": "a", "text": "x", "date": ""}, {"id": "a", "text": "y", "date": ""}))


def test_corpus_no_valid_records():
    with pytest.raises(CorpusError, match="no valid"):
        parse_corpus(["not json", json.dumps({"id": 3, "text": "x"}), ""])


def test_corpus_skips_malformed_records():
    corpus = parse_corpus(["{broken", *_jsonl({"id": "a", "text": "x", "date": ""}, [1, 2])])
    assert len(corpus) == 1
    assert corpus.skipped == 2


def test_corpus_dumps_roundtrip(sample_corpus_path):
    corpus = load_corpus(sample_corpus_path)
    again = parse_corpus(corpus.dumps().splitlines(), normalize=False)
    assert again == corpus


def test_sample_fixture_shape(sample_lexicon_path, sample_corpus_path):
    assert load_lexicon(sample_lexicon_path).size == 50
    corpus = load_corpus(sample_corpus_path)
    assert len(corpus) == 200
    assert all(ad.posted_date is not None for ad in corpus)


def test_reference_scale_lexicon_and_corpus(tmp_path):
    # 5763 lexicon entries and 7777 ads load at full size
    lex_path = tmp_path / "lex.txt"
    lex_path.write_text("".join(f"skill{i}\n" for i in range(5763)), encoding="utf-8")
    assert load_lexicon(lex_path).size == 5763

    corpus_path = tmp_path / "ads.jsonl"
    corpus_path.write_text(
        "".join(json.dumps({"id": str(i), "text": "sql", "date": "2021-01-01"}) + "\n" for i in range(7777)),
        encoding="utf-8",
    )
    assert len(load_corpus(corpus_path)) == 7777
