import itertools
import logging
import random

import numpy as np
import pytest

from skillnet.graph import MacroStats, SkillGraph, build_graph, macro_measures, parse_graph
from skillnet.lexicon import Corpus, JobAd, parse_lexicon
from skillnet.matrix import build_matrix
import skillnet.graph as graph_mod


def _matrix(rows, skills="abcdefgh"):
    lex = parse_lexicon(list(skills))
    corpus = Corpus(tuple(JobAd(f"ad{i}", " ".join(r)) for i, r in enumerate(rows)))
    return build_matrix(corpus, lex)


def _edge_set(g):
    return {(a, b, w) for a, b, w in g.named_edges()}


def test_two_ads_table_pattern():
    # ad1 holds {s2, s3, sn}, ad2 holds {s1, s2, s4}
    m = _matrix([["b", "c", "h"], ["a", "b", "d"]])
    g = build_graph(m)
    assert _edge_set(g) == {
        ("b", "c", 1), ("b", "h", 1), ("c", "h", 1),
        ("a", "b", 1), ("a", "d", 1), ("b", "d", 1),
    }
    assert g.nodes == ("a", "b", "c", "d", "h")


def test_repeated_pair_accumulates():
    g = build_graph(_matrix([["a", "b"], ["b", "a"]]))
    assert _edge_set(g) == {("a", "b", 2)}


def test_single_skill_ad_gives_isolated_node():
    g = build_graph(_matrix([["a"]]))
    assert g.nodes == ("a",) and g.edge_count == 0


def test_within_ad_counts_are_binarized():
    g = build_graph(_matrix([["a", "a", "a", "b"]]))
    assert _edge_set(g) == {("a", "b", 1)}
    assert g.occurrences == (3, 1)


def _random_rows(rng, ads, skills="abcdefgh"):
    return [[s for s in skills if rng.random() < 0.35] * rng.randint(1, 2) for _ in range(ads)]


@pytest.mark.parametrize("seed", range(10))
def test_edge_weights_match_double_loop(seed):
    rng = random.Random(seed)
    m = _matrix(_random_rows(rng, 25))
    g = build_graph(m)
    dense = m.counts.toarray()
    idx = g.index()
    for i, j in itertools.combinations(range(dense.shape[1]), 2):
        expected = sum(1 for row in dense if row[i] > 0 and row[j] > 0)
        a, b = m.skills[i], m.skills[j]
        if a in idx and b in idx:
            assert g.weight(idx[a], idx[b]) == expected
        else:
            assert expected == 0
    # invariants
    assert sum(g.degree(v) for v in range(g.n)) == 2 * g.edge_count
    assert all(w <= len(m.ad_ids) for _, _, w in g.edges())
    for u in range(g.n):
        assert u not in g.adjacency[u]
        for v, w in g.adjacency[u].items():
            assert g.adjacency[v][u] == w >= 1


def test_ad_order_permutation_invariance():
    rng = random.Random(11)
    rows = _random_rows(rng, 30)
    g1 = build_graph(_matrix(rows))
    rng.shuffle(rows)
    g2 = build_graph(_matrix(rows))
    assert _edge_set(g1) == _edge_set(g2)
    assert g1.nodes == g2.nodes


def test_large_ad_warning(caplog, monkeypatch):
    monkeypatch.setattr(graph_mod, "PAIR_BLOWUP_WARNING", 3)
    with caplog.at_level(logging.WARNING):
        build_graph(_matrix([list("abcde")]))
    assert "holds 5 skills (10 pairs)" in caplog.text


def test_macro_reference_values():
    stats = MacroStats(1315, 61717, 2 * 61717 / 1315, 2 * 61717 / (1315 * 1314))
    assert round(stats.average_degree, 3) == 93.866
    assert round(stats.density, 3) == 0.071


def test_macro_complete_and_empty():
    k4 = SkillGraph.from_edges([(a, b, 1) for a, b in itertools.combinations("abcd", 2)])
    s = macro_measures(k4)
    assert (s.node_count, s.edge_count, s.average_degree, s.density) == (4, 6, 3.0, 1.0)

    empty = SkillGraph.from_edges([], nodes=[f"n{i}" for i in range(10)])
    s = macro_measures(empty)
    assert (s.average_degree, s.density) == (0.0, 0.0)
    single = SkillGraph.from_edges([], nodes=["x"])
    assert macro_measures(single).density == 0.0


def test_macro_density_identity():
    rng = random.Random(5)
    for _ in range(20):
        g = build_graph(_matrix(_random_rows(rng, 10)))
        s = macro_measures(g)
        assert 0 <= s.density <= 1
        assert s.average_degree == pytest.approx(s.density * (s.node_count - 1))


def test_macro_table_layout():
    text = MacroStats(1315, 61717, 2 * 61717 / 1315, 2 * 61717 / (1315 * 1314)).table()
    assert "Average Degree   93.866" in text
    assert "Density          0.071" in text


def test_edge_and_node_files_roundtrip():
    rng = random.Random(8)
    g = build_graph(_matrix(_random_rows(rng, 12) + [["h"]]))
    again = parse_graph(g.dumps_edges(), g.dumps_nodes())
    assert again.nodes == g.nodes
    assert again.occurrences == g.occurrences
    assert _edge_set(again) == _edge_set(g)
    for line in g.dumps_edges().splitlines()[1:]:
        a, b, _ = line.split(",")
        assert a < b


def test_from_edges_rejects_bad_input():
    with pytest.raises(ValueError, match="self-loop"):
        SkillGraph.from_edges([("a", "a", 1)])
    with pytest.raises(ValueError, match="non-positive"):
        SkillGraph.from_edges([("a", "b", 0)])
    with pytest.raises(ValueError, match="duplicate edge"):
        SkillGraph.from_edges([("a", "b", 1), ("b", "a", 2)])


def test_to_sparse_symmetric():
    g = SkillGraph.from_edges([("a", "b", 2), ("b", "c", 5)])
    a = g.to_sparse().toarray()
    assert np.array_equal(a, a.T)
    assert a[0, 1] == 2 and a[1, 2] == 5
