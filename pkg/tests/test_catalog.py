import itertools

import pytest

from ambibound import (CATALOG_NAMES, canonical_code, enumerate_connected_graphs,
                       experiment_queries, lookup_named_query, make_query)
from ambibound.catalog import is_connected

# (edge count, sorted degree sequence) from standard graph-theory definitions
SHAPES = {
    "path3": (2, (2, 1, 1)), "K3": (3, (2, 2, 2)),
    "claw": (3, (3, 1, 1, 1)), "path4": (3, (2, 2, 1, 1)), "pan3": (4, (3, 2, 2, 1)),
    "cycle4": (4, (2, 2, 2, 2)), "fan2": (5, (3, 3, 2, 2)), "K4": (6, (3, 3, 3, 3)),
    "K14": (4, (4, 1, 1, 1, 1)), "chair": (4, (3, 2, 1, 1, 1)), "path5": (4, (2, 2, 2, 1, 1)),
    "cricket": (5, (4, 2, 2, 1, 1)), "pan4": (5, (3, 2, 2, 2, 1)), "bull": (5, (3, 3, 2, 1, 1)),
    "pan4c": (5, (3, 2, 2, 2, 1)), "cycle5": (5, (2, 2, 2, 2, 2)),
    "dart": (6, (4, 3, 2, 2, 1)), "K23": (6, (3, 3, 2, 2, 2)), "butterfly": (6, (4, 2, 2, 2, 2)),
    "house": (6, (3, 3, 2, 2, 2)), "kite": (6, (3, 3, 3, 2, 1)),
    "K3u2K1c": (7, (4, 4, 2, 2, 2)), "fan3": (7, (4, 3, 3, 2, 2)),
    "clawuK1c": (7, (4, 3, 3, 3, 1)), "P2uP3c": (7, (3, 3, 3, 3, 2)),
    "P3u2K1c": (8, (4, 4, 3, 3, 2)), "wheel4": (8, (4, 3, 3, 3, 3)),
    "K5_e": (9, (4, 4, 4, 3, 3)), "K5": (10, (4, 4, 4, 4, 4)),
}


def test_counts_per_size():
    assert [len(enumerate_connected_graphs(n)) for n in range(1, 6)] == [1, 1, 2, 6, 21]


def test_edge_count_distribution_n5():
    sizes = [len(g.edges) for g in enumerate_connected_graphs(5)]
    assert {k: sizes.count(k) for k in set(sizes)} == {4: 3, 5: 5, 6: 5, 7: 4, 8: 2, 9: 1, 10: 1}


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_named_shape_structure(name):
    g = lookup_named_query(name)
    m, degs = SHAPES[name]
    assert len(g.edges) == m
    assert tuple(sorted((g.degree(v) for v in range(g.n)), reverse=True)) == degs
    assert is_connected(g.n, g.edges)


def test_names_cover_every_class_once():
    assert len(CATALOG_NAMES) == 29 == len(set(CATALOG_NAMES))
    codes = {lookup_named_query(n).canonical_code for n in CATALOG_NAMES}
    assert len(codes) == 29
    enumerated = {g.canonical_code for n in (3, 4, 5) for g in enumerate_connected_graphs(n)}
    assert codes == enumerated
    assert all(g.name in CATALOG_NAMES for n in (3, 4, 5) for g in enumerate_connected_graphs(n))


def test_distinguishes_same_degree_sequence():
    assert lookup_named_query("K23").canonical_code != lookup_named_query("house").canonical_code
    assert lookup_named_query("pan4").canonical_code != lookup_named_query("pan4c").canonical_code


def test_canonical_code_is_relabeling_invariant():
    g = lookup_named_query("bull")
    for perm in itertools.permutations(range(5)):
        relabeled = [(perm[u], perm[v]) for u, v in g.edges]
        assert canonical_code(5, relabeled) == g.canonical_code


def test_make_query_names_by_isomorphism():
    assert make_query(3, [(0, 2), (2, 1), (1, 0)]).name == "K3"
    assert make_query(4, [(3, 0), (0, 1), (1, 2)]).name == "path4"
    with pytest.raises(ValueError):
        make_query(3, [(0, 0)])
    with pytest.raises(ValueError):
        make_query(3, [(0, 5)])


def test_lookup_errors():
    with pytest.raises(KeyError, match="valid names"):
        lookup_named_query("K7")
    with pytest.raises(ValueError):
        enumerate_connected_graphs(6)
    with pytest.raises(ValueError):
        enumerate_connected_graphs(0)


def test_experiment_queries_order():
    qs = experiment_queries()
    assert [q.name for q in qs] == list(CATALOG_NAMES)
    assert [q.n for q in qs] == sorted(q.n for q in qs)
