import random

import networkx as nx
import pytest

from clusterkit.acceptance import distinguished_seed
from clusterkit.errors import IncompleteGraph
from clusterkit.exchange import ExchangeMatrix, Seed, rank2_seed, validate_seed_matrix
from clusterkit.graph import (canonical_seed, classify_finite_type, cluster_variables, conjecture_checks,
                              denominator_table, explore, graph_to_dict, graph_to_dot, seed_key)
from clusterkit.laurent import LaurentPoly, parse_laurent


@pytest.mark.parametrize("b,c,seeds", [(1, 1, 5), (1, 2, 6), (2, 1, 6), (1, 3, 8), (3, 1, 8)])
def test_rank2_periods(b, c, seeds):
    g = explore(rank2_seed(b, c))
    assert g.complete and len(g) == seeds
    assert len(cluster_variables(g)) == seeds
    assert nx.is_isomorphic(g.to_networkx(), nx.cycle_graph(seeds))


def test_a11_variables_by_hand():
    g = explore(rank2_seed(1, 1))
    got = set(cluster_variables(g))
    want = {parse_laurent(t, ("y1", "y2")) for t in
            ["y1", "y2", "y1^-1 + y1^-1*y2", "y2^-1 + y1*y2^-1",
             "y1^-1*y2^-1 + y1^-1 + y2^-1"]}
    assert got == want


def test_a22_is_not_closed():
    g = explore(rank2_seed(2, 2), max_seeds=101)
    assert len(g) == 101 and not g.complete
    with pytest.raises(IncompleteGraph):
        cluster_variables(g)


def test_max_depth_marks_incomplete():
    g = explore(distinguished_seed("A3"), max_depth=1)
    assert len(g) == 4 and not g.complete


@pytest.mark.parametrize("label,count", [("A2", 5), ("A3", 14), ("B2", 6), ("B3", 20), ("C3", 20),
                                         ("G2", 8), ("D4", 50), ("A1xA1", 4), ("A1xA2", 10)])
def test_seed_count_equals_cluster_count(label, count):
    g = explore(distinguished_seed(label))
    assert g.complete and len(g) == count
    assert g.is_regular()
    for a, b in g.edges:
        shared = set(g.seeds[a].cluster()) & set(g.seeds[b].cluster())
        assert len(shared) == g.rank - 1
    assert g.cluster_keys_agree


def test_canonical_key_ignores_labels():
    s = distinguished_seed("A3")
    perm = [2, 0, 1]
    rows = s.matrix.entries
    entries = tuple(tuple(rows[perm[i]][perm[j]] for j in range(3)) for i in range(3))
    gens = LaurentPoly.gens(s.names)
    relabeled = Seed(tuple(gens[perm[i]] for i in range(3)), ExchangeMatrix(entries, (0, 1, 2), s.matrix.symmetrizer))
    assert seed_key(relabeled) == seed_key(s)
    assert canonical_seed(relabeled) == canonical_seed(s)


def test_jobs_do_not_change_the_result():
    a = explore(distinguished_seed("B3"))
    b = explore(distinguished_seed("B3"), jobs=2)
    assert graph_to_dict(a) == graph_to_dict(b)


def test_frozen_rows_keep_the_graph():
    mat = validate_seed_matrix([(0, 1), (-1, 0), (1, 1)], [0, 1])
    g = explore(Seed.initial(mat))
    assert g.complete and len(g) == 5
    for s in g.seeds:
        assert s.variables[2] == LaurentPoly.gens(s.names)[2]


def test_dot_export_lists_every_edge():
    g = explore(distinguished_seed("A2"))
    dot = graph_to_dot(g)
    assert dot.startswith("graph") and dot.count("--") == len(g.edges) == 5


@pytest.mark.parametrize("rows,verdict", [
    ([[0, 1], [-1, 0]], "FiniteType(A2)"),
    ([[0, 1], [-2, 0]], "FiniteType(B2)"),
    ([[0, 2], [-1, 0]], "FiniteType(B2)"),  # C2 is B2 with the nodes swapped
    ([[0, 1], [-3, 0]], "FiniteType(G2)"),
    ([[0, 2], [-2, 0]], "InfiniteType"),
    ([[0, 1, -1], [-1, 0, 1], [1, -1, 0]], "FiniteType(A3)"),
    ([[0, 2, -2], [-2, 0, 2], [2, -2, 0]], "InfiniteType"),
    ([[0, 1, 0, 0], [-1, 0, 1, 1], [0, -1, 0, 0], [0, -1, 0, 0]], "FiniteType(D4)"),
    ([[0, 0], [0, 0]], "FiniteType(A1xA1)"),
])
def test_classify(rows, verdict):
    res = classify_finite_type(rows)
    assert str(res) == verdict


def test_classification_witness_is_reached_by_its_path():
    from clusterkit.graph import _principal_mutate
    b = ((0, 1, -1), (-1, 0, 1), (1, -1, 0))
    res = classify_finite_type(b)
    m = b
    for k in res.path:
        m = _principal_mutate(m, k)
    assert m == res.witness


def test_classification_agrees_with_exploration():
    # finite type exactly when the exchange graph closes
    for rows in ([[0, 1, 0], [-2, 0, 1], [0, -1, 0]], [[0, 1, 0], [-1, 0, 2], [0, -1, 0]]):
        mat = validate_seed_matrix(rows, range(3), require_full_rank=False)
        g = explore(Seed.initial(mat), max_seeds=60)
        assert g.complete == (classify_finite_type(rows).verdict == "FiniteType")


def test_b2_denominators():
    g = explore(distinguished_seed("B2"))
    den = sorted(denominator_table(g).values())
    assert den == sorted([(-1, 0), (0, -1), (1, 0), (0, 1), (1, 1), (2, 1)]) or \
        den == sorted([(-1, 0), (0, -1), (1, 0), (0, 1), (1, 1), (1, 2)])


@pytest.mark.parametrize("seed,degree", [(rank2_seed(1, 1), 3), (distinguished_seed("A3"), 2),
                                         (distinguished_seed("B2"), 3)])
def test_conjecture_checks_hold(seed, degree):
    rep = conjecture_checks(explore(seed), degree, random.Random(1))
    assert rep.passed, rep.details


def test_degenerate_zero_matrix():
    mat = validate_seed_matrix([[0]], [0], require_full_rank=False)
    g = explore(Seed.initial(mat))
    assert len(g) == 2 and g.complete
    assert str(cluster_variables(g)[-1]) == "2*x1^-1"
    assert conjecture_checks(g, 3, random.Random(0)).passed
