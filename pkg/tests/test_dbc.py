import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest

from clusterkit.dbc import (EXAMPLE_WORD, all_minors, b_from_word, build_word, check_identities_at,
                            eval_minor, example_identities, example_targets, exchange_identity_check,
                            frozen_closed_form, frozen_set, gamma_delta, generic_points, is_totally_positive,
                            length, match_cluster_variables, minor_text, minors, parse_word,
                            rejection_sample_tp, tp_sample, tp_test)
from clusterkit.errors import (BadPrefix, IdentityViolated, IndexOutOfRange, MalformedInput, NotReduced,
                               NotUnimodular, SizeMismatch)
from clusterkit.exchange import Seed, matrix_mutate
from clusterkit.graph import classify_finite_type, cluster_variables, explore

W = build_word(2, EXAMPLE_WORD)
W0 = (3, 2, 1)


def reduced_words(perm):
    """All reduced words of a permutation in one-line notation, by right descents."""
    perm = tuple(perm)
    if length(perm) == 0:
        return [()]
    out = []
    for i in range(len(perm) - 1):
        if perm[i] > perm[i + 1]:
            q = list(perm)
            q[i], q[i + 1] = q[i + 1], q[i]
            out += [w + (i + 1,) for w in reduced_words(q)]
    return out


def shuffles(a, b):
    n = len(a) + len(b)
    for pos in combinations(range(n), len(a)):
        ia, ib, s = iter(a), iter(b), set(pos)
        yield tuple(next(ia) if k in s else next(ib) for k in range(n))


def test_example_word():
    assert W.u == W.v == W0 and W.m == 8
    assert W.ex == (3, 4, 5, 6)
    assert W.frozen_positions == (1, 2, 7, 8)
    assert W.k_plus(3) == 5 and W.k_minus(3) == 1 and W.k_plus(8) == 9 and W.k_minus(1) == 0


def test_minors_of_example_word():
    want = ["D_1,3", "D_12,23", "D_1,2", "D_12,12", "D_1,1", "D_2,1", "D_23,12", "D_3,1"]
    assert [minor_text(m) for m in minors(W)] == want
    assert gamma_delta(W, 1) == ((1,), (3,))
    with pytest.raises(IndexOutOfRange):
        gamma_delta(W, 9)


def test_prefix_rows_are_omega():
    w = build_word(3, (1, 2, 3, 1, 2, 1))
    for k in range(1, 4):
        assert gamma_delta(w, k)[0] == tuple(range(1, k + 1))


def test_rank_one_word():
    w = build_word(1, (1, 1, -1))
    assert w.u == w.v == (2, 1) and w.m == 3 and w.ex == (2,)
    assert frozen_set(w) == frozen_closed_form(w) == {((1,), (2,)), ((2,), (1,))}
    b = b_from_word(w)
    assert b.entries == ((-1,), (0,), (-1,))
    assert matrix_mutate(matrix_mutate(b, 1), 1) == b


def test_word_errors():
    with pytest.raises(NotReduced):
        build_word(2, (1, 2, 1, 1))
    with pytest.raises(BadPrefix):
        build_word(2, (2, 1, 1))
    with pytest.raises(MalformedInput):
        parse_word("1,x")
    with pytest.raises(MalformedInput):
        build_word(2, (1, 2, 3))
    assert parse_word("1, 2, 1, 2, 1, -1, -2, -1") == W


def test_example_frozen_set():
    assert frozen_set(W) == {((1,), (3,)), ((1, 2), (2, 3)), ((2, 3), (1, 2)), ((3,), (1,))}


def test_two_words_for_the_same_pair():
    other = build_word(2, (1, 2, 2, 1, 2, -2, -1, -2))
    assert other.u == other.v == W0
    assert frozen_set(other) == frozen_set(W)


@pytest.mark.parametrize("size", [3, 4])
def test_frozen_set_closed_form_exhaustive(size):
    # every reduced word of every pair (u, v), all shuffles of the two factors
    r = size - 1
    words = 0
    for u in permutations(range(1, size + 1)):
        for v in permutations(range(1, size + 1)):
            sets = set()
            for wu in reduced_words(u):
                for wv in reduced_words(v):
                    for sh in shuffles([-x for x in wu], list(wv)):
                        w = build_word(r, tuple(range(1, size)) + sh)
                        f = frozenset(frozen_set(w))
                        assert f == frozen_closed_form(w)
                        assert w.m == r + length(w.u) + length(w.v)
                        assert len(f) == w.m - len(w.ex)
                        sets.add(f)
                        words += 1
            assert len(sets) == 1
    assert words == {3: 261, 4: 773957}[size]


def test_matrix_of_example_word():
    want = ((-1, 0, 0, 0), (1, -1, 0, 0), (0, 1, -1, 0), (-1, 0, 1, -1),
            (1, -1, 0, 1), (0, 1, -1, 0), (0, -1, 0, 1), (0, 0, 0, -1))
    b = b_from_word(W)
    assert b.entries == want
    assert str(classify_finite_type(b.principal())) == "FiniteType(D4)"


def test_eval_minor():
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert eval_minor(((1,), (3,)), ident) == 0
    assert eval_minor(((1, 2), (1, 2)), ident) == 1
    assert eval_minor(((1, 2), (2, 3)), [[1, 1, 0], [0, 1, 1], [0, 0, 1]]) == 1
    with pytest.raises(SizeMismatch):
        eval_minor(((1, 2), (1,)), ident)
    with pytest.raises(SizeMismatch):
        eval_minor(((4,), (1,)), ident)


def test_tp_sampler():
    rng = random.Random(5)
    for _ in range(20):
        x = tp_sample(2, rng)
        assert eval_minor(((1, 2, 3), (1, 2, 3)), x) == 1
        assert tp_test(W, x) and is_totally_positive(x)
    assert len(all_minors(3)) == 19
    assert is_totally_positive(tp_sample(3, rng))


def test_identity_matrix_is_not_totally_positive():
    assert not tp_test(W, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(NotUnimodular):
        tp_test(W, [[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(SizeMismatch):
        tp_test(W, [[1, 0], [0, 1]])


def test_eight_minors_decide_total_positivity():
    rng = random.Random(2)
    for _ in range(10):
        x = rejection_sample_tp(W, rng)
        assert x is not None and is_totally_positive(x)
    # and matrices failing the test are not totally positive
    y = [[1, 2, 0], [1, 3, 1], [0, 1, 2]]
    assert eval_minor(((1, 2, 3), (1, 2, 3)), y) == 1
    assert not tp_test(W, y) and not is_totally_positive(y)


def test_exchange_identities_hold():
    rep = exchange_identity_check(W, 100, random.Random(0))
    assert rep.checked == 100 and rep.trials == rep.checked + rep.skipped


def test_exchanged_f3_is_not_d12_23():
    # the value D_12,23 quoted for f'_3 disagrees with the exchange relation
    with pytest.raises(IdentityViolated):
        exchange_identity_check(W, 100, random.Random(0), lambda x: example_identities(x, (2, 3)))


def test_vanishing_minor_is_skipped():
    x = [[1, 2, 1], [1, 2, 0], [0, 1, 0]]  # D_12,12 = 0
    assert eval_minor(((1, 2, 3), (1, 2, 3)), x) == 1
    assert eval_minor(((1, 2), (1, 2)), x) == 0
    assert check_identities_at(W, x) is False


def test_d4_cluster_variables_are_minors_and_two_cubics():
    g = explore(Seed.initial(b_from_word(W)))
    assert g.complete and len(g) == 50
    variables = cluster_variables(g)
    assert len(variables) == 16
    points = generic_points(W, 4, random.Random(7))
    assert len(example_targets(points[0])) == 16
    assert match_cluster_variables(variables, W, example_targets, points) is not None
