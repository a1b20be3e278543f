import json
import pytest
from hypothesis import given, strategies as st

from clusterkit import exchange, laurent
from clusterkit.errors import MalformedInput, NotSkewSymmetrizable, RankDeficient
from clusterkit.exchange import (Seed, dumps_seed, exchange_partner, loads_seed, matrix_mutate, mutate_along,
                                 rank2_seed, seed_mutate, validate_seed_matrix)
from clusterkit.laurent import parse_laurent
from clusterkit.linalg import rank
from conftest import valid_matrices


def test_validate_examples():
    assert validate_seed_matrix([[0, 1], [-1, 0]], [0, 1]).symmetrizer == (1, 1)
    assert validate_seed_matrix([[0, 2], [-1, 0]], [0, 1]).symmetrizer == (1, 2)
    with pytest.raises(NotSkewSymmetrizable):
        validate_seed_matrix([[0, 1], [1, 0]], [0, 1])


def test_rank_condition():
    with pytest.raises(RankDeficient):
        validate_seed_matrix([[0]], [0])
    assert validate_seed_matrix([[0]], [0], require_full_rank=False).n == 1


def test_bad_ex():
    with pytest.raises(MalformedInput):
        validate_seed_matrix([[0, 1], [-1, 0]], [0, 2])


def test_mutate_rank2_matrix():
    m = validate_seed_matrix([[0, 1], [-1, 0]], [0, 1])
    assert matrix_mutate(m, 0).entries == ((0, -1), (1, 0))


def test_mutate_golden_8x4():
    # oracle: the equivalent form b'_pj = b_pj + sgn(b_pk) max(b_pk b_kj, 0)
    rows = [(-1, 0, 0, 0), (1, -1, 0, 0), (0, 1, -1, 0), (-1, 0, 1, -1),
            (1, -1, 0, 1), (0, 1, -1, 0), (0, -1, 0, 1), (0, 0, 0, -1)]
    m = validate_seed_matrix(rows, [2, 3, 4, 5], require_full_rank=False)
    k, c = 2, 0
    expect = []
    for p, row in enumerate(rows):
        new = []
        for j, v in enumerate(row):
            if p == k or j == c:
                new.append(-v)
            else:
                bpk, bkj = row[c], rows[k][j]
                sgn = (bpk > 0) - (bpk < 0)
                new.append(v + sgn * max(bpk * bkj, 0))
        expect.append(tuple(new))
    assert matrix_mutate(m, k).entries == tuple(expect)
    assert expect[0] == (1, 0, -1, 0)


def test_exchange_partner_rank2():
    s = rank2_seed(1, 1)
    assert exchange_partner(s, 0) == parse_laurent("y1^-1*y2 + y1^-1", s.names)


@pytest.mark.parametrize("b,c", [(1, 2), (2, 1), (1, 3), (3, 1), (2, 2)])
def test_exchange_partner_uses_column_k(b, c):
    # x'_k uses column k, so with B = [[0, b], [-c, 0]] the second exchange
    # is (y1^b + 1) / y2
    s = rank2_seed(b, c)
    assert exchange_partner(s, 1) == parse_laurent(f"y1^{b}*y2^-1 + y2^-1", s.names)
    assert exchange_partner(s, 0) == parse_laurent(f"y1^-1*y2^{c} + y1^-1", s.names)


def test_rank2_involution_and_period():
    s = rank2_seed(1, 1)
    assert mutate_along(s, [0, 0]) == s
    t = mutate_along(s, [0, 1, 0, 1, 0])
    assert set(t.cluster()) == set(s.cluster())
    assert t.variables == (s.variables[1], s.variables[0])


def test_degenerate_one_by_one():
    s = Seed.initial(validate_seed_matrix([[0]], [0], require_full_rank=False))
    assert str(exchange_partner(s, 0)) == "2*x1^-1"


def test_json_round_trip():
    s = mutate_along(rank2_seed(1, 2), [0, 1, 0])
    text = dumps_seed(s)
    data = json.loads(text)
    assert data["ex"] == [1, 2] and data["m"] == 2
    assert loads_seed(text) == s


def test_json_errors():
    with pytest.raises(MalformedInput):
        loads_seed("{not json")
    with pytest.raises(MalformedInput):
        loads_seed(json.dumps({"m": 2, "n": 2, "ex": [1, 2], "matrix": [[0, 1]]}))


@given(valid_matrices(), st.data())
def test_matrix_mutation_is_involutive_and_preserves_conditions(mat, data):
    for _ in range(4):
        k = data.draw(st.sampled_from(mat.ex))
        assert matrix_mutate(matrix_mutate(mat, k), k).entries == mat.entries
        mat = matrix_mutate(mat, k)
        again = validate_seed_matrix(mat.entries, mat.ex)
        assert again.symmetrizer == mat.symmetrizer and rank(mat.entries) == mat.n


@given(valid_matrices(), st.lists(st.integers(0, 4), max_size=3), st.integers(0, 4))
def test_seed_mutation_is_involutive_and_fixes_frozen(mat, path, k):
    s = Seed.initial(mat)
    s = mutate_along(s, [mat.ex[i % mat.n] for i in path])
    k = mat.ex[k % mat.n]
    t = seed_mutate(s, k)
    assert seed_mutate(t, k) == s
    assert t.frozen() == s.frozen()


CASES = [
    (((0, 2), (-2, 0)), [0, 1] * 4, 20),
    (((0, 1), (-4, 0)), [0, 1] * 4, 20),
    (((0, 2, -1), (-2, 0, 2), (1, -2, 0), (1, 1, 0)), [0, 1, 2, 0, 1], 1),
    (((0, 1, 0), (-1, 0, 2), (0, -1, 0), (2, -1, 1), (-1, 0, 2)), [0, 1, 2, 1, 0, 2], 1),
]


@pytest.mark.parametrize("rows,path,min_terms", CASES)
def test_packed_and_dictionary_paths_agree(monkeypatch, rows, path, min_terms):
    n = len(rows[0])
    mat = validate_seed_matrix(rows, range(n))
    results = []
    for threshold in (None, 1, 10 ** 18):
        if threshold is not None:
            monkeypatch.setattr(exchange, "KRONECKER_THRESHOLD", threshold)
            monkeypatch.setattr(laurent, "KRONECKER_THRESHOLD", threshold)
        results.append(mutate_along(Seed.initial(mat), path))
    assert results[0] == results[1] == results[2]
    assert max(len(v) for v in results[0].variables) > min_terms
