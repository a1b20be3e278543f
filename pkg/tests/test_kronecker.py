"""The packed big-integer routines against plain dictionary arithmetic."""
from collections import defaultdict

import pytest
from hypothesis import given, strategies as st

from clusterkit import kronecker
from clusterkit.errors import NonExactDivision


def naive_mul(a, b):
    acc = defaultdict(int)
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            acc[tuple(x + y for x, y in zip(e1, e2))] += c1 * c2
    return {e: c for e, c in acc.items() if c}


@st.composite
def lattice_terms(draw, nvars=3, max_terms=40, allow_big=True):
    """Terms on a shifted sublattice, with occasionally huge coefficients."""
    offset = [draw(st.integers(-20, 20)) for _ in range(nvars)]
    step = [draw(st.integers(1, 3)) for _ in range(nvars)]
    big = allow_big and draw(st.booleans())
    n = draw(st.integers(1, max_terms))
    out = {}
    for _ in range(n):
        e = tuple(o + s * draw(st.integers(0, 6)) for o, s in zip(offset, step))
        c = draw(st.integers(-10 ** 30, 10 ** 30) if big else st.integers(-5, 5))
        if c:
            out[e] = c
    return out or {tuple(offset): 1}


def ordered(d):
    return list(d.items()) == sorted(d.items(), reverse=True)


@given(lattice_terms(), lattice_terms())
def test_multiply(a, b):
    got = kronecker.multiply(a, b)
    assert got == naive_mul(a, b)
    assert ordered(got)


@given(lattice_terms(max_terms=8), st.integers(2, 4))
def test_power(a, k):
    expect = a
    for _ in range(k - 1):
        expect = naive_mul(expect, a)
    assert kronecker.power(a, k) == expect


@given(lattice_terms(), lattice_terms())
def test_divide_exact(a, b):
    prod = naive_mul(a, b)
    if not prod:
        return
    q = kronecker.divide(prod, b)
    assert q is None or q == a


@given(lattice_terms(), lattice_terms(), st.integers(1, 7))
def test_divide_never_accepts_a_wrong_quotient(a, b, bump):
    prod = naive_mul(a, b)
    e = next(iter(b))
    prod[e] = prod.get(e, 0) + bump
    prod = {k: v for k, v in prod.items() if v}
    try:
        q = kronecker.divide(prod, b)
    except NonExactDivision:
        return
    assert q is None or naive_mul(q, b) == prod


def test_divisor_span_exceeds_dividend():
    with pytest.raises(NonExactDivision):
        kronecker.divide({(0, 0): 1, (1, 0): 1}, {(0, 0): 1, (3, 0): 1})


factor = st.tuples(lattice_terms(max_terms=5, allow_big=False), st.integers(1, 2))


@given(st.lists(factor, max_size=2), st.lists(factor, max_size=2), lattice_terms(max_terms=5, allow_big=False))
def test_fused_exchange(plus, minus, den):
    sides = []
    for factors in (plus, minus):
        p = {(0, 0, 0): 1}
        for t, k in factors:
            for _ in range(k):
                p = naive_mul(p, t)
        sides.append(p)
    num = defaultdict(int)
    for side in sides:
        for e, c in side.items():
            num[e] += c
    num = {e: c for e, c in num.items() if c}
    if not num:
        return
    # both sides carry a factor den, so the quotient is plus + minus
    got = kronecker.exchange(plus + [(den, 1)], minus + [(den, 1)], den, 3)
    assert got is None or got == num
