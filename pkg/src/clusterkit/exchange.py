"""Extended exchange matrices, seeds and their mutations.

Indices are 0-based in the Python API: rows of an ``m x n`` matrix are the
positions ``0..m-1`` of the extended cluster and ``ex`` lists the (sorted)
rows that label the columns.  A mutation direction ``k`` is a row label in
``ex``, not a column number.  The JSON seed format is 1-based.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import MalformedInput, NotExchangeable, NotSkewSymmetrizable, RankDeficient
from . import kronecker
from .laurent import KRONECKER_THRESHOLD, LaurentPoly, default_names, exact_div, parse_laurent
from .linalg import rank

Matrix = tuple  # tuple[tuple[int, ...], ...]


def as_int_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    out = tuple(tuple(int(v) for v in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise MalformedInput("matrix rows have different lengths")
    return out


def find_symmetrizer(b: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Least positive integer ``d`` with ``d[i]*b[i][k] == -d[k]*b[k][i]``.

    Each connected component of the nonzero pattern is normalized on its own
    to coprime entries, which gives the entrywise-minimal symmetrizer.
    """
    n = len(b)
    d: list[Fraction | None] = [None] * n
    for i in range(n):
        if b[i][i] != 0:
            raise NotSkewSymmetrizable(f"diagonal entry b[{i}][{i}] = {b[i][i]} is nonzero")
        for k in range(i + 1, n):
            if (b[i][k] == 0) != (b[k][i] == 0):
                raise NotSkewSymmetrizable(f"b[{i}][{k}] and b[{k}][{i}] have different zero patterns")
            if b[i][k] * b[k][i] > 0:
                raise NotSkewSymmetrizable(f"b[{i}][{k}] and b[{k}][{i}] have the same sign")
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        component = [root]
        stack = [root]
        while stack:
            i = stack.pop()
            for k in range(n):
                if b[i][k] == 0:
                    continue
                # d_i |b_ik| = d_k |b_ki|
                want = d[i] * abs(b[i][k]) / abs(b[k][i])
                if d[k] is None:
                    d[k] = want
                    component.append(k)
                    stack.append(k)
                elif d[k] != want:
                    raise NotSkewSymmetrizable(f"no consistent symmetrizer around rows {i}, {k}")
        scale = lcm(*(d[i].denominator for i in component))
        ints = [int(d[i] * scale) for i in component]
        g = gcd(*ints)
        for i, v in zip(component, ints):
            d[i] = Fraction(v // g)
    return tuple(int(x) for x in d)


@dataclass(frozen=True)
class ExchangeMatrix:
    """An ``m x n`` integer matrix with exchangeable row set ``ex``.

    Build validated instances with :func:`validate_seed_matrix`; the raw
    constructor trusts its input.
    """

    entries: Matrix
    ex: tuple[int, ...]
    symmetrizer: tuple[int, ...] | None = None

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.ex)

    def column_of(self, k: int) -> int:
        try:
            return self.ex.index(k)
        except ValueError:
            raise NotExchangeable(f"direction {k} is not in ex = {list(self.ex)}") from None

    def column(self, k: int) -> tuple[int, ...]:
        j = self.column_of(k)
        return tuple(row[j] for row in self.entries)

    def principal(self) -> Matrix:
        return tuple(tuple(self.entries[i][j] for j in range(self.n)) for i in self.ex)

    def frozen_rows(self) -> tuple[int, ...]:
        exs = set(self.ex)
        return tuple(i for i in range(self.m) if i not in exs)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def validate_seed_matrix(rows, ex: Sequence[int], *, require_full_rank: bool = True) -> ExchangeMatrix:
    """Check the seed conditions and return an :class:`ExchangeMatrix`.

    Raises :class:`NotSkewSymmetrizable` or :class:`RankDeficient`.
    ``require_full_rank=False`` admits degenerate matrices such as ``[[0]]``
    which still define mutations.
    """
    entries = as_int_matrix(rows)
    ex = tuple(sorted(int(k) for k in ex))
    m = len(entries)
    n = len(ex)
    if len(set(ex)) != n:
        raise MalformedInput(f"repeated index in ex = {list(ex)}")
    if any(not 0 <= k < m for k in ex):
        raise MalformedInput(f"ex = {list(ex)} is not a subset of rows 0..{m - 1}")
    if m and len(entries[0]) != n:
        raise MalformedInput(f"matrix has {len(entries[0])} columns but |ex| = {n}")
    principal = [[entries[i][j] for j in range(n)] for i in ex]
    d = find_symmetrizer(principal)
    if require_full_rank and rank(entries) != n:
        raise RankDeficient(f"matrix does not have full rank {n}")
    return ExchangeMatrix(entries, ex, d)


def matrix_mutate(mat: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Matrix mutation in direction ``k`` (a row label in ``ex``)."""
    c = mat.column_of(k)
    b = mat.entries
    out = []
    for i, row in enumerate(b):
        bik = row[c]
        new_row = []
        for j, bij in enumerate(row):
            if i == k or j == c:
                new_row.append(-bij)
                continue
            bkj = b[k][j]
            num = abs(bik) * bkj + bik * abs(bkj)
            # num is 0 or 2*b_ik*b_kj (same signs); the halving is exact
            assert num % 2 == 0
            new_row.append(bij + num // 2)
        out.append(tuple(new_row))
    return ExchangeMatrix(tuple(out), mat.ex, mat.symmetrizer)


@dataclass(frozen=True)
class Seed:
    """Extended cluster (as Laurent polynomials in the initial variables) plus matrix."""

    variables: tuple[LaurentPoly, ...]
    matrix: ExchangeMatrix

    def __post_init__(self):
        if len(self.variables) != self.matrix.m:
            raise MalformedInput(
                f"{len(self.variables)} variables for a matrix with {self.matrix.m} rows")

    @classmethod
    def initial(cls, matrix: ExchangeMatrix, names: Sequence[str] | None = None) -> "Seed":
        names = tuple(names) if names is not None else default_names(matrix.m)
        return cls(tuple(LaurentPoly.gens(names)), matrix)

    @property
    def ex(self) -> tuple[int, ...]:
        return self.matrix.ex

    @property
    def names(self) -> tuple[str, ...]:
        return self.variables[0].names

    def cluster(self) -> tuple[LaurentPoly, ...]:
        return tuple(self.variables[k] for k in self.matrix.ex)

    def frozen(self) -> tuple[LaurentPoly, ...]:
        return tuple(self.variables[i] for i in self.matrix.frozen_rows())


def exchange_partner(seed: Seed, k: int) -> LaurentPoly:
    """The new variable ``x'_k`` produced by the exchange relation in direction ``k``."""
    col = seed.matrix.column(k)
    plus = [(x, b) for x, b in zip(seed.variables, col) if b > 0]
    minus = [(x, -b) for x, b in zip(seed.variables, col) if b < 0]
    den = seed.variables[k]
    work = len(den)
    for x, b in plus + minus:
        work *= len(x) ** b
    if work >= KRONECKER_THRESHOLD:
        out = kronecker.exchange([(x.terms, b) for x, b in plus],
                                 [(x.terms, b) for x, b in minus], den.terms, len(seed.names))
        if out is not None:
            return LaurentPoly._ordered(out, seed.names)
    one = LaurentPoly.constant(1, seed.names)
    sides = []
    for factors in (plus, minus):
        p = one
        for x, b in factors:
            p = p * x ** b
        sides.append(p)
    return exact_div(sides[0] + sides[1], den)


def seed_mutate(seed: Seed, k: int) -> Seed:
    new_var = exchange_partner(seed, k)
    variables = list(seed.variables)
    variables[k] = new_var
    return Seed(tuple(variables), matrix_mutate(seed.matrix, k))


def mutate_along(seed: Seed, directions: Iterable[int]) -> Seed:
    for k in directions:
        seed = seed_mutate(seed, k)
    return seed


def rank2_seed(b: int, c: int) -> Seed:
    """Initial seed of the rank-2 algebra with ``B = [[0, b], [-c, 0]]``."""
    mat = validate_seed_matrix([[0, b], [-c, 0]], [0, 1])
    return Seed.initial(mat, ("y1", "y2"))


# -----------------------------------------------------------------------------
# JSON seed format (1-based ``ex``)


def seed_to_dict(seed: Seed) -> dict:
    mat = seed.matrix
    out = {
        "m": mat.m,
        "n": mat.n,
        "ex": [k + 1 for k in mat.ex],
        "matrix": mat.rows(),
        "variables": [str(v) for v in seed.variables],
    }
    if seed.names != default_names(mat.m):
        out["names"] = list(seed.names)
    return out


def seed_from_dict(data: dict, *, require_full_rank: bool = True) -> Seed:
    try:
        m = int(data["m"])
        n = int(data["n"])
        ex = [int(k) - 1 for k in data["ex"]]
        rows = data["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad seed JSON: {exc}") from None
    names = tuple(data.get("names") or default_names(m))
    if len(names) != m or len(ex) != n or len(rows) != m:
        raise MalformedInput("seed JSON sizes disagree with m and n")
    mat = validate_seed_matrix(rows, ex, require_full_rank=require_full_rank)
    texts = data.get("variables")
    if texts is None:
        return Seed.initial(mat, names)
    if len(texts) != m:
        raise MalformedInput(f"expected {m} variables, got {len(texts)}")
    return Seed(tuple(parse_laurent(t, names) for t in texts), mat)


def dumps_seed(seed: Seed, **kw) -> str:
    return json.dumps(seed_to_dict(seed), **kw)


def loads_seed(text: str, **kw) -> Seed:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None
    return seed_from_dict(data, **kw)
