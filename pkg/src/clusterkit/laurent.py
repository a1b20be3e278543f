"""Integer Laurent polynomials in a fixed list of named variables.

A polynomial is stored as a mapping ``exponent tuple -> nonzero int``.
Exponents may be negative.  Terms are kept in descending lexicographic order
of their exponent vectors, which makes equality, hashing and the text form
structural.

    >>> x1, x2 = LaurentPoly.gens(2)
    >>> str((x2 + 1) * x1 ** -1)
    'x1^-1*x2 + x1^-1'
"""
from __future__ import annotations

import heapq
import re
from fractions import Fraction
from operator import add, sub
from typing import Iterable, Mapping, Sequence

from . import kronecker
from .errors import (
    DivisionByZero,
    MalformedInput,
    NonExactDivision,
    VarCountMismatch,
    ZeroAtNegativeExponent,
    ZeroPolynomial,
)

Exponents = tuple  # tuple[int, ...]

# products with at least this many term pairs go through Kronecker packing
KRONECKER_THRESHOLD = 4096


def default_names(m: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, m + 1))


class LaurentPoly:
    """Immutable integer Laurent polynomial.

    Parameters
    ----------
    terms : mapping from exponent tuples to integer coefficients.  Zero
        coefficients are dropped.
    names : variable names; their count is the ambient variable count ``m``.
    """

    __slots__ = ("_terms", "_names", "_hash")

    def __init__(self, terms: Mapping[Exponents, int] | Iterable, names: Sequence[str]):
        names = tuple(names)
        m = len(names)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, int] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != m:
                raise VarCountMismatch(f"exponent vector {exps} has length {len(exps)}, expected {m}")
            if not isinstance(c, int):
                raise TypeError(f"coefficient {c!r} is not an integer")
            acc[exps] = acc.get(exps, 0) + c
        self._terms = {e: acc[e] for e in sorted(acc, reverse=True) if acc[e] != 0}
        self._names = names
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, names: tuple) -> "LaurentPoly":
        # terms already nonzero; only ordering is restored
        p = object.__new__(cls)
        p._terms = {e: terms[e] for e in sorted(terms, reverse=True)}
        p._names = names
        p._hash = None
        return p

    @classmethod
    def _ordered(cls, terms: dict, names: tuple) -> "LaurentPoly":
        # terms already nonzero and in descending lex order
        p = object.__new__(cls)
        p._terms = terms
        p._names = names
        p._hash = None
        return p

    def __getstate__(self):
        # the cached hash depends on per-process string hashing
        return (self._terms, self._names)

    def __setstate__(self, state):
        self._terms, self._names = state
        self._hash = None

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, names):
        return cls({}, names)

    @classmethod
    def constant(cls, c: int, names) -> "LaurentPoly":
        names = tuple(names)
        return cls({(0,) * len(names): c}, names)

    @classmethod
    def monomial(cls, exps: Sequence[int], names, coeff: int = 1) -> "LaurentPoly":
        return cls({tuple(exps): coeff}, names)

    @classmethod
    def variable(cls, i: int, names) -> "LaurentPoly":
        names = tuple(names)
        e = [0] * len(names)
        e[i] = 1
        return cls({tuple(e): 1}, names)

    @classmethod
    def gens(cls, m_or_names) -> list["LaurentPoly"]:
        names = default_names(m_or_names) if isinstance(m_or_names, int) else tuple(m_or_names)
        return [cls.variable(i, names) for i in range(len(names))]

    # -- basic accessors -------------------------------------------------------
    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def nvars(self) -> int:
        return len(self._names)

    @property
    def terms(self) -> dict:
        """A copy of the term map, in canonical order."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def sort_key(self) -> tuple:
        """Total order used to canonicalize clusters."""
        return tuple(self._terms.items())

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other, self._names)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._names == other._names and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._names, tuple(self._terms.items())))
        return self._hash

    def __lt__(self, other: "LaurentPoly"):
        return self.sort_key() < other.sort_key()

    # -- arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other._names != self._names:
                raise VarCountMismatch(
                    f"variables {self._names} and {other._names} differ")
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other, self._names)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            s = acc.get(e, 0) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return LaurentPoly._raw(acc, self._names)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()}, self._names)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if len(self._terms) * len(other._terms) >= KRONECKER_THRESHOLD:
            out = kronecker.multiply(self._terms, other._terms)
            if out is not None:
                return LaurentPoly._ordered(out, self._names)
        acc: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(map(add, e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in acc.items() if c}, self._names)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise NonExactDivision("negative power of a non-monomial")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise NonExactDivision(f"coefficient {c} is not a unit")
            return LaurentPoly._raw({tuple(k * x for x in e): c ** (-k)}, self._names)
        if k >= 2 and len(self._terms) ** 2 >= KRONECKER_THRESHOLD:
            out = kronecker.power(self._terms, k)
            if out is not None:
                return LaurentPoly._ordered(out, self._names)
        result = LaurentPoly.constant(1, self._names)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        return exact_div(self, self._coerce(other))

    # -- valuations -------------------------------------------------------------
    def min_exponents(self) -> tuple[int, ...]:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no minimal exponents")
        return tuple(min(col) for col in zip(*self._terms))

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial ``x^exps``."""
        return LaurentPoly._raw(
            {tuple(map(add, e, exps)): c for e, c in self._terms.items()}, self._names)

    def has_nonnegative_coefficients(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def total_degree_range(self) -> tuple[int, int]:
        degs = [sum(e) for e in self._terms]
        return min(degs), max(degs)

    # -- evaluation -------------------------------------------------------------
    def evaluate(self, point: Sequence) -> Fraction:
        return eval_rational(self, point)

    def substitute(self, values: Sequence, one=1, combine=None):
        """Evaluate with arbitrary ring elements.

        ``values[i]`` is substituted for variable ``i``; it must support ``*``,
        ``+`` and, where a negative exponent occurs, ``**`` with negative
        exponents (or be a :class:`LaurentPoly` monomial).
        """
        total = None
        for e, c in self._terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v ** k
            total = term if total is None else total + term
        return total if total is not None else 0 * one

    # -- text form --------------------------------------------------------------
    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"LaurentPoly({to_text(self)!r})"


# -----------------------------------------------------------------------------
# module-level operations


def arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    """Apply ``op`` in {"add", "sub", "mul"}."""
    if a.names != b.names:
        raise VarCountMismatch(f"{a.nvars} vs {b.nvars} variables")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Return ``q`` with ``q * den == num`` or raise :class:`NonExactDivision`.

    Both operands are shifted by monomials so that neither is divisible by a
    variable; a Laurent quotient of such polynomials is an honest polynomial
    (minimal exponents add under multiplication), so ordinary division with
    respect to lex order decides the question.
    """
    if num.names != den.names:
        raise VarCountMismatch(f"{num.nvars} vs {den.nvars} variables")
    if not den:
        raise DivisionByZero("division by the zero Laurent polynomial")
    names = num.names
    if not num:
        return num
    dterms = den._terms
    if len(dterms) == 1:
        (de, dc), = dterms.items()
        out = {}
        for e, c in num._terms.items():
            q, r = divmod(c, dc)
            if r:
                raise NonExactDivision(f"coefficient {c} not divisible by {dc}")
            out[tuple(map(sub, e, de))] = q
        return LaurentPoly._raw(out, names)

    if len(num._terms) * len(dterms) >= KRONECKER_THRESHOLD:
        out = kronecker.divide(num._terms, dterms)
        if out is not None:
            return LaurentPoly._ordered(out, names)
    a = num.min_exponents()
    b = den.min_exponents()
    neg_a = tuple(-x for x in a)
    neg_b = tuple(-x for x in b)
    rem = {tuple(map(add, e, neg_a)): c for e, c in num._terms.items()}
    dpoly = [(tuple(map(add, e, neg_b)), c) for e, c in dterms.items()]
    lead_e, lead_c = dpoly[0]  # descending lex order
    rest = dpoly[1:]

    # max-heap of remainder exponents (lazy deletion)
    heap = [tuple(-x for x in e) for e in rem]
    heapq.heapify(heap)
    quot: dict = {}
    while rem:
        while True:
            top = tuple(-x for x in heapq.heappop(heap))
            if top in rem:
                break
        c = rem.pop(top)
        qe = tuple(map(sub, top, lead_e))
        if min(qe) < 0:
            raise NonExactDivision(f"{num} is not divisible by {den}")
        qc, r = divmod(c, lead_c)
        if r:
            raise NonExactDivision(f"{num} is not divisible by {den}")
        quot[qe] = qc
        for de, dc in rest:
            e = tuple(map(add, qe, de))
            s = rem.get(e, 0) - qc * dc
            if s:
                if e not in rem:
                    heapq.heappush(heap, tuple(-x for x in e))
                rem[e] = s
            else:
                rem.pop(e, None)
    shift = tuple(map(sub, a, b))
    return LaurentPoly._raw({tuple(map(add, e, shift)): c for e, c in quot.items()}, names)


def eval_rational(p: LaurentPoly, point: Sequence) -> Fraction:
    """Exact value of ``p`` at a point with rational coordinates."""
    if len(point) != p.nvars:
        raise VarCountMismatch(f"point has {len(point)} coordinates, expected {p.nvars}")
    pt = [Fraction(v) for v in point]
    total = Fraction(0)
    for e, c in p.items():
        term = Fraction(c)
        for v, k in zip(pt, e):
            if k < 0 and v == 0:
                raise ZeroAtNegativeExponent("zero coordinate under a negative exponent")
            if k:
                term *= v ** k
        total += term
    return total


def eval_mod(p: LaurentPoly, point: Sequence[int], prime: int) -> int:
    """Value of ``p`` in GF(prime) at a point of nonzero residues."""
    total = 0
    inv = [pow(v, -1, prime) if v % prime else None for v in point]
    for e, c in p.items():
        term = c % prime
        for v, iv, k in zip(point, inv, e):
            if k > 0:
                term = term * pow(v, k, prime) % prime
            elif k < 0:
                if iv is None:
                    raise ZeroAtNegativeExponent("zero residue under a negative exponent")
                term = term * pow(iv, -k, prime) % prime
        total = (total + term) % prime
    return total


def denominator_vector(y: LaurentPoly, cluster_idx: Sequence[int]) -> tuple[int, ...]:
    """Denominator vector of ``y`` with respect to the variables ``cluster_idx``.

    Entry ``d_i`` is minus the minimal exponent of the ``i``-th cluster
    variable over the terms of ``y``.
    """
    if not y:
        raise ZeroPolynomial("the zero polynomial has no denominator vector")
    mins = y.min_exponents()
    return tuple(-mins[i] for i in cluster_idx)


# -----------------------------------------------------------------------------
# text form: ``3*x1^2*x2^-1 + -1``


def _term_text(e, c, names) -> str:
    factors = []
    for name, k in zip(names, e):
        if k == 1:
            factors.append(name)
        elif k:
            factors.append(f"{name}^{k}")
    if not factors:
        return str(c)
    if c == 1:
        return "*".join(factors)
    return f"{c}*" + "*".join(factors)


def to_text(p: LaurentPoly) -> str:
    if not p:
        return "0"
    return " + ".join(_term_text(e, c, p.names) for e, c in p.items())


_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?$")


def parse_laurent(text: str, names: Sequence[str]) -> LaurentPoly:
    """Parse the canonical text form (``+`` separated terms, ``*`` factors).

    A binary minus (``a - b``) is also accepted.
    """
    names = tuple(names)
    index = {n: i for i, n in enumerate(names)}
    s = text.replace(" ", "")
    if not s:
        raise MalformedInput("empty polynomial text")
    # turn binary minus into '+-' without touching exponents like x^-1
    s = re.sub(r"(?<=[0-9A-Za-z_])-", "+-", s)
    terms = {}
    for raw in s.split("+"):
        if not raw:
            raise MalformedInput(f"empty term in {text!r}")
        coeff = 1
        exps = [0] * len(names)
        body = raw
        if body.startswith("-") and not re.match(r"^-\d", body):
            coeff, body = -1, body[1:]
        for factor in body.split("*"):
            if re.fullmatch(r"-?\d+", factor):
                coeff *= int(factor)
                continue
            mt = _FACTOR.match(factor)
            if not mt or mt.group(1) not in index:
                raise MalformedInput(f"bad factor {factor!r} in {text!r}")
            exps[index[mt.group(1)]] += int(mt.group(2) or 1)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    return LaurentPoly(terms, names)
