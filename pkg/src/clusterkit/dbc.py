"""Seeds from double Bruhat cells of SL_{r+1}.

A word is a sequence ``i_1..i_m`` with ``i_j = j`` for ``j <= r`` followed by
a shuffle of a reduced word for ``u`` (negative letters) and one for ``v``
(positive letters).  Positions are 1-based here, as in the usual notation
``f_1..f_m``; minors use 1-based row and column sets.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import BadPrefix, IdentityViolated, IndexOutOfRange, MalformedInput, NotReduced, NotUnimodular, SizeMismatch
from .exchange import ExchangeMatrix, validate_seed_matrix
from .linalg import det
from .roots import cartan_matrix

Minor = tuple  # (rows, cols), each a sorted tuple of 1-based indices


def act(word: Sequence[int], subset, ) -> tuple[int, ...]:
    """Apply ``s_{w_1} ... s_{w_l}`` (rightmost first) to a subset of ``[1, r+1]``."""
    out = set(subset)
    for a in reversed(word):
        out = {a + 1 if x == a else a if x == a + 1 else x for x in out}
    return tuple(sorted(out))


def permutation(word: Sequence[int], size: int) -> tuple[int, ...]:
    """One-line notation of ``s_{w_1} ... s_{w_l}`` acting on ``1..size``."""
    return tuple(act(word, (x,))[0] for x in range(1, size + 1))


def length(perm: Sequence[int]) -> int:
    return sum(1 for a, b in combinations(perm, 2) if a > b)


def omega(i: int) -> tuple[int, ...]:
    return tuple(range(1, i + 1))


def minor_text(idx: Minor) -> str:
    rows, cols = idx
    return "D_" + "".join(map(str, rows)) + "," + "".join(map(str, cols))


@dataclass(frozen=True)
class ReducedWord:
    r: int
    entries: tuple[int, ...]
    u: tuple[int, ...] = field(init=False)
    v: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        r, e = self.r, tuple(self.entries)
        object.__setattr__(self, "entries", e)
        if r < 1:
            raise MalformedInput("rank must be positive")
        if any(not (1 <= abs(x) <= r) for x in e):
            raise MalformedInput(f"letters must lie in +-[1, {r}]")
        if e[:r] != tuple(range(1, r + 1)):
            raise BadPrefix(f"the first {r} letters must be 1..{r}")
        neg = [-x for x in e[r:] if x < 0]
        pos = [x for x in e[r:] if x > 0]
        u = permutation(neg, r + 1)
        v = permutation(pos, r + 1)
        if length(u) != len(neg) or length(v) != len(pos):
            raise NotReduced(f"{list(e)} is not a reduced word for its pair of permutations")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def m(self) -> int:
        return len(self.entries)

    def letter(self, k: int) -> int:
        if not 1 <= k <= self.m:
            raise IndexOutOfRange(f"position {k} outside [1, {self.m}]")
        return self.entries[k - 1]

    def k_plus(self, k: int) -> int:
        a = abs(self.letter(k))
        for l in range(k + 1, self.m + 1):
            if abs(self.entries[l - 1]) == a:
                return l
        return self.m + 1

    def k_minus(self, k: int) -> int:
        a = abs(self.letter(k))
        for l in range(k - 1, 0, -1):
            if abs(self.entries[l - 1]) == a:
                return l
        return 0

    @property
    def ex(self) -> tuple[int, ...]:
        return tuple(k for k in range(self.r + 1, self.m + 1) if self.k_plus(k) <= self.m)

    @property
    def frozen_positions(self) -> tuple[int, ...]:
        ex = set(self.ex)
        return tuple(k for k in range(1, self.m + 1) if k not in ex)


def build_word(r: int, entries: Sequence[int]) -> ReducedWord:
    return ReducedWord(r, tuple(entries))


def parse_word(text: str, r: int | None = None) -> ReducedWord:
    """Comma-separated letters; the rank defaults to the largest letter."""
    try:
        entries = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise MalformedInput(f"cannot parse word {text!r}") from None
    if not entries:
        raise MalformedInput("empty word")
    return build_word(r or max(abs(x) for x in entries), entries)


def gamma_delta(w: ReducedWord, k: int) -> Minor:
    """Row set ``gamma_k`` and column set ``delta_k`` of ``f_k``."""
    a = abs(w.letter(k))
    neg = [-x for x in w.entries[:k] if x < 0]
    pos = [x for x in w.entries[k:] if x > 0]
    return act(neg, omega(a)), act(list(reversed(pos)), omega(a))


def minors(w: ReducedWord) -> list[Minor]:
    return [gamma_delta(w, k) for k in range(1, w.m + 1)]


def frozen_set(w: ReducedWord) -> set[Minor]:
    return {gamma_delta(w, k) for k in w.frozen_positions}


def frozen_closed_form(w: ReducedWord) -> set[Minor]:
    """``(omega_j, v^-1 omega_j)`` for ``j <= r`` and ``(u omega_i, omega_i)``
    for the last occurrence of each ``+-i``."""
    r = w.r
    neg = [-x for x in w.entries[r:] if x < 0]
    pos = [x for x in w.entries[r:] if x > 0]
    out = {(omega(j), act(list(reversed(pos)), omega(j))) for j in range(1, r + 1)}
    for k in range(1, w.m + 1):
        if w.k_plus(k) == w.m + 1:
            i = abs(w.letter(k))
            out.add((act(neg, omega(i)), omega(i)))
    return out


def b_from_word(w: ReducedWord) -> ExchangeMatrix:
    """The ``m x |ex|`` matrix given by the five-case rule on ``k^-``, ``k^+``."""
    a = cartan_matrix("A", w.r)
    eps = lambda l: 1 if w.entries[l - 1] > 0 else -1
    ex = w.ex
    m = w.m
    rows = [[0] * len(ex) for _ in range(m)]
    for c, k in enumerate(ex):
        kp = w.k_plus(k)
        for p in range(1, m + 1):
            pp = w.k_plus(p)
            apk = a[abs(w.letter(p)) - 1][abs(w.letter(k)) - 1]
            if p == w.k_minus(k) and p != 0:
                val = -eps(k)
            elif p == kp:
                val = eps(p)
            elif (p < k < pp < kp and eps(k) == eps(pp)) or \
                    (p < k < kp < pp and eps(k) == -eps(kp)):
                val = -eps(k) * apk
            elif (k < p < kp < pp and eps(p) == eps(kp)) or \
                    (k < p < pp < kp and eps(p) == -eps(pp)):
                val = eps(p) * apk
            else:
                val = 0
            rows[p - 1][c] = val
    return validate_seed_matrix(rows, [k - 1 for k in ex], require_full_rank=False)


# -----------------------------------------------------------------------------
# evaluation


def as_fraction_matrix(x) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in x]


def eval_minor(idx: Minor, x) -> Fraction:
    rows, cols = idx
    size = len(x)
    if len(rows) != len(cols) or any(len(r) != size for r in x):
        raise SizeMismatch("minor needs equal row and column sets of a square matrix")
    if not all(1 <= i <= size for i in rows + cols):
        raise SizeMismatch(f"minor {minor_text(idx)} does not fit a {size}x{size} matrix")
    return det([[Fraction(x[i - 1][j - 1]) for j in cols] for i in rows])


def all_minors(size: int) -> list[Minor]:
    return [(rows, cols) for s in range(1, size + 1)
            for rows in combinations(range(1, size + 1), s)
            for cols in combinations(range(1, size + 1), s)]


def tp_test(w: ReducedWord, x) -> bool:
    """Whether every ``f_k`` is positive at ``x`` (which must have determinant 1)."""
    if len(x) != w.r + 1:
        raise SizeMismatch(f"expected a {w.r + 1}x{w.r + 1} matrix")
    if det(as_fraction_matrix(x)) != 1:
        raise NotUnimodular("matrix does not have determinant 1")
    return all(eval_minor(idx, x) > 0 for idx in minors(w))


def is_totally_positive(x) -> bool:
    return all(eval_minor(idx, x) > 0 for idx in all_minors(len(x)))


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _elementary(size: int, i: int, j: int, t) -> list[list[Fraction]]:
    e = [[Fraction(int(p == q)) for q in range(size)] for p in range(size)]
    e[i][j] = Fraction(t)
    return e


def _w0_word(r: int) -> list[int]:
    # s_1 (s_2 s_1) (s_3 s_2 s_1) ...
    return [j for i in range(1, r + 1) for j in range(i, 0, -1)]


def _positive(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 12), rng.randint(1, 4))


def tp_sample(r: int, rng: random.Random) -> list[list[Fraction]]:
    """Totally positive ``x`` of determinant 1 as lower bidiagonal factors
    times a positive diagonal times upper bidiagonal factors, one factor per
    letter of a reduced word for the longest permutation."""
    size = r + 1
    x = [[Fraction(int(p == q)) for q in range(size)] for p in range(size)]
    for i in _w0_word(r):
        x = _matmul(x, _elementary(size, i, i - 1, _positive(rng)))
    d = [_positive(rng) for _ in range(r)]
    prod = Fraction(1)
    for t in d:
        prod *= t
    d.append(1 / prod)
    x = [[v * d[j] for j, v in enumerate(row)] for row in x]
    for i in _w0_word(r):
        x = _matmul(x, _elementary(size, i - 1, i, _positive(rng)))
    return x


def random_sl(size: int, rng: random.Random, lo: int = -9, hi: int = 9) -> list[list[Fraction]]:
    """Random integer entries except the last, which is solved for so the
    determinant is 1."""
    while True:
        x = [[Fraction(rng.randint(lo, hi)) for _ in range(size)] for _ in range(size)]
        x[-1][-1] = Fraction(0)
        cof = det([row[:-1] for row in x[:-1]])
        if cof == 0:
            continue
        x[-1][-1] = (1 - det(x)) / cof
        return x


def rejection_sample_tp(w: ReducedWord, rng: random.Random, max_tries: int = 100000):
    """Random determinant-1 matrix with positive entries passing :func:`tp_test`."""
    for _ in range(max_tries):
        x = random_sl(w.r + 1, rng, 1, 9)
        if tp_test(w, x):
            return x
    return None


# -----------------------------------------------------------------------------
# exchange identities

EXAMPLE_WORD = (1, 2, 1, 2, 1, -1, -2, -1)


def example_identities(x, f3_columns=(1, 3)) -> dict[int, Fraction]:
    """Expected ``f'_3..f'_6`` for the word 1,2,1,2,1,-1,-2,-1.

    The exchange relation forces ``f'_3 = D_12,13`` (expand the row-12 minors
    along the three columns); ``f3_columns=(2, 3)`` gives the value
    ``D_12,23`` as it is often quoted, which does not hold.
    """
    D = lambda rows, cols: eval_minor((rows, cols), x)
    return {
        3: D((1, 2), tuple(f3_columns)),
        4: D((1,), (1,)) * D((2, 3), (2, 3)) - 1,
        5: D((2,), (2,)),
        6: D((1, 3), (1, 2)),
    }


def exchanged_values(w: ReducedWord, x) -> dict[int, Fraction | None]:
    """``f'_k`` at ``x`` for each exchangeable ``k``; ``None`` where ``f_k(x) = 0``."""
    b = b_from_word(w).entries
    f = [eval_minor(idx, x) for idx in minors(w)]
    out = {}
    for c, k in enumerate(w.ex):
        if f[k - 1] == 0:
            out[k] = None
            continue
        plus = minus = Fraction(1)
        for p, row in enumerate(b):
            if row[c] > 0:
                plus *= f[p] ** row[c]
            elif row[c] < 0:
                minus *= f[p] ** (-row[c])
        out[k] = (plus + minus) / f[k - 1]
    return out


def check_identities_at(w: ReducedWord, x, expected=None) -> bool:
    """Compare every ``f'_k(x)`` with ``expected(x)[k]`` (default
    :func:`example_identities`); ``False`` means skipped
    because some ``f_k(x)`` vanishes.  Raises :class:`IdentityViolated`."""
    if expected is None:
        if w.entries != EXAMPLE_WORD:
            raise MalformedInput("expected values are built in only for the word 1,2,1,2,1,-1,-2,-1")
        expected = example_identities
    got = exchanged_values(w, x)
    if any(v is None for v in got.values()):
        return False
    want = expected(x)
    for k, v in got.items():
        if v != want[k]:
            raise IdentityViolated(f"f'_{k} = {v} but the expected value is {want[k]} at {x}")
    return True


@dataclass
class IdentityReport:
    trials: int
    checked: int
    skipped: int


def exchange_identity_check(w: ReducedWord, trials: int, rng: random.Random, expected=None) -> IdentityReport:
    """Check the identities on ``trials`` random matrices where no ``f_k``
    vanishes; samples where one does are counted in ``skipped``."""
    checked = skipped = 0
    while checked < trials:
        if check_identities_at(w, random_sl(w.r + 1, rng), expected):
            checked += 1
        else:
            skipped += 1
    return IdentityReport(checked + skipped, checked, skipped)


def generic_points(w: ReducedWord, count: int, rng: random.Random) -> list:
    """Random determinant-1 matrices at which no ``f_k`` vanishes."""
    out = []
    while len(out) < count:
        x = random_sl(w.r + 1, rng)
        if all(eval_minor(idx, x) for idx in minors(w)):
            out.append(x)
    return out


# -----------------------------------------------------------------------------
# the type D4 example


def example_targets(x) -> list[Fraction]:
    """Values at ``x`` of the expected exchangeable cluster variables: the 14
    minors other than the determinant and the four frozen ones, and two
    cubics."""
    w = build_word(2, EXAMPLE_WORD)
    frozen = frozen_set(w)
    out = [eval_minor(idx, x) for idx in all_minors(3) if len(idx[0]) < 3 and idx not in frozen]
    X = lambda i, j: x[i - 1][j - 1]
    out.append(X(1, 2) * X(2, 1) * X(3, 3) - X(1, 2) * X(2, 3) * X(3, 1)
               - X(1, 3) * X(2, 1) * X(3, 2) + X(1, 3) * X(2, 2) * X(3, 1))
    out.append(X(1, 1) * X(2, 3) * X(3, 2) - X(1, 2) * X(2, 3) * X(3, 1)
               - X(1, 3) * X(2, 1) * X(3, 2) + X(1, 3) * X(2, 2) * X(3, 1))
    return out


def match_cluster_variables(variables, w: ReducedWord, targets, points) -> dict[int, int] | None:
    """Match Laurent cluster variables (in ``f_1..f_m``) with target functions
    by exact evaluation at each point of ``points``.

    Returns ``{variable index: target index}`` when it is a bijection, else
    ``None``.
    """
    idx = minors(w)
    vals_v = [[] for _ in variables]
    vals_t = [[] for _ in range(len(targets(points[0])))]
    for x in points:
        f = [eval_minor(i, x) for i in idx]
        for a, y in enumerate(variables):
            vals_v[a].append(y.evaluate(f))
        for b, t in enumerate(targets(x)):
            vals_t[b].append(t)
    where = {}
    for b, vec in enumerate(vals_t):
        where.setdefault(tuple(vec), []).append(b)
    out = {}
    for a, vec in enumerate(vals_v):
        hits = where.get(tuple(vec), [])
        if len(hits) != 1:
            return None
        out[a] = hits[0]
    if sorted(out.values()) != list(range(len(vals_t))):
        return None
    return out
