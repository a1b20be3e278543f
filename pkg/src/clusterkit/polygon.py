"""Triangulations of a convex polygon, flips, and Ptolemy/Plucker relations.

Vertices of the ``(n+3)``-gon are labeled ``1..N`` clockwise and a chord is a
sorted pair ``(i, j)``.  A :class:`Triangulation` carries a numbering of all
``2n+3`` chords: positions ``0..n-1`` are the diagonals (the exchangeable
rows), the remaining positions are the boundary sides.
"""
from __future__ import annotations

import random
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import InvalidTriangulation, MalformedInput, NotADiagonal, RelationViolated, WrongType
from .exchange import ExchangeMatrix, matrix_mutate, validate_seed_matrix
from .roots import Root, RootSystem

Chord = tuple  # tuple[int, int]


def chord(i: int, j: int) -> Chord:
    return (i, j) if i < j else (j, i)


def sides(N: int) -> list[Chord]:
    """Boundary sides in the default order ``[1,2], ..., [N-1,N], [1,N]``."""
    return [(i, i + 1) for i in range(1, N)] + [(1, N)]


def is_side(c: Chord, N: int) -> bool:
    a, b = c
    return b - a == 1 or (a == 1 and b == N)


def crosses(c: Chord, d: Chord) -> bool:
    """Interior intersection: four distinct endpoints and exactly one of ``d``'s
    endpoints strictly between those of ``c``."""
    a, b = c
    x, y = d
    if len({a, b, x, y}) < 4:
        return False
    return (a < x < b) != (a < y < b)


@dataclass(frozen=True)
class Triangulation:
    """Labeled triangulation of the ``(n+3)``-gon.

    Parameters
    ----------
    n : rank (number of diagonals).
    labels : all ``2n+3`` chords; the first ``n`` are the diagonals.
    """

    n: int
    labels: tuple[Chord, ...]

    def __post_init__(self):
        N = self.n + 3
        labels = tuple(chord(*c) for c in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) != 2 * self.n + 3 or len(set(labels)) != len(labels):
            raise InvalidTriangulation(f"need {2 * self.n + 3} distinct chords")
        for c in labels:
            if not (1 <= c[0] < c[1] <= N):
                raise InvalidTriangulation(f"chord {list(c)} is not a chord of the {N}-gon")
        diags = labels[: self.n]
        if any(is_side(c, N) for c in diags):
            raise InvalidTriangulation("a side is listed among the diagonals")
        if set(labels[self.n:]) != set(sides(N)):
            raise InvalidTriangulation("the last n+3 labels must be the boundary sides")
        for c, d in combinations(diags, 2):
            if crosses(c, d):
                raise InvalidTriangulation(f"diagonals {list(c)} and {list(d)} cross")

    @property
    def N(self) -> int:
        return self.n + 3

    @property
    def diagonals(self) -> tuple[Chord, ...]:
        return self.labels[: self.n]

    def key(self) -> frozenset:
        """The underlying set of diagonals, forgetting labels."""
        return frozenset(self.diagonals)

    def triangles(self) -> list[tuple[int, int, int]]:
        present = set(self.labels)
        out = [t for t in combinations(range(1, self.N + 1), 3)
               if {(t[0], t[1]), (t[1], t[2]), (t[0], t[2])} <= present]
        if len(out) != self.n + 1:
            raise InvalidTriangulation(f"found {len(out)} triangles, expected {self.n + 1}")
        return out

    def to_text(self) -> str:
        parts = [str(self.n)] + [f"d{k + 1}=[{a},{b}]" for k, (a, b) in enumerate(self.diagonals)]
        if tuple(self.labels[self.n:]) != tuple(sides(self.N)):
            parts += [f"s{self.n + k + 1}=[{a},{b}]" for k, (a, b) in enumerate(self.labels[self.n:])]
        return "; ".join(parts)


def triangulation(n: int, diagonals: Sequence[Chord], side_order: Sequence[Chord] | None = None) -> Triangulation:
    side_order = side_order if side_order is not None else sides(n + 3)
    return Triangulation(n, tuple(chord(*d) for d in diagonals) + tuple(chord(*s) for s in side_order))


_ENTRY = re.compile(r"([ds])(\d+)\s*=\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]")


def parse_triangulation(text: str) -> Triangulation:
    """Parse ``"n; d1=[i,j]; ...; dn=[i,j]"`` with optional ``sK=[i,j]`` side labels."""
    parts = [p.strip() for p in text.strip().split(";") if p.strip()]
    try:
        n = int(parts[0])
    except (IndexError, ValueError):
        raise MalformedInput(f"triangulation text must start with the rank: {text!r}") from None
    diags: dict[int, Chord] = {}
    side_lab: dict[int, Chord] = {}
    for p in parts[1:]:
        m = _ENTRY.fullmatch(p)
        if not m:
            raise MalformedInput(f"cannot parse {p!r}")
        kind, k, a, b = m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4))
        (diags if kind == "d" else side_lab)[k] = chord(a, b)
    if sorted(diags) != list(range(1, n + 1)):
        raise MalformedInput(f"expected diagonals d1..d{n}")
    order = None
    if side_lab:
        if sorted(side_lab) != list(range(n + 1, 2 * n + 4)):
            raise MalformedInput(f"side labels must be s{n + 1}..s{2 * n + 3}")
        order = [side_lab[k] for k in sorted(side_lab)]
    return triangulation(n, [diags[k] for k in range(1, n + 1)], order)


def b_from_triangulation(t: Triangulation) -> ExchangeMatrix:
    """``b_ij = 1`` if chord ``j`` follows chord ``i`` clockwise in a common
    triangle, ``-1`` if it precedes it, else ``0`` (``j`` a diagonal)."""
    pos = {c: k for k, c in enumerate(t.labels)}
    m, n = len(t.labels), t.n
    b = [[0] * n for _ in range(m)]
    for p, q, r in t.triangles():
        cyc = [pos[(p, q)], pos[(q, r)], pos[(p, r)]]  # clockwise around the triangle
        for s in range(3):
            i, j = cyc[s], cyc[(s + 1) % 3]
            if j < n:
                b[i][j] += 1
            if i < n:
                b[j][i] -= 1
    return validate_seed_matrix(b, range(n))


def _quadrilateral(t: Triangulation, k: int) -> tuple[Chord, Chord]:
    if not 0 <= k < t.n:
        raise NotADiagonal(f"label {k + 1} is not a diagonal (diagonals are 1..{t.n})")
    a, b = t.labels[k]
    apex = [x for tri in t.triangles() if a in tri and b in tri for x in tri if x not in (a, b)]
    assert len(apex) == 2
    return (a, b), chord(*apex)


def flip(t: Triangulation, k: int) -> Triangulation:
    """Replace diagonal ``k`` (0-based label) by the other diagonal of its quadrilateral."""
    _, new = _quadrilateral(t, k)
    labels = list(t.labels)
    labels[k] = new
    return Triangulation(t.n, tuple(labels))


def flip_mutation_commutes(t: Triangulation, k: int) -> bool:
    return b_from_triangulation(flip(t, k)).entries == matrix_mutate(b_from_triangulation(t), k).entries


def fan_triangulation(n: int) -> Triangulation:
    """All diagonals from vertex 1."""
    return triangulation(n, [(1, j) for j in range(3, n + 3)])


def snake_diagonals(n: int) -> list[Chord]:
    """The zig-zag triangulation ``[1,N-1], [1,N-2], [2,N-2], [2,N-3], ...``."""
    N = n + 3
    out = []
    for k in range(1, n + 1):
        if k % 2:
            out.append((1 + (k - 1) // 2, N - 1 - (k - 1) // 2))
        else:
            out.append((1 + (k - 2) // 2, N - 1 - k // 2))
    return out


def snake(n: int) -> Triangulation:
    return triangulation(n, snake_diagonals(n))


def flip_graph(n: int):
    """All triangulations of the ``(n+3)``-gon and their flip adjacency.

    Returns ``(triangulations, edges)``; triangulations are reached by BFS
    from the fan and identified by their diagonal sets.
    """
    start = fan_triangulation(n)
    index = {start.key(): 0}
    nodes = [start]
    edges = set()
    queue = deque([0])
    while queue:
        i = queue.popleft()
        t = nodes[i]
        for k in range(n):
            u = flip(t, k)
            j = index.get(u.key())
            if j is None:
                j = len(nodes)
                index[u.key()] = j
                nodes.append(u)
                queue.append(j)
            edges.add((min(i, j), max(i, j)))
    return nodes, sorted(edges)


def all_triangulations(n: int) -> list[Triangulation]:
    return flip_graph(n)[0]


# -----------------------------------------------------------------------------
# snake dictionary


def snake_dictionary(rs: RootSystem) -> dict[Root, Chord]:
    """Almost positive roots of type ``A_n`` to diagonals of the ``(n+3)``-gon.

    ``-alpha_i`` goes to the ``i``-th snake diagonal and ``alpha_i + ... +
    alpha_j`` to the unique diagonal crossing exactly snake diagonals
    ``i..j``.
    """
    if len(rs.components) != 1 or rs.components[0][0] != "A":
        raise WrongType(f"the polygon model needs type A, got {rs.label}")
    n = rs.rank
    N = n + 3
    sn = snake_diagonals(n)
    out = {rs.negative_simple(i): sn[i] for i in range(n)}
    all_diags = [c for c in combinations(range(1, N + 1), 2) if not is_side(c, N)]
    for beta in rs.positive_roots:
        support = [i for i in range(n) if beta[i]]
        hits = [d for d in all_diags
                if [i for i in range(n) if crosses(d, sn[i])] == support]
        if len(hits) != 1:
            raise AssertionError(f"{len(hits)} diagonals cross exactly the snake diagonals {support}")
        out[beta] = hits[0]
    if len(set(out.values())) != len(all_diags):
        raise AssertionError("snake dictionary is not a bijection")
    return out


def compatibility_matches_crossing(rs: RootSystem) -> bool:
    d = snake_dictionary(rs)
    roots = rs.almost_positive
    for a, b in combinations(roots, 2):
        if rs.compatible(a, b) == crosses(d[a], d[b]):
            return False
    return True


# -----------------------------------------------------------------------------
# Plucker coordinates


def plucker(z: Sequence[Sequence], i: int, j: int):
    """``P_ij = z[0][i] z[1][j] - z[0][j] z[1][i]`` for 1-based columns ``i, j``."""
    i, j = i - 1, j - 1
    return z[0][i] * z[1][j] - z[0][j] * z[1][i]


def random_config(N: int, rng: random.Random, lo: int = -20, hi: int = 20) -> list[list[int]]:
    return [[rng.randint(lo, hi) for _ in range(N)] for _ in range(2)]


def quadruple_violations(z) -> list[tuple[int, int, int, int]]:
    """Quadruples ``i<j<k<l`` where ``P_ik P_jl != P_ij P_kl + P_il P_jk``."""
    N = len(z[0])
    P = lambda a, b: plucker(z, a, b)
    return [(i, j, k, l) for i, j, k, l in combinations(range(1, N + 1), 4)
            if P(i, k) * P(j, l) != P(i, j) * P(k, l) + P(i, l) * P(j, k)]


def seed_relations_hold(t: Triangulation, z) -> bool:
    """Every exchange relation of ``b_from_triangulation(t)`` with ``x_c = P_c``."""
    b = b_from_triangulation(t).entries
    x = [plucker(z, *c) for c in t.labels]
    for k in range(t.n):
        _, new = _quadrilateral(t, k)
        plus = minus = 1
        for i, row in enumerate(b):
            if row[k] > 0:
                plus *= x[i] ** row[k]
            elif row[k] < 0:
                minus *= x[i] ** (-row[k])
        if x[k] * plucker(z, *new) != plus + minus:
            return False
    return True


@dataclass
class PluckerReport:
    trials: int
    quadruples_checked: int
    seed_checks: int
    resampled: int


def plucker_verify(n: int, trials: int, rng: random.Random, t: Triangulation | None = None) -> PluckerReport:
    """Check the three-term relations and the polygon seed's exchange relations.

    Configurations with a vanishing minor are resampled.  Raises
    :class:`RelationViolated` on the first failure.
    """
    N = n + 3
    t = t or snake(n)
    pairs = list(combinations(range(1, N + 1), 2))
    quads = 0
    resampled = 0
    for _ in range(trials):
        while True:
            z = random_config(N, rng)
            if all(plucker(z, i, j) for i, j in pairs):
                break
            resampled += 1
        bad = quadruple_violations(z)
        if bad:
            raise RelationViolated(f"three-term relation fails at {bad[0]} for {z}")
        quads += len(list(combinations(range(N), 4)))
        if not seed_relations_hold(t, z):
            raise RelationViolated(f"exchange relation of {t.to_text()} fails for {z}")
    return PluckerReport(trials, quads, trials * n, resampled)


def evaluate_at(z, chords: Sequence[Chord]) -> list[Fraction]:
    return [Fraction(plucker(z, *c)) for c in chords]
