"""Finite crystallographic root systems and their cluster combinatorics.

Roots are integer tuples in simple-root coordinates.  The Cartan matrix is
``a[i][j] = <alpha_i^vee, alpha_j>`` with Bourbaki numbering, so the simple
reflection is ``s_i(beta) = beta - (sum_j a[i][j] beta_j) alpha_i``.
Indices are 0-based.

The set of almost positive roots is ordered as ``-alpha_0, ..., -alpha_{n-1}``
followed by the positive roots sorted by height and then lexicographically
(descending).  Methods that return permutations index into that list.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property, reduce
from math import lcm
from typing import Sequence

import networkx as nx

from .errors import NonIntegerResult, UnknownType
from .linalg import det, solve

Root = tuple  # tuple[int, ...]

# classical exponent tables
_EXCEPTIONAL_EXPONENTS = {
    ("E", 6): (1, 4, 5, 7, 8, 11),
    ("E", 7): (1, 5, 7, 9, 11, 13, 17),
    ("E", 8): (1, 7, 11, 13, 17, 19, 23, 29),
    ("F", 4): (1, 5, 7, 11),
    ("G", 2): (1, 5),
}


def _exponents(kind: str, n: int) -> tuple[int, ...]:
    if kind == "A":
        return tuple(range(1, n + 1))
    if kind in "BC":
        return tuple(range(1, 2 * n, 2))
    if kind == "D":
        return tuple(sorted(list(range(1, 2 * n - 2, 2)) + [n - 1]))
    return _EXCEPTIONAL_EXPONENTS[(kind, n)]


def _check_label(kind: str, n: int) -> None:
    ok = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 4,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }.get(kind, False)
    if not ok:
        raise UnknownType(f"no finite root system of type {kind}{n}")


def cartan_matrix(kind: str, n: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix of an irreducible type in Bourbaki numbering."""
    _check_label(kind, n)
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):
        a[i][j], a[j][i] = aij, aji

    if kind in "ABC":
        for i in range(n - 1):
            bond(i, i + 1)
        if kind == "B":
            bond(n - 2, n - 1, -1, -2)
        elif kind == "C":
            bond(n - 2, n - 1, -2, -1)
    elif kind == "D":
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 3, n - 1)
    elif kind == "E":
        # chain 1-3-4-5-...-n with 2 attached to 4 (1-based)
        chain = [0] + list(range(2, n))
        for i, j in zip(chain, chain[1:]):
            bond(i, j)
        bond(1, 3)
    elif kind == "F":
        bond(0, 1)
        bond(1, 2, -1, -2)
        bond(2, 3)
    elif kind == "G":
        bond(0, 1, -3, -1)
    return tuple(tuple(r) for r in a)


_COMPONENT = re.compile(r"([A-Ga-g])_?(\d+)")


def parse_type(label: str) -> list[tuple[str, int]]:
    """Parse ``"A3"``, ``"E_6"`` or products such as ``"A2xA1"``."""
    parts = [p for p in re.split(r"\s*[x×*]\s*", label.strip()) if p]
    out = []
    for p in parts:
        m = _COMPONENT.fullmatch(p)
        if not m:
            raise UnknownType(f"cannot parse root system label {label!r}")
        kind, n = m.group(1).upper(), int(m.group(2))
        _check_label(kind, n)
        out.append((kind, n))
    if not out:
        raise UnknownType("empty root system label")
    return out


def format_type(components: Sequence[tuple[str, int]]) -> str:
    return "x".join(f"{k}{n}" for k, n in components)


def _block_diagonal(blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return tuple(tuple(r) for r in out)


def reflect(cartan, i: int, beta: Root) -> Root:
    c = sum(a * b for a, b in zip(cartan[i], beta))
    if not c:
        return beta
    out = list(beta)
    out[i] -= c
    return tuple(out)


def positive_roots_by_closure(cartan) -> list[Root]:
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    queue = list(simple)
    while queue:
        beta = queue.pop()
        for i in range(n):
            g = reflect(cartan, i, beta)
            if g not in seen and all(x >= 0 for x in g):
                seen.add(g)
                queue.append(g)
    return sorted(seen, key=lambda r: (sum(r), tuple(-x for x in r)))


def longest_element(cartan):
    """Greedy descent to the longest Weyl group element.

    Returns ``(word, images)`` where ``word`` is a reduced word (0-based) and
    ``images[j]`` is ``w0(alpha_j)``.  The update rule is
    ``(w s_i)(alpha_j) = w(alpha_j) - a[i][j] w(alpha_i)``.
    """
    n = len(cartan)
    images = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    word = []
    while True:
        i = next((i for i in range(n) if any(x > 0 for x in images[i])), None)
        if i is None:
            return tuple(word), images
        wi = images[i]
        images = [tuple(x - cartan[i][j] * y for x, y in zip(images[j], wi)) for j in range(n)]
        word.append(i)


def sign_function(cartan) -> tuple[int, ...]:
    """2-coloring of the Dynkin diagram with +1 on the lowest index of each component."""
    n = len(cartan)
    eps = [0] * n
    for root in range(n):
        if eps[root]:
            continue
        eps[root] = 1
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and cartan[i][j]:
                    if not eps[j]:
                        eps[j] = -eps[i]
                        stack.append(j)
                    assert eps[j] == -eps[i], "Dynkin diagram is not bipartite"
    return tuple(eps)


class RootSystem:
    """Root system of a finite (possibly reducible) Cartan type.

    Parameters
    ----------
    label : type label such as ``"B3"`` or ``"A2xA1"``.
    """

    def __init__(self, label: str):
        self.components = parse_type(label)
        self.label = format_type(self.components)
        self.cartan = _block_diagonal([cartan_matrix(k, n) for k, n in self.components])
        self.rank = len(self.cartan)
        self.positive_roots = positive_roots_by_closure(self.cartan)
        self.exponents = tuple(e for k, n in self.components for e in _exponents(k, n))
        self.eps = sign_function(self.cartan)
        self.w0_word, self.w0_images = longest_element(self.cartan)
        self._validate()

    def _validate(self):
        n = self.rank
        nplus = len(self.positive_roots)
        if len(self.w0_word) != nplus:
            raise AssertionError("longest element length differs from |positive roots|")
        if sum(self.exponents) != nplus:
            raise AssertionError("exponent table disagrees with the number of positive roots")
        off = 0
        for kind, k in self.components:
            block = [r for r in self.positive_roots if any(r[off:off + k]) ]
            h = 2 * len(block) // k
            if 2 * len(block) != k * h or max(_exponents(kind, k)) != h - 1:
                raise AssertionError(f"Coxeter number check failed for {kind}{k}")
            off += k
        for i in range(n):
            for j in range(n):
                if self.cartan[i][j] < 0:
                    assert self.eps[i] == -self.eps[j]

    def __repr__(self):
        return f"RootSystem({self.label!r})"

    # -- classical data -----------------------------------------------------------
    @property
    def is_irreducible(self) -> bool:
        return len(self.components) == 1

    @property
    def coxeter_number(self) -> int:
        """``h = 2|Phi+|/n`` (for reducible types, the maximum over components)."""
        return max(max(_exponents(k, n)) + 1 for k, n in self.components)

    def coxeter_numbers(self) -> list[int]:
        return [max(_exponents(k, n)) + 1 for k, n in self.components]

    @cached_property
    def w0_permutation(self) -> tuple[int, ...]:
        """``sigma`` with ``w0(alpha_i) = -alpha_sigma(i)``."""
        n = self.rank
        out = []
        for img in self.w0_images:
            j = next(j for j in range(n) if img[j])
            assert img[j] == -1 and sum(map(abs, img)) == 1
            out.append(j)
        return tuple(out)

    @property
    def w0_is_minus_one(self) -> bool:
        return all(s == i for i, s in enumerate(self.w0_permutation))

    def simple_root(self, i: int) -> Root:
        return tuple(int(i == j) for j in range(self.rank))

    def negative_simple(self, i: int) -> Root:
        return tuple(-int(i == j) for j in range(self.rank))

    @cached_property
    def almost_positive(self) -> list[Root]:
        return [self.negative_simple(i) for i in range(self.rank)] + list(self.positive_roots)

    @cached_property
    def index(self) -> dict:
        return {r: k for k, r in enumerate(self.almost_positive)}

    def negative_simple_index(self, alpha: Root) -> int | None:
        """``i`` if ``alpha == -alpha_i``, else ``None``."""
        if sum(alpha) == -1 and min(alpha) == -1:
            return alpha.index(-1)
        return None

    def reflect(self, i: int, beta: Root) -> Root:
        return reflect(self.cartan, i, beta)

    def b_matrix(self) -> tuple[tuple[int, ...], ...]:
        """``b_ij = eps(i) a_ij`` off the diagonal, zero on it."""
        n = self.rank
        return tuple(
            tuple(0 if i == j else self.eps[i] * self.cartan[i][j] for j in range(n))
            for i in range(n))

    def dual(self) -> "RootSystem":
        """The root system whose Cartan matrix is the transpose (coroots)."""
        swap = {"B": "C", "C": "B"}
        return RootSystem(format_type([(swap.get(k, k), n) for k, n in self.components]))

    def rho_vee(self) -> tuple[Fraction, ...]:
        """Half-sum of positive coroots in the simple-coroot basis."""
        n = self.rank
        coroots = positive_roots_by_closure(tuple(zip(*self.cartan)))
        return tuple(Fraction(sum(r[i] for r in coroots), 2) for i in range(n))

    # -- tau involutions ---------------------------------------------------------
    def tau(self, sign: int, alpha: Root) -> Root:
        """``tau_+`` (``sign=+1``) or ``tau_-`` (``sign=-1``) on an almost positive root."""
        i = self.negative_simple_index(alpha)
        if i is not None and self.eps[i] == -sign:
            return alpha
        out = alpha
        for j in range(self.rank):
            if self.eps[j] == sign:
                out = self.reflect(j, out)
        return out

    @cached_property
    def tau_permutations(self) -> dict[int, tuple[int, ...]]:
        idx = self.index
        return {s: tuple(idx[self.tau(s, a)] for a in self.almost_positive) for s in (1, -1)}

    def tau_orbit_order(self) -> int:
        """Order of ``tau_- tau_+`` as a permutation of the almost positive roots."""
        tp, tm = self.tau_permutations[1], self.tau_permutations[-1]
        perm = [tm[tp[k]] for k in range(len(tp))]
        seen = [False] * len(perm)
        order = 1
        for k in range(len(perm)):
            if seen[k]:
                continue
            length = 0
            j = k
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            order = lcm(order, length)
        return order

    def expected_tau_order(self) -> int:
        """``(h+2)/2`` if ``w0 = -1`` else ``h+2``, combined over components by lcm."""
        out = 1
        off = 0
        for (kind, k), h in zip(self.components, self.coxeter_numbers()):
            sigma = self.w0_permutation[off:off + k]
            minus_one = all(s == off + i for i, s in enumerate(sigma))
            out = lcm(out, (h + 2) // 2 if minus_one else h + 2)
            off += k
        return out

    # -- compatibility -----------------------------------------------------------
    def compatible(self, alpha: Root, beta: Root) -> bool:
        """Compatibility degree zero test by tau-reduction to a negative simple root."""
        alpha, beta = tuple(alpha), tuple(beta)
        if alpha == beta:
            return True
        idx = self.index
        a, b = idx[alpha], idx[beta]
        return self._compatible_idx(a, b)

    def _compatible_idx(self, a: int, b: int) -> bool:
        if a == b:
            return True
        n = self.rank
        roots = self.almost_positive
        perms = (self.tau_permutations[1], self.tau_permutations[-1])
        step = 0
        while a >= n and b >= n:
            p = perms[step % 2]
            a, b = p[a], p[b]
            step += 1
            if step > 2 * len(roots) + 2:
                raise AssertionError("tau orbit never met the negative simple roots")
        if a < n:
            return roots[b][a] == 0
        return roots[a][b] == 0

    @cached_property
    def compatibility_graph(self) -> nx.Graph:
        g = nx.Graph()
        m = len(self.almost_positive)
        g.add_nodes_from(range(m))
        for a in range(m):
            for b in range(a + 1, m):
                if self._compatible_idx(a, b):
                    g.add_edge(a, b)
        return g

    def clusters(self) -> list[tuple[Root, ...]]:
        """All maximal compatible subsets, each sorted, in sorted order."""
        roots = self.almost_positive
        out = []
        for clique in nx.find_cliques(self.compatibility_graph):
            if len(clique) != self.rank:
                raise AssertionError(f"maximal compatible subset of size {len(clique)}")
            vecs = [roots[k] for k in sorted(clique)]
            if abs(det(vecs)) != 1:
                raise AssertionError(f"cluster {vecs} is not a lattice basis")
            out.append(tuple(sorted(clique)))
        out.sort()
        return [tuple(roots[k] for k in c) for c in out]

    def count_clusters(self) -> int:
        return count_clusters(self)


def _n_phi(exponents: Sequence[int], h: int) -> int:
    num = reduce(lambda x, y: x * y, (e + h + 1 for e in exponents), 1)
    den = reduce(lambda x, y: x * y, (e + 1 for e in exponents), 1)
    if num % den:
        raise NonIntegerResult(f"{num}/{den} is not an integer")
    return num // den


def count_clusters(rs: RootSystem) -> int:
    """``N(Phi) = prod (e_i + h + 1) / (e_i + 1)``, multiplied over components."""
    out = 1
    for (kind, k), h in zip(rs.components, rs.coxeter_numbers()):
        out *= _n_phi(_exponents(kind, k), h)
    return out


def fan_sample_check(rs: RootSystem, samples: int, rng) -> tuple[int, int]:
    """Check completeness and simpliciality of the cluster fan on random vectors.

    Each sampled rational vector must lie in the closed cone of at least one
    cluster and in the open cone of at most one.  Returns the number of
    samples checked and the number lying on a cone boundary.
    """
    clusters = rs.clusters()
    n = rs.rank
    boundary = 0
    for _ in range(samples):
        v = [Fraction(rng.randint(-1000, 1000), rng.randint(1, 50)) for _ in range(n)]
        closed = interior = 0
        for c in clusters:
            cols = [[c[j][i] for j in range(n)] for i in range(n)]
            coeffs = solve(cols, v)
            if min(coeffs) >= 0:
                closed += 1
                if min(coeffs) > 0:
                    interior += 1
        if closed == 0 or interior > 1:
            raise AssertionError(f"vector {v} violates the fan property")
        boundary += interior == 0
    return samples, boundary
