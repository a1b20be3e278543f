"""Generalized associahedra as polytopes cut out by tau-invariant support functions.

A point ``z`` of the dual space is written in the basis dual to the simple
roots, so the pairing ``<z, alpha>`` is the dot product of coordinate
vectors.  The polytope is ``{z : <z, alpha> <= F(alpha) for all almost
positive roots alpha}``; its vertices are indexed by clusters.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx

from .errors import HypothesisViolated, SingularClusterSystem
from .linalg import rank, solve
from .roots import Root, RootSystem


@dataclass
class SupportFunction:
    rs: RootSystem
    values: dict[Root, Fraction]

    def __getitem__(self, alpha: Root) -> Fraction:
        return self.values[tuple(alpha)]

    def on_negative_simples(self) -> tuple[Fraction, ...]:
        return tuple(self.values[self.rs.negative_simple(i)] for i in range(self.rs.rank))


def build_support_function(rs: RootSystem, base: Sequence | None = None) -> SupportFunction:
    """Extend ``F(-alpha_i) = base[i]`` to a tau-invariant function.

    The default ``base`` is the coefficient vector of the half-sum of
    positive coroots.  Raises :class:`HypothesisViolated` if ``base`` is not
    invariant under ``-w0``, if ``sum_i a_ij base[i] > 0`` fails for some
    ``j``, or if the propagation along tau-orbits is inconsistent.
    """
    n = rs.rank
    f = [Fraction(v) for v in (base if base is not None else rs.rho_vee())]
    if len(f) != n:
        raise HypothesisViolated(f"expected {n} values on the negative simple roots")
    sigma = rs.w0_permutation
    for i in range(n):
        if f[i] != f[sigma[i]]:
            raise HypothesisViolated(f"values at -alpha_{i + 1} and -alpha_{sigma[i] + 1} differ")
    for j in range(n):
        s = sum(rs.cartan[i][j] * f[i] for i in range(n))
        if s <= 0:
            raise HypothesisViolated(f"sum_i a_i{j + 1} F(-alpha_i) = {s} is not positive")
    values: dict[Root, Fraction] = {}
    queue = deque()
    for i in range(n):
        values[rs.negative_simple(i)] = f[i]
        queue.append(rs.negative_simple(i))
    while queue:
        alpha = queue.popleft()
        for sign in (1, -1):
            beta = rs.tau(sign, alpha)
            if beta in values:
                if values[beta] != values[alpha]:
                    raise HypothesisViolated(f"tau-orbit of {alpha} carries two values")
            else:
                values[beta] = values[alpha]
                queue.append(beta)
    missing = [a for a in rs.almost_positive if a not in values]
    if missing:
        raise HypothesisViolated(f"tau-orbit of {missing[0]} misses the negative simple roots")
    return SupportFunction(rs, values)


@dataclass
class Polytope:
    """Vertices, edges and facets of the realized associahedron.

    ``vertices[i]`` is the vertex of ``clusters[i]``.  ``facets`` lists
    ``(alpha, F(alpha), vertex indices on the facet)``.
    """

    rs: RootSystem
    support: SupportFunction
    clusters: list[tuple[Root, ...]]
    vertices: list[tuple[Fraction, ...]]
    edges: list[tuple[int, int]]
    facets: list[tuple[Root, Fraction, tuple[int, ...]]]

    @property
    def f_vector(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.facets)

    def euler_ok(self) -> bool:
        """``V - E + F == 2`` in dimension 3, ``V == E`` in dimension 2."""
        v, e, f = self.f_vector
        if self.rs.rank == 3:
            return v - e + f == 2
        if self.rs.rank == 2:
            return v == e == f
        raise ValueError("the Euler check is implemented for rank 2 and 3")

    def skeleton(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        g.add_edges_from(self.edges)
        return g

    def h_rep(self) -> str:
        lines = [" ".join(str(x) for x in alpha) + f" <= {bound}" for alpha, bound, _ in self.facets]
        return "\n".join(lines) + "\n"

    def v_rep(self) -> str:
        return "\n".join(" ".join(str(x) for x in v) for v in self.vertices) + "\n"

    def to_dot(self) -> str:
        lines = ["graph skeleton {"]
        for i, c in enumerate(self.clusters):
            label = " ".join("(" + ",".join(map(str, a)) + ")" for a in c)
            lines.append(f'  v{i + 1} [label="{label}"];')
        for a, b in self.edges:
            lines.append(f"  v{a + 1} -- v{b + 1};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "type": self.rs.label,
            "inequalities": [
                {"normal": list(alpha), "bound": str(bound)} for alpha, bound, _ in self.facets],
            "vertices": [
                {"cluster": [list(a) for a in c], "point": [str(x) for x in v]}
                for c, v in zip(self.clusters, self.vertices)],
            "edges": [[a + 1, b + 1] for a, b in self.edges],
        }


def build_polytope(rs: RootSystem, support: SupportFunction | None = None) -> Polytope:
    """Vertices from clusters, edges from adjacent clusters, facets from tight roots."""
    support = support or build_support_function(rs)
    n = rs.rank
    clusters = rs.clusters()
    roots = rs.almost_positive
    vertices = []
    for c in clusters:
        z = solve([list(a) for a in c], [support[a] for a in c])
        if z is None:
            raise SingularClusterSystem(f"cluster {c} is linearly dependent")
        cset = set(c)
        for a in roots:
            val = sum(x * y for x, y in zip(z, a))
            if a in cset:
                continue
            if val >= support[a]:
                raise HypothesisViolated(
                    f"vertex of cluster {c} is not strictly inside the half-space of {a}")
        vertices.append(tuple(z))
    sets = [frozenset(c) for c in clusters]
    edges = [(i, j) for i in range(len(sets)) for j in range(i + 1, len(sets))
             if len(sets[i] & sets[j]) == n - 1]
    facets = []
    for a in roots:
        on = tuple(i for i, c in enumerate(sets) if a in c)
        if len(on) >= n:
            base = vertices[on[0]]
            diffs = [[x - y for x, y in zip(vertices[i], base)] for i in on[1:]]
            if rank(diffs) == n - 1:
                facets.append((a, support[a], on))
    return Polytope(rs, support, clusters, vertices, edges, facets)


def skeleton_isomorphism(poly: Polytope, denominators: Mapping, graph_clusters: Sequence) -> dict[int, int] | None:
    """Explicit map from exchange graph nodes to polytope vertices.

    ``denominators`` maps cluster variables to denominator vectors and
    ``graph_clusters[i]`` is the cluster of node ``i``.  Node ``i`` goes to
    the vertex whose cluster is the set of denominator vectors of its
    variables.  Returns ``None`` if that is not a bijection preserving edges
    (callers compare edge sets).
    """
    where = {frozenset(c): i for i, c in enumerate(poly.clusters)}
    out = {}
    for node, cl in enumerate(graph_clusters):
        key = frozenset(tuple(denominators[y]) for y in cl)
        if key not in where:
            return None
        out[node] = where[key]
    if len(set(out.values())) != len(poly.clusters) or len(out) != len(poly.clusters):
        return None
    return out
