"""Exchange graphs, finite type classification and checks on explored graphs."""
from __future__ import annotations

import json
import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import networkx as nx

from .errors import IncompleteGraph, UnknownType
from .exchange import ExchangeMatrix, Seed, matrix_mutate, seed_mutate, seed_to_dict
from .laurent import LaurentPoly, denominator_vector
from .linalg import rank
from .roots import RootSystem, format_type


# -----------------------------------------------------------------------------
# canonical seeds


def canonical_seed(seed: Seed) -> Seed:
    """Relabel exchangeable positions so their variables are sorted.

    Frozen positions keep their places.  Rows and columns of the matrix are
    permuted along with the variables.
    """
    ex = seed.ex
    # descending, so that an initial cluster x1, x2, ... is already canonical
    order = sorted(range(len(ex)), key=lambda j: seed.variables[ex[j]].sort_key(), reverse=True)
    if order == list(range(len(ex))):
        return seed
    variables = list(seed.variables)
    rows = [list(r) for r in seed.matrix.entries]
    for new_j, old_j in enumerate(order):
        variables[ex[new_j]] = seed.variables[ex[old_j]]
        rows[ex[new_j]] = list(seed.matrix.entries[ex[old_j]])
    entries = tuple(tuple(r[old_j] for old_j in order) for r in rows)
    return Seed(tuple(variables), ExchangeMatrix(entries, ex, seed.matrix.symmetrizer))


def seed_key(seed: Seed) -> tuple:
    """Identity of a seed up to relabeling: variables and matrix of its canonical form."""
    c = canonical_seed(seed)
    return (c.variables, c.matrix.entries)


def cluster_key(seed: Seed) -> frozenset:
    """The weaker identity: the unordered cluster alone."""
    return frozenset(seed.cluster())


@dataclass
class ExchangeGraph:
    """Breadth-first ball in the exchange graph.

    ``seeds[i]`` is the canonical seed of node ``i`` (nodes are numbered in
    BFS order), ``depth[i]`` its distance from node 0, and ``edges`` maps a
    pair ``(i, j)`` with ``i < j`` to the exchanged pair of variables (the
    variable of ``i`` first).
    """

    seeds: list[Seed]
    depth: list[int]
    edges: dict[tuple[int, int], tuple[LaurentPoly, LaurentPoly]]
    complete: bool
    cluster_keys_agree: bool = True
    index: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.seeds)

    @property
    def rank(self) -> int:
        return self.seeds[0].matrix.n

    def neighbors(self, i: int) -> list[int]:
        return sorted({b if a == i else a for a, b in self.edges if i in (a, b)})

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.seeds)))
        g.add_edges_from(self.edges)
        return g

    def is_regular(self) -> bool:
        deg = [0] * len(self.seeds)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return all(d == self.rank for d in deg)

    def require_complete(self) -> None:
        if not self.complete:
            raise IncompleteGraph(
                f"exploration stopped after {len(self.seeds)} seeds without closing the graph")


def _expand(args):
    seed, k = args
    return seed_mutate(seed, k)


def explore(start: Seed, max_seeds: int | None = None, max_depth: int | None = None,
            jobs: int = 1) -> ExchangeGraph:
    """Breadth-first exploration of the seeds mutation-equivalent to ``start``.

    Parameters
    ----------
    start : initial seed.
    max_seeds : stop adding nodes once this many are known.
    max_depth : do not expand nodes at this distance from ``start``.  Their
        neighbors are still computed so that completeness is decided honestly.
    jobs : worker processes for frontier expansion.  Results are merged in the
        same order as the single-process run, so the output does not depend on
        ``jobs``.

    ``complete`` is true iff every neighbor of every node is in the graph.
    """
    first = canonical_seed(start)
    seeds = [first]
    depth = [0]
    index = {seed_key(first): 0}
    by_cluster = {cluster_key(first): 0}
    # back[j] = direction at node j that leads to the node it was found from;
    # mutation is involutive, so that neighbor need not be recomputed
    back = {0: None}
    agree = True
    edges: dict = {}
    complete = True
    level = [0]
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while level:
            origin = [(i, k) for i in level for k in seeds[i].ex if k != back[i]]
            tasks = [(seeds[i], k) for i, k in origin]
            if pool is not None:
                chunk = max(1, len(tasks) // (4 * jobs))
                results = list(pool.map(_expand, tasks, chunksize=chunk))
            else:
                results = [_expand(t) for t in tasks]
            nxt = []
            for (i, k), new in zip(origin, results):
                src = seeds[i]
                key = seed_key(new)
                j = index.get(key)
                if j is None:
                    at_bound = max_seeds is not None and len(seeds) >= max_seeds
                    if at_bound or (max_depth is not None and depth[i] >= max_depth):
                        complete = False
                        continue
                    j = len(seeds)
                    cnew = canonical_seed(new)
                    seeds.append(cnew)
                    depth.append(depth[i] + 1)
                    index[key] = j
                    nv = new.variables[k]
                    back[j] = next(p for p in cnew.ex if cnew.variables[p] == nv)
                    ck = cluster_key(cnew)
                    if ck in by_cluster:
                        agree = False
                    else:
                        by_cluster[ck] = j
                    nxt.append(j)
                if i != j:
                    a, b = (i, j) if i < j else (j, i)
                    if (a, b) not in edges:
                        old, nv = src.variables[k], new.variables[k]
                        edges[(a, b)] = (old, nv) if a == i else (nv, old)
            level = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return ExchangeGraph(seeds, depth, edges, complete, agree, index)


def cluster_variables(g: ExchangeGraph) -> list[LaurentPoly]:
    """All distinct exchangeable variables of a complete graph, sorted."""
    g.require_complete()
    out = set()
    for s in g.seeds:
        out.update(s.cluster())
    return sorted(out, key=LaurentPoly.sort_key, reverse=True)


def denominator_table(g: ExchangeGraph, base: int = 0) -> dict[LaurentPoly, tuple[int, ...]]:
    """Denominator vector of every cluster variable with respect to seed ``base``.

    The variables of the graph are Laurent polynomials in the initial
    variables, so ``base`` must be the node of the initial seed (node 0).
    """
    g.require_complete()
    seed = g.seeds[base]
    gens = LaurentPoly.gens(seed.names)
    for k in seed.ex:
        if seed.variables[k] != gens[k]:
            raise ValueError("denominator vectors are taken with respect to the initial cluster")
    return {y: denominator_vector(y, seed.ex) for y in cluster_variables(g)}


# -----------------------------------------------------------------------------
# export


def graph_to_dict(g: ExchangeGraph) -> dict:
    return {
        "complete": g.complete,
        "seeds": [dict(seed_to_dict(s), depth=d) for s, d in zip(g.seeds, g.depth)],
        "edges": [
            {"source": a + 1, "target": b + 1, "exchanged": [str(x), str(y)]}
            for (a, b), (x, y) in sorted(g.edges.items())
        ],
    }


def graph_to_json(g: ExchangeGraph, **kw) -> str:
    return json.dumps(graph_to_dict(g), **kw)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def graph_to_dot(g: ExchangeGraph) -> str:
    lines = ["graph exchange {"]
    for i, s in enumerate(g.seeds):
        label = "\\n".join(_dot_escape(str(v)) for v in s.cluster())
        lines.append(f'  s{i + 1} [label="{label}"];')
    for (a, b), (x, y) in sorted(g.edges.items()):
        lines.append(f'  s{a + 1} -- s{b + 1} [label="{_dot_escape(str(x))} <-> {_dot_escape(str(y))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -----------------------------------------------------------------------------
# finite type classification


def _refine_classes(b) -> list[tuple]:
    n = len(b)
    return [(tuple(sorted(abs(x) for x in b[i])), tuple(sorted(abs(b[j][i]) for j in range(n))))
            for i in range(n)]


def canonical_matrix(b, *, signs: bool = True) -> tuple[tuple, tuple[int, ...]]:
    """Least form of ``b`` under simultaneous permutation (and global sign).

    Returns ``(form, perm)`` with ``form[i][j] == s * b[perm[i]][perm[j]]``.
    Orderings are restricted to be sorted by a permutation-invariant label of
    each index, then built position by position keeping only branches whose
    partial matrix is lexicographically least.  The comparison key reads the
    matrix along growing leading principal submatrices, so this pruning is
    exact.
    """
    n = len(b)
    best = None
    for s in ((1, -1) if signs else (1,)):
        m = [[s * x for x in row] for row in b]
        labels = _refine_classes(m)
        slots = sorted(range(n), key=lambda i: labels[i])
        slot_labels = [labels[i] for i in slots]
        branches = [()]
        for pos in range(n):
            want = slot_labels[pos]
            scored = []
            for br in branches:
                used = set(br)
                for c in range(n):
                    if c in used or labels[c] != want:
                        continue
                    inc = tuple(v for p in br for v in (m[c][p], m[p][c])) + (m[c][c],)
                    scored.append((inc, br + (c,)))
            least = min(inc for inc, _ in scored)
            branches = [br for inc, br in scored if inc == least]
        perm = branches[0]
        form = tuple(tuple(m[perm[i]][perm[j]] for j in range(n)) for i in range(n))
        cand = (slot_labels, form)
        if best is None or cand < best[0]:
            best = (cand, form, perm)
    return best[1], best[2]


def _principal_mutate(b, k):
    n = len(b)
    mat = ExchangeMatrix(tuple(tuple(r) for r in b), tuple(range(n)))
    return matrix_mutate(mat, k).entries


def is_bipartite_signed(b) -> bool:
    """Each row's off-diagonal nonzero entries share one sign, alternating along edges."""
    n = len(b)
    sign = [0] * n
    for i in range(n):
        vals = {(x > 0) - (x < 0) for j, x in enumerate(b[i]) if j != i and x}
        if len(vals) > 1:
            return False
        sign[i] = vals.pop() if vals else 0
    return all(sign[i] == -sign[j] for i in range(n) for j in range(n) if i != j and b[i][j])


def cartan_counterpart(b) -> tuple[tuple[int, ...], ...]:
    n = len(b)
    return tuple(tuple(2 if i == j else -abs(b[i][j]) for j in range(n)) for i in range(n))


def _components(a) -> list[list[int]]:
    n = len(a)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((i, j) for i in range(n) for j in range(n) if i != j and a[i][j])
    return sorted(sorted(c) for c in nx.connected_components(g))


_CANDIDATE_CACHE: dict[int, list] = {}


def _candidates(n: int):
    if n not in _CANDIDATE_CACHE:
        out = []
        for kind in "ABCDEFG":
            try:
                rs = RootSystem(f"{kind}{n}")
            except UnknownType:
                continue
            out.append(((kind, n), canonical_matrix(rs.cartan, signs=False)[0]))
        _CANDIDATE_CACHE[n] = out
    return _CANDIDATE_CACHE[n]


def identify_cartan(a) -> str | None:
    """Cartan-Killing label of a Cartan matrix of finite type, else ``None``."""
    labels = []
    for comp in _components(a):
        sub = [[a[i][j] for j in comp] for i in comp]
        form = canonical_matrix(sub, signs=False)[0]
        hit = next((lab for lab, f in _candidates(len(comp)) if f == form), None)
        if hit is None:
            return None
        labels.append(hit)
    labels.sort(key=lambda t: ("ABCDEFG".index(t[0]), -t[1]))
    return format_type(labels)


@dataclass
class Classification:
    verdict: str  # "FiniteType", "InfiniteType" or "Unknown"
    cartan_type: str | None
    witness: tuple | None
    path: tuple[int, ...]
    explored: int

    def __str__(self):
        if self.verdict == "FiniteType":
            return f"FiniteType({self.cartan_type})"
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "type": self.cartan_type,
            "witness": [list(r) for r in self.witness] if self.witness is not None else None,
            "path": [k + 1 for k in self.path],
            "explored": self.explored,
        }


def classify_finite_type(b: Sequence[Sequence[int]], max_matrices: int = 20000) -> Classification:
    """Search the mutation class of a principal matrix for a finite type witness.

    Matrices are identified up to simultaneous permutation and global sign.
    A member with ``|b_ij b_ji| >= 4`` proves infinite type (its rank 2
    subalgebra is not periodic).  A bipartite-signed member whose Cartan
    counterpart is of finite type proves finite type.  ``Unknown`` is
    returned when neither is found within ``max_matrices`` classes.
    The witness path lists mutation directions (0-based) applied to ``b``.
    """
    b = tuple(tuple(int(x) for x in r) for r in b)
    n = len(b)
    seen = {canonical_matrix(b)[0]}
    queue = deque([(b, ())])
    while queue:
        mat, path = queue.popleft()
        if any(abs(mat[i][j] * mat[j][i]) >= 4 for i in range(n) for j in range(i + 1, n)):
            return Classification("InfiniteType", None, mat, path, len(seen))
        if is_bipartite_signed(mat):
            label = identify_cartan(cartan_counterpart(mat))
            if label is not None:
                return Classification("FiniteType", label, mat, path, len(seen))
        for k in range(n):
            new = _principal_mutate(mat, k)
            key = canonical_matrix(new)[0]
            if key in seen:
                continue
            if len(seen) >= max_matrices:
                return Classification("Unknown", None, None, (), len(seen))
            seen.add(key)
            queue.append((new, path + (k,)))
    return Classification("Unknown", None, None, (), len(seen))


# -----------------------------------------------------------------------------
# checks on a complete graph


@dataclass
class CheckReport:
    results: dict[str, bool]
    details: dict[str, str]

    @property
    def passed(self) -> bool:
        return all(self.results.values())


def _cluster_monomials(g: ExchangeGraph, max_degree: int):
    """Distinct cluster monomials of total degree at most ``max_degree``.

    Returned as a list of sorted tuples of cluster variables (multisets).
    """
    seen = set()
    for s in g.seeds:
        cl = sorted(s.cluster(), key=LaurentPoly.sort_key)
        for d in range(max_degree + 1):
            for combo in combinations_with_replacement(cl, d):
                seen.add(combo)
    return sorted(seen, key=lambda c: (len(c), [v.sort_key() for v in c]))


def _evaluation_rank(values_rows) -> int:
    return rank(values_rows)


def conjecture_checks(g: ExchangeGraph, max_degree: int, rng: random.Random | None = None,
                      retries: int = 3) -> CheckReport:
    """Run four checks on a complete exchange graph.

    cluster_determines_seed
        distinct seeds have distinct clusters, and adjacent seeds share all
        but one cluster variable.
    monomials_independent
        cluster monomials of degree ``<= max_degree`` are linearly independent;
        frozen variables are specialized at random rationals and the monomials
        are evaluated at random points, and an exact rank deficit must persist
        over ``retries`` fresh samples before the check fails.
    distinct_denominators
        distinct cluster monomials have distinct denominator vectors.
    nonnegative_coefficients
        every cluster variable has nonnegative coefficients.
    """
    g.require_complete()
    rng = rng or random.Random(0)
    n = g.rank
    results: dict[str, bool] = {}
    details: dict[str, str] = {}

    clusters = [frozenset(s.cluster()) for s in g.seeds]
    shared_ok = all(len(clusters[a] & clusters[b]) == n - 1 for a, b in g.edges)
    results["cluster_determines_seed"] = len(set(clusters)) == len(clusters) and shared_ok
    details["cluster_determines_seed"] = (
        f"{len(set(clusters))} clusters for {len(clusters)} seeds; "
        f"edges share n-1 variables: {shared_ok}")

    monos = _cluster_monomials(g, max_degree)
    seed0 = g.seeds[0]
    m = len(seed0.names)
    frozen = seed0.matrix.frozen_rows()
    independent = False
    deficit = 0
    for _ in range(retries):
        fixed = {i: Fraction(rng.randint(1, 97), rng.randint(1, 97)) for i in frozen}
        rows = []
        for _ in range(len(monos)):
            pt = [fixed.get(i) or Fraction(rng.choice([-1, 1]) * rng.randint(1, 1000))
                  for i in range(m)]
            vals = {}
            row = []
            for mono in monos:
                v = Fraction(1)
                for y in mono:
                    if y not in vals:
                        vals[y] = y.evaluate(pt)
                    v *= vals[y]
                row.append(v)
            rows.append(row)
        r = _evaluation_rank(rows)
        deficit = len(monos) - r
        if deficit == 0:
            independent = True
            break
    results["monomials_independent"] = independent
    details["monomials_independent"] = f"{len(monos)} monomials, rank deficit {deficit}"

    ex = seed0.ex
    denoms = {}
    clash = None
    for mono in monos:
        prod = LaurentPoly.constant(1, seed0.names)
        for y in mono:
            prod = prod * y
        d = denominator_vector(prod, ex)
        if d in denoms and denoms[d] != mono:
            clash = (denoms[d], mono)
            break
        denoms[d] = mono
    results["distinct_denominators"] = clash is None
    details["distinct_denominators"] = (
        f"{len(denoms)} distinct vectors" if clash is None
        else "clash between " + " and ".join("*".join(map(str, c)) or "1" for c in clash))

    variables = cluster_variables(g)
    bad = [y for y in variables if not y.has_nonnegative_coefficients()]
    results["nonnegative_coefficients"] = not bad
    details["nonnegative_coefficients"] = (
        f"{len(variables)} cluster variables" if not bad else f"negative coefficient in {bad[0]}")
    return CheckReport(results, details)
