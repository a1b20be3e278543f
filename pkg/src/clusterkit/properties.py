"""Randomized checks of the Laurent phenomenon along all short mutation paths."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .errors import ClusterError, NonExactDivision
from .exchange import ExchangeMatrix, Seed, seed_mutate, validate_seed_matrix


def random_valid_matrix(rng: random.Random, max_m: int = 5, max_entry: int = 2) -> ExchangeMatrix:
    """Random full-rank extended exchange matrix with ``ex = 0..n-1``.

    The principal part is skew-symmetrized by a random ``d`` with entries in
    ``{1, 2}``; pairs whose partner entry would leave ``[-max_entry,
    max_entry]`` are set to zero.  Frozen rows are uniform.
    """
    while True:
        m = rng.randint(1, max_m)
        n = rng.randint(1, m)
        d = [rng.choice([1, 2]) for _ in range(n)]
        b = [[0] * n for _ in range(n)]
        for i in range(n):
            for k in range(i + 1, n):
                v = rng.randint(-max_entry, max_entry)
                w = -d[i] * v
                if w % d[k] or abs(w // d[k]) > max_entry:
                    v = w = 0
                b[i][k] = v
                b[k][i] = w // d[k]
        rows = b + [[rng.randint(-max_entry, max_entry) for _ in range(n)] for _ in range(m - n)]
        try:
            return validate_seed_matrix(rows, range(n))
        except ClusterError:
            continue


def exchange_work(seed: Seed, k: int) -> int:
    """Upper bound on the number of term products in the exchange numerator."""
    col = seed.matrix.column(k)
    work = 0
    for sign in (1, -1):
        side = 1
        for x, b in zip(seed.variables, col):
            if sign * b > 0:
                side *= len(x) ** abs(b)
        work += side
    return work * len(seed.variables[k])


@dataclass
class PathReport:
    matrix: ExchangeMatrix
    depth_reached: int
    seeds: int
    mutations: int
    complete: bool
    failures: list[str] = field(default_factory=list)


def check_paths(seed: Seed, depth: int, budget: float | None = None,
                max_work: int | None = None) -> PathReport:
    """Mutate along every path of length ``<= depth``.

    Paths reaching an already computed seed are merged, since equal seeds
    have equal futures.  A non-exact division or a non-integer coefficient
    is recorded in ``failures``.  The search stops early (``complete=False``)
    when ``budget`` seconds are used up or a single exchange would exceed
    ``max_work`` term products.
    """
    start = time.perf_counter()
    level = {(seed.variables, seed.matrix.entries): seed}
    seen = set(level)
    mutations = 0
    failures: list[str] = []
    for d in range(depth):
        nxt = {}
        for s in level.values():
            for k in s.ex:
                over_time = budget is not None and time.perf_counter() - start > budget
                if over_time or (max_work is not None and exchange_work(s, k) > max_work):
                    return PathReport(seed.matrix, d, len(seen), mutations, False, failures)
                try:
                    t = seed_mutate(s, k)
                except NonExactDivision as exc:
                    failures.append(f"depth {d + 1}, direction {k + 1}: {exc}")
                    continue
                mutations += 1
                if not all(type(c) is int for c in t.variables[k].terms.values()):
                    failures.append(f"depth {d + 1}, direction {k + 1}: non-integer coefficient")
                key = (t.variables, t.matrix.entries)
                if key not in seen:
                    seen.add(key)
                    nxt[key] = t
        level = nxt
    return PathReport(seed.matrix, depth, len(seen), mutations, True, failures)


@dataclass
class LaurentSuiteReport:
    reports: list[PathReport]

    @property
    def completed(self) -> int:
        return sum(r.complete for r in self.reports)

    @property
    def failures(self) -> int:
        return sum(len(r.failures) for r in self.reports)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.completed == len(self.reports)

    def summary(self) -> str:
        return (f"{self.completed}/{len(self.reports)} seeds completed, "
                f"{sum(r.mutations for r in self.reports)} mutations, "
                f"{self.failures} non-exact divisions or non-integer coefficients")


def laurent_suite(count: int, depth: int, rng: random.Random, budget: float | None = None,
                  max_work: int | None = None) -> LaurentSuiteReport:
    reports = []
    for _ in range(count):
        mat = random_valid_matrix(rng)
        reports.append(check_paths(Seed.initial(mat), depth, budget, max_work))
    return LaurentSuiteReport(reports)
