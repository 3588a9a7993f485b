"""Slow, independent reference implementations used only by the tests.

None of these import the package; they work on plain adjacency lists.
"""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction

import sympy
from scipy.stats import binom


def shortest_cycle_bruteforce(adj: list[list[int]]) -> float:
    """Length of the shortest simple cycle, by enumerating simple paths."""
    n = len(adj)
    best = math.inf
    for root in range(n):
        # only cycles whose smallest vertex is root; extend paths through larger ids
        stack = [(root, [root])]
        while stack:
            v, path = stack.pop()
            if len(path) >= best:
                continue
            for w in adj[v]:
                if w == root and len(path) >= 3:
                    best = min(best, len(path))
                elif w > root and w not in path:
                    stack.append((w, path + [w]))
    return best


def nb_walk_counts(adj: list[list[int]], k: int) -> list[list[int]]:
    """Count every non-backtracking walk of length k by listing them one by one."""
    n = len(adj)
    counts = [[0] * n for _ in range(n)]
    for u in range(n):
        stack = [(u, -1, 0)]
        while stack:
            v, prev, length = stack.pop()
            if length == k:
                counts[u][v] += 1
                continue
            for w in adj[v]:
                if w != prev:
                    stack.append((w, v, length + 1))
    return counts


def nb_walks_from(adj: list[list[int]], start: int, k: int) -> list[tuple[int, ...]]:
    """All non-backtracking walks of length k from start, as vertex tuples."""
    out = []

    def extend(path):
        if len(path) == k + 1:
            out.append(tuple(path))
            return
        for w in adj[path[-1]]:
            if len(path) < 2 or w != path[-2]:
                extend(path + [w])

    extend([start])
    return out


def charpoly_eigenvalues(adj: list[list[int]]) -> list[float]:
    """Roots of det(xI - A) computed symbolically, sorted descending."""
    n = len(adj)
    a = sympy.zeros(n, n)
    for u, row in enumerate(adj):
        for v in row:
            a[u, v] = 1
    x = sympy.Symbol("x")
    poly = sympy.Poly(a.charpoly(x).as_expr(), x)
    roots = []
    for r, mult in sympy.roots(poly, multiple=False).items():
        roots += [float(sympy.re(sympy.N(r, 30)))] * mult
    if len(roots) != n:  # fall back to numeric roots when closed forms are missing
        roots = [float(sympy.re(r)) for r in poly.nroots(n=30)]
    return sorted(roots, reverse=True)


def all_pairs_distances(adj: list[list[int]]) -> list[list[float]]:
    n = len(adj)
    out = []
    for s in range(n):
        dist = [math.inf] * n
        dist[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if dist[w] == math.inf:
                    dist[w] = dist[v] + 1
                    q.append(w)
        out.append(dist)
    return out


def simple_walk_exact(adj: list[list[int]], start: int, steps: int) -> list[Fraction]:
    """Exact distribution of the simple walk by repeated hand convolution."""
    n = len(adj)
    p = [Fraction(0)] * n
    p[start] = Fraction(1)
    for _ in range(steps):
        q = [Fraction(0)] * n
        for v in range(n):
            if p[v]:
                share = p[v] / len(adj[v])
                for w in adj[v]:
                    q[w] += share
        p = q
    return p


def bins_median_max_load(n: int) -> int:
    """Median max load of n balls in n bins under the Poisson clumping approximation.

    P(max <= m) ~ exp(-n P(Bin(n, 1/n) > m)); the median is the smallest m
    with P(max <= m) >= 1/2.
    """
    m = 1
    while True:
        tail = n * binom.sf(m, n, 1.0 / n)  # expected bins with load >= m + 1
        if math.exp(-tail) >= 0.5:
            return m
        m += 1


def complete_lists(n: int) -> list[list[int]]:
    return [[w for w in range(n) if w != v] for v in range(n)]


def petersen_lists() -> list[list[int]]:
    outer = [[(i + 1) % 5, (i - 1) % 5, i + 5] for i in range(5)]
    inner = [[5 + (i + 2) % 5, 5 + (i - 2) % 5, i] for i in range(5)]
    return [sorted(r) for r in outer + inner]
