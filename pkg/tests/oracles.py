"""Independent reference implementations used only by the tests.

None of these share code with the package: they work on plain edge lists
and use different algorithms (Prim instead of Kruskal, combinations instead
of pruned search, double loops instead of bisection).
"""

from __future__ import annotations

import heapq
import itertools
from fractions import Fraction

# Chi-square and Kolmogorov-Smirnov critical values at the 1% level, frozen
# from scipy.stats.chi2.ppf(0.99, df) and scipy.stats.kstwo.ppf(0.99, n).
CHI2_99 = {1: 6.6348966010212145, 2: 9.21034037197618, 5: 15.08627246938899, 23: 41.638398118858476}
KS_99_1E6 = 0.0016274566551782183


def prim_msf(n_nodes, edges, rank):
    """Minimum spanning forest by Prim's algorithm, one component at a time.

    ``edges`` is a list of (u, v, w); ``rank[i]`` is the effective weight.
    Returns the set of chosen edge indices.
    """
    adj = [[] for _ in range(n_nodes)]
    for i, (u, v, _) in enumerate(edges):
        adj[u].append((rank[i], i, v))
        adj[v].append((rank[i], i, u))
    done = [False] * n_nodes
    chosen = set()
    for root in range(n_nodes):
        if done[root]:
            continue
        done[root] = True
        heap = list(adj[root])
        heapq.heapify(heap)
        while heap:
            _, i, y = heapq.heappop(heap)
            if done[y]:
                continue
            done[y] = True
            chosen.add(i)
            for item in adj[y]:
                if not done[item[2]]:
                    heapq.heappush(heap, item)
    return chosen


def _acyclic(n_nodes, edges, subset):
    parent = list(range(n_nodes))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i in subset:
        a, b = find(edges[i][0]), find(edges[i][1])
        if a == b:
            return False
        parent[a] = b
    return True


def n_components(n_nodes, edges):
    parent = list(range(n_nodes))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    k = n_nodes
    for u, v, _ in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            k -= 1
    return k


def brute_msts(n_nodes, edges):
    """Every minimum-weight spanning forest, by trying all edge combinations."""
    size = n_nodes - n_components(n_nodes, edges)
    best, found = None, []
    for subset in itertools.combinations(range(len(edges)), size):
        if not _acyclic(n_nodes, edges, subset):
            continue
        total = sum(Fraction(edges[i][2]) for i in subset)
        if best is None or total < best:
            best, found = total, [frozenset(subset)]
        elif total == best:
            found.append(frozenset(subset))
    return set(found)


def brute_orderings(edges):
    """Every weight-consistent ordering, by filtering all permutations (tiny graphs only)."""
    for perm in itertools.permutations(range(len(edges))):
        ws = [edges[i][2] for i in perm]
        if all(a <= b for a, b in zip(ws, ws[1:])):
            yield perm


def kruskal_seq(n_nodes, edges, seq):
    parent = list(range(n_nodes))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    out = set()
    for i in seq:
        a, b = find(edges[i][0]), find(edges[i][1])
        if a != b:
            parent[a] = b
            out.add(i)
    return frozenset(out)


def brute_auc(scores, labels):
    """Pairwise Mann-Whitney AUC by a double loop."""
    wins = ties = n_pairs = 0
    for s, y in zip(scores, labels):
        if not y:
            continue
        for t, z in zip(scores, labels):
            if z:
                continue
            n_pairs += 1
            if s > t:
                wins += 1
            elif s == t:
                ties += 1
    if n_pairs == 0:
        return None
    return (wins + 0.5 * ties) / n_pairs


def chi_square(counts, expected):
    return sum((c - e) ** 2 / e for c, e in zip(counts, expected))
