"""Independent brute-force references used by the test-suite.

Nothing here calls into the code paths it is used to check.
"""
from fractions import Fraction
from itertools import product

import numpy as np

from dynroute.topology import TopologySnapshot, from_edges


def make_graph(edges, n=None, env_index=0, active=None):
    """Snapshot from ``{(u, v): cost}``; node count inferred when omitted."""
    if n is None:
        n = 1 + max(max(e) for e in edges) if edges else 1
    return from_edges(n, {tuple(e): float(c) for e, c in edges.items()}, env_index, active)


def random_graph(rng, n, p=0.4, lo=1.0, hi=10.0):
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges[(i, j)] = float(rng.uniform(lo, hi))
    return from_edges(n, edges)


def adjacency(graph):
    adj = {u: set() for u in range(graph.node_count)}
    for i, j in graph.edges:
        adj[i].add(j)
        adj[j].add(i)
    return adj


def walk_distribution(graph, s, d, avoid=()):
    """Exact outcome law of one restart-until-success random walk.

    Enumerates the walk tree: each step is uniform over unvisited
    neighbors.  Dead ends are dropped and the law renormalised, which is
    what restarting does.
    """
    adj = adjacency(graph)
    outcomes = {}

    def grow(path, prob):
        u = path[-1]
        if u == d:
            outcomes[tuple(path)] = outcomes.get(tuple(path), 0) + prob
            return
        options = sorted(v for v in adj[u] if v not in path and v not in avoid)
        for v in options:
            grow(path + [v], prob / len(options))

    grow([s], Fraction(1))
    total = sum(outcomes.values())
    return {p: q / total for p, q in outcomes.items()}


def all_simple_paths(graph, s, d):
    adj = adjacency(graph)
    found = []

    def dfs(path):
        if path[-1] == d:
            found.append(tuple(path))
            return
        for v in adj[path[-1]]:
            if v not in path:
                dfs(path + [v])

    dfs([s])
    return found


def brute_cost(graph, path):
    return float(np.sum([graph.edges[(min(u, v), max(u, v))] for u, v in zip(path, path[1:])]))


def transitive_closure(graph):
    """Reachability matrix by repeated relaxation until a fixed point."""
    n = graph.node_count
    reach = np.eye(n, dtype=bool)
    for i, j in graph.edges:
        reach[i, j] = reach[j, i] = True
    while True:
        nxt = reach | ((reach.astype(int) @ reach.astype(int)) > 0)
        if (nxt == reach).all():
            return reach
        reach = nxt


def tournament_expectation(fits):
    """Expected number of copies of each member in a binary tournament pool."""
    n = len(fits)
    wins = [Fraction(0)] * n
    for i, j in product(range(n), repeat=2):
        if fits[i] > fits[j]:
            wins[i] += 1
        elif fits[j] > fits[i]:
            wins[j] += 1
        else:
            wins[i] += Fraction(1, 2)
            wins[j] += Fraction(1, 2)
    return [n * w / (n * n) for w in wins]
