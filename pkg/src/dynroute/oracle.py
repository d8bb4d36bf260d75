"""Exact shortest paths and the experiment metrics built on them."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .errors import ExperimentInvariantError, OracleRefusal, ParameterError
from .topology import TopologySnapshot

MAX_ENUMERATION_NODES = 12


@dataclass(frozen=True)
class OracleResult:
    cost: float
    path: Tuple[int, ...]

    @property
    def reachable(self) -> bool:
        return bool(self.path)


UNREACHABLE = OracleResult(math.inf, ())


@dataclass(frozen=True)
class GenerationRecord:
    scheme: str
    replication: int
    generation: int
    env_index: int
    best_cost: float
    best_fitness: float
    quality: float
    feasible_fraction: float


def path_cost(graph: TopologySnapshot, path: Sequence[int]) -> float:
    """Left-to-right edge sum; ``inf`` when some hop is not a current edge."""
    total = 0.0
    for u, v in zip(path, path[1:]):
        c = graph.cost(u, v)
        if c is None:
            return math.inf
        total += c
    return total


def dijkstra(graph: TopologySnapshot, s: int, d: int) -> OracleResult:
    """Least-cost path over active edges.

    Equal-cost labels are resolved towards the lexicographically smaller
    node sequence so the result is fully deterministic.
    """
    if not (graph.active[s] and graph.active[d]):
        raise ParameterError("dijkstra endpoints must be active")
    if s == d:
        return OracleResult(0.0, (s,))
    best = {s: (0.0, (s,))}
    heap = [(0.0, (s,), s)]
    done = set()
    while heap:
        cost, path, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == d:
            return OracleResult(cost, path)
        for v in graph.neighbors(u):
            if v in done:
                continue
            label = (cost + graph.edges[(u, v) if u < v else (v, u)], path + (v,))
            if v not in best or label < best[v]:
                best[v] = label
                heapq.heappush(heap, (label[0], label[1], v))
    return UNREACHABLE


def iter_simple_paths(graph: TopologySnapshot, s: int, d: int) -> Iterator[Tuple[Tuple[int, ...], float]]:
    """Depth-first generator of every loop-free s-d path with its cost."""
    stack = [(s, (s,), 0.0)]
    while stack:
        u, path, cost = stack.pop()
        if u == d:
            yield path, cost
            continue
        for v in reversed(graph.neighbors(u)):
            if v not in path:
                stack.append((v, path + (v,), cost + graph.cost(u, v)))


def enumerate_all_paths(graph: TopologySnapshot, s: int, d: int,
                        node_cap: int = MAX_ENUMERATION_NODES) -> OracleResult:
    """Brute-force minimum over all loop-free paths (small graphs only)."""
    if node_cap > MAX_ENUMERATION_NODES:
        raise OracleRefusal(f"node_cap {node_cap} exceeds {MAX_ENUMERATION_NODES}")
    if graph.node_count > node_cap:
        raise OracleRefusal(f"graph has {graph.node_count} nodes, cap is {node_cap}")
    best: Optional[Tuple[float, Tuple[int, ...]]] = None
    for path, cost in iter_simple_paths(graph, s, d):
        if best is None or (cost, path) < best:
            best = (cost, path)
    if best is None:
        return UNREACHABLE
    return OracleResult(best[0], best[1])


def quality(best_cost: float, opt_cost: float) -> float:
    """Ratio of the optimal cost to the achieved cost (0 when infeasible)."""
    if not math.isfinite(opt_cost):
        raise ExperimentInvariantError("optimum is unreachable; the schedule must keep s and d connected")
    if not opt_cost > 0:
        raise ParameterError("opt_cost must be positive")
    if not math.isfinite(best_cost):
        return 0.0
    return opt_cost / best_cost


def offline_performance(records: Sequence[GenerationRecord]) -> float:
    if not records:
        raise ParameterError("offline performance needs at least one record")
    return float(np.mean([r.quality for r in records]))


def recovery_times(records: Sequence[GenerationRecord], horizon: int,
                   threshold: float = 0.9) -> list:
    """Generations from each environment change until quality >= threshold.

    ``records`` is one replication ordered by generation.  A change that is
    never recovered from before the next one (or the end of the run) scores
    ``horizon``.
    """
    times = []
    starts = [k for k in range(1, len(records)) if records[k].env_index != records[k - 1].env_index]
    for n, k in enumerate(starts):
        stop = starts[n + 1] if n + 1 < len(starts) else len(records)
        hit = next((j - k for j in range(k, stop) if records[j].quality >= threshold), None)
        times.append(horizon if hit is None else hit)
    return times
