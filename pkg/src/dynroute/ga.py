"""Path-encoded genetic algorithm for shortest-path routing.

A chromosome is the node sequence of a loop-free route from the source to
the destination.  Fitness is the reciprocal of the route cost, or 0 when
the route uses a link missing from the current topology.

All randomness comes from one ``numpy.random.Generator`` passed in by the
caller.  Draws happen in member-index order, so a seed fully determines a
run.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import GenerationFailure, InvalidChromosome, ParameterError
from .oracle import dijkstra
from .topology import TopologySnapshot

log = logging.getLogger(__name__)

WALK_RESTARTS = 100
MUTATION_RESTARTS = 20


@dataclass(frozen=True)
class RouteChromosome:
    """A loop-free route. ``fitness`` is cached per ``env_index``."""

    path: Tuple[int, ...]
    fitness: Optional[float] = field(default=None, compare=False)
    env_index: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        path = tuple(int(u) for u in self.path)
        if len(path) < 2:
            raise InvalidChromosome(f"route too short: {path}")
        if len(set(path)) != len(path):
            raise InvalidChromosome(f"route contains a loop: {path}")
        object.__setattr__(self, "path", path)

    @property
    def source(self) -> int:
        return self.path[0]

    @property
    def destination(self) -> int:
        return self.path[-1]

    def __len__(self):
        return len(self.path)


@dataclass(frozen=True)
class GaParams:
    """Knobs shared by every scheme.

    ``m`` defaults to ``max(1, n // 10)``.
    """

    n: int = 20
    p_c: float = 0.9
    p_m: float = 0.1
    r_ri: float = 0.2
    r_ei: float = 0.2
    p_m_i: float = 0.8
    m: Optional[int] = None

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"population size must be >= 2, got {self.n}")
        for name in ("p_c", "p_m", "r_ri", "r_ei", "p_m_i"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1], got {value}")
        if self.r_ri + self.r_ei > 0.5:
            raise ParameterError("r_ri + r_ei must not exceed 0.5")
        if self.m is None:
            object.__setattr__(self, "m", max(1, self.n // 10))
        elif self.m < 1:
            raise ParameterError("memory size must be >= 1")


@dataclass
class Population:
    members: List[RouteChromosome]
    elite: RouteChromosome
    generation: int = 0


def fitness(graph: TopologySnapshot, ch) -> float:
    """Reciprocal path cost, or 0 if any hop is not an edge of ``graph``."""
    path = ch.path if isinstance(ch, RouteChromosome) else ch
    total = 0.0
    edges = graph.edges
    for u, v in zip(path, path[1:]):
        c = edges.get((u, v) if u < v else (v, u))
        if c is None:
            return 0.0
        total += c
    return 1.0 / total


def evaluate(graph: TopologySnapshot, ch: RouteChromosome) -> RouteChromosome:
    """Return ``ch`` with its fitness cached for ``graph.env_index``."""
    if ch.env_index == graph.env_index and ch.fitness is not None:
        return ch
    return replace(ch, fitness=fitness(graph, ch), env_index=graph.env_index)


def evaluate_all(graph, members):
    return [evaluate(graph, ch) for ch in members]


def best_of(members: Sequence[RouteChromosome]) -> RouteChromosome:
    """Fittest member; the lowest index wins ties."""
    best = members[0]
    for ch in members[1:]:
        if ch.fitness > best.fitness:
            best = ch
    return best


def _walk(graph, start, d, rng, avoid, restarts):
    for _ in range(restarts + 1):
        path = [start]
        seen = set(avoid)
        seen.add(start)
        u = start
        while u != d:
            options = [v for v in graph.neighbors(u) if v not in seen]
            if not options:
                break
            u = options[int(rng.integers(len(options)))]
            path.append(u)
            seen.add(u)
        else:
            return path
    return None


def random_walk_path(graph: TopologySnapshot, s: int, d: int, rng: np.random.Generator,
                     max_restarts: int = WALK_RESTARTS) -> RouteChromosome:
    """Random loop-free walk from ``s`` until ``d`` is hit.

    Each step moves to a uniformly chosen unvisited neighbor.  A dead end
    restarts the walk from ``s``.
    """
    if s == d:
        raise ParameterError("source and destination must differ")
    path = _walk(graph, s, d, rng, (), max_restarts)
    if path is None:
        raise GenerationFailure(f"no random walk from {s} to {d} after {max_restarts} restarts")
    return RouteChromosome(tuple(path))


def walk_or_oracle(graph, s, d, rng) -> RouteChromosome:
    """Random walk, falling back to the Dijkstra route on restart exhaustion."""
    try:
        return random_walk_path(graph, s, d, rng)
    except GenerationFailure:
        result = dijkstra(graph, s, d)
        if not result.reachable:
            raise
        log.warning("random walk %d->%d exhausted its restarts; using the oracle path", s, d)
        return RouteChromosome(result.path)


def init_population(graph: TopologySnapshot, s: int, d: int, n: int,
                    rng: np.random.Generator) -> Population:
    members = evaluate_all(graph, [walk_or_oracle(graph, s, d, rng) for _ in range(n)])
    return Population(members, replace(best_of(members)), generation=0)


def select_parents(members: Sequence[RouteChromosome], rng: np.random.Generator) -> List[RouteChromosome]:
    """Binary tournaments: ``len(members)`` winners, coin flip on ties."""
    n = len(members)
    pool = []
    for _ in range(n):
        i, j = rng.integers(n, size=2)
        a, b = members[i], members[j]
        if a.fitness > b.fitness:
            pool.append(a)
        elif b.fitness > a.fitness:
            pool.append(b)
        else:
            pool.append(a if rng.random() < 0.5 else b)
    return pool


def remove_loops(path: Sequence[int]) -> Tuple[int, ...]:
    """Excise every cycle, keeping the first visit of a repeated node."""
    out: List[int] = []
    where = {}
    for u in path:
        if u in where:
            cut = where[u] + 1
            for v in out[cut:]:
                del where[v]
            del out[cut:]
        else:
            where[u] = len(out)
            out.append(u)
    return tuple(out)


def crossover(a: RouteChromosome, b: RouteChromosome, rng: np.random.Generator):
    """Single-point crossover at a node both routes pass through.

    Only internal nodes qualify as crossing sites.  Parents without one are
    returned as they are.
    """
    common = sorted(set(a.path[1:-1]) & set(b.path[1:-1]))
    if not common:
        return a, b
    g = common[int(rng.integers(len(common)))]
    ia, ib = a.path.index(g), b.path.index(g)
    child1 = remove_loops(a.path[:ia] + b.path[ib:])
    child2 = remove_loops(b.path[:ib] + a.path[ia:])
    return RouteChromosome(child1), RouteChromosome(child2)


def mutate(graph: TopologySnapshot, ch: RouteChromosome, rng: np.random.Generator,
           point: Optional[int] = None) -> RouteChromosome:
    """Replace the route after a random gene by a fresh random sub-path.

    The new sub-path starts at the mutation node and avoids the retained
    prefix.  When no such walk turns up within the restart budget the input
    is returned.
    """
    path = ch.path
    if point is None:
        point = 0 if len(path) == 2 else int(rng.integers(1, len(path) - 1))
    tail = _walk(graph, path[point], path[-1], rng, path[:point], MUTATION_RESTARTS)
    if tail is None:
        return ch
    return RouteChromosome(path[:point] + tuple(tail))


Hook = Callable[..., Population]


def evolve_one_generation(population: Population, graph: TopologySnapshot, params: GaParams,
                          rng: np.random.Generator, hook: Optional[Hook] = None) -> Population:
    """Produce generation ``t + 1`` from ``population``.

    Order: evaluate, record the elite, tournament selection, pairwise
    crossover, mutation, re-evaluation, the optional scheme ``hook``, then
    elitism (the elite displaces the worst member if the new best is worse).

    ``hook(offspring, graph, rng, previous_best=...)`` receives a
    Population whose ``elite`` is E(t-1) under the current topology and
    whose ``generation`` is the one being built; ``previous_best`` is the
    incoming population's stored elite, still carrying the fitness it had
    under the topology it was last evaluated on.
    """
    t = population.generation + 1
    previous_best = population.elite
    members = evaluate_all(graph, population.members)
    elite = replace(best_of(members))

    pool = select_parents(members, rng)
    order = rng.permutation(len(pool))
    pool = [pool[i] for i in order]
    for k in range(0, len(pool) - 1, 2):
        if rng.random() < params.p_c:
            pool[k], pool[k + 1] = crossover(pool[k], pool[k + 1], rng)
    for k in range(len(pool)):
        if rng.random() < params.p_m:
            pool[k] = mutate(graph, pool[k], rng)
    offspring = Population(evaluate_all(graph, pool), elite, t)

    if hook is not None:
        offspring = hook(offspring, graph, rng, previous_best=previous_best)
    members = offspring.members

    best = best_of(members)
    if elite.fitness > best.fitness and elite.fitness > 0:
        worst = min(range(len(members)), key=lambda i: (members[i].fitness, -i))
        members[worst] = replace(elite)
        best = members[worst]
    return Population(members, replace(best), t)


def check_route(ch: RouteChromosome, s: int, d: int) -> None:
    if ch.path[0] != s or ch.path[-1] != d:
        raise InvalidChromosome(f"route {ch.path} does not join {s} and {d}")


def route_cost(ch: RouteChromosome) -> float:
    return 1.0 / ch.fitness if ch.fitness else math.inf
