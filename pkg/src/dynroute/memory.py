"""Memory-enhanced GA (MEGA) and its combination with elitism-based immigrants.

The memory holds ``m`` routes.  It starts with random routes flagged as
placeholders and is rewritten at random intervals of 5 to 10 generations,
and also whenever a change of topology is detected.  On a change, the
stored routes are merged back into the population.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from .errors import ParameterError
from .ga import GaParams, Population, RouteChromosome, best_of, evaluate, fitness, walk_or_oracle
from .immigrants import immigrant_count, make_elitism_immigrants, replace_worst
from .topology import TopologySnapshot, edge_key

UPDATE_INTERVAL = (5, 10)


@dataclass(frozen=True)
class MemoryEntry:
    chromosome: RouteChromosome
    stored_fitness: float
    is_random_placeholder: bool = False


@dataclass(frozen=True)
class MemoryStore:
    entries: Tuple[MemoryEntry, ...]
    next_update_generation: int

    def __len__(self):
        return len(self.entries)


def _next_update(t: int, rng: np.random.Generator) -> int:
    lo, hi = UPDATE_INTERVAL
    return t + int(rng.integers(lo, hi + 1))


def init_memory(m: int, graph: TopologySnapshot, s: int, d: int,
                rng: np.random.Generator) -> MemoryStore:
    if m < 1:
        raise ParameterError("memory size must be >= 1")
    entries = []
    for _ in range(m):
        ch = walk_or_oracle(graph, s, d, rng)
        entries.append(MemoryEntry(ch, fitness(graph, ch), True))
    return MemoryStore(tuple(entries), _next_update(0, rng))


def refresh(memory: MemoryStore, graph: TopologySnapshot) -> MemoryStore:
    entries = tuple(replace(e, stored_fitness=fitness(graph, e.chromosome)) for e in memory.entries)
    return replace(memory, entries=entries)


def detect_change(memory: MemoryStore, graph: TopologySnapshot) -> Tuple[bool, MemoryStore]:
    """Re-evaluate the memory; report whether any stored fitness moved.

    Returns ``(changed, refreshed_memory)``.  A change that touches none of
    the stored routes goes unnoticed.
    """
    refreshed = refresh(memory, graph)
    changed = any(a.stored_fitness != b.stored_fitness
                  for a, b in zip(memory.entries, refreshed.entries))
    return changed, refreshed


def _edges(path):
    return {edge_key(u, v) for u, v in zip(path, path[1:])}


def similarity(a: RouteChromosome, b: RouteChromosome) -> float:
    """Dice coefficient of the two routes' undirected edge sets."""
    ea, eb = _edges(a.path), _edges(b.path)
    return 2.0 * len(ea & eb) / (len(ea) + len(eb))


def update_memory(memory: MemoryStore, candidate: RouteChromosome, t: int,
                  rng: np.random.Generator) -> MemoryStore:
    """Write ``candidate`` into the memory.

    The first remaining placeholder is overwritten if there is one.
    Otherwise the most similar entry is overwritten, but only when the
    candidate is fitter.  The next update is rescheduled either way.
    """
    entries = list(memory.entries)
    new_entry = MemoryEntry(replace(candidate), candidate.fitness, False)
    slot = next((i for i, e in enumerate(entries) if e.is_random_placeholder), None)
    if slot is None:
        scores = [similarity(candidate, e.chromosome) for e in entries]
        slot = int(np.argmax(scores))
        if not candidate.fitness > entries[slot].stored_fitness:
            slot = None
    if slot is not None:
        entries[slot] = new_entry
    return MemoryStore(tuple(entries), _next_update(t, rng))


def retrieve_memory(memory: MemoryStore, population: Population,
                    graph: TopologySnapshot) -> Population:
    """Merge memory routes into the population and keep the fittest ``n``."""
    n = len(population.members)
    pool = list(population.members) + [evaluate(graph, e.chromosome) for e in memory.entries]
    keep = sorted(sorted(range(len(pool)), key=lambda i: -pool[i].fitness)[:n])
    return Population([pool[i] for i in keep], population.elite, population.generation)


def mega_generation_hook(population: Population, memory: MemoryStore, graph: TopologySnapshot,
                         t: int, params: GaParams, rng: np.random.Generator,
                         previous_best: RouteChromosome = None):
    """One generation of memory maintenance.

    Returns ``(population, memory)``.  ``previous_best`` is the best route
    of the previous generation, carrying its fitness on the topology it was
    evaluated on.  When a change is detected it is compared against the
    memory as it stood before re-evaluation, so the choice of what to keep
    is made in the environment that just ended.
    """
    changed, refreshed = detect_change(memory, graph)
    if changed:
        if previous_best is not None:
            memory = update_memory(memory, previous_best, t, rng)
        memory = refresh(memory, graph)
        population = retrieve_memory(memory, population, graph)
    else:
        memory = refreshed
    if t >= memory.next_update_generation:
        best = best_of(population.members)
        elite = population.elite
        candidate = elite if elite.fitness > best.fitness else best
        memory = update_memory(memory, evaluate(graph, candidate), t, rng)
    return population, memory


def eiga_mega_hook(population, memory, graph, t, params: GaParams, rng, previous_best=None):
    """MEGA maintenance followed by elitism-based immigrants."""
    population, memory = mega_generation_hook(population, memory, graph, t, params, rng, previous_best)
    count = immigrant_count(params.r_ei, params.n)
    batch = make_elitism_immigrants(population.elite, graph, count, params.p_m_i, rng)
    batch.chromosomes = [evaluate(graph, ch) for ch in batch.chromosomes]
    return replace_worst(population, batch), memory


class MemoryScheme:
    """Stateful generation hook wrapping :func:`mega_generation_hook`."""

    combine_immigrants = False

    def __init__(self, params: GaParams, memory: MemoryStore):
        self.params = params
        self.memory = memory

    def __call__(self, population, graph, rng, previous_best=None):
        step = eiga_mega_hook if self.combine_immigrants else mega_generation_hook
        population, self.memory = step(population, self.memory, graph, population.generation,
                                       self.params, rng, previous_best)
        return population


class EigaMegaScheme(MemoryScheme):
    combine_immigrants = True
