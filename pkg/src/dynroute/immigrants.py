"""Immigrant generators and worst-member replacement (RIGA and EIGA)."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List

import numpy as np

from .errors import ParameterError
from .ga import GaParams, Population, RouteChromosome, evaluate_all, mutate, walk_or_oracle
from .topology import TopologySnapshot


@dataclass
class ImmigrantBatch:
    chromosomes: List[RouteChromosome]
    origin: str  # "random" or "elite"

    def __len__(self):
        return len(self.chromosomes)


def immigrant_count(ratio: float, n: int) -> int:
    # guard against 0.2 * 20 landing just under 4
    return int(math.floor(ratio * n + 1e-9))


def make_random_immigrants(graph: TopologySnapshot, s: int, d: int, count: int,
                           rng: np.random.Generator) -> ImmigrantBatch:
    if count < 0:
        raise ParameterError("immigrant count must be >= 0")
    return ImmigrantBatch([walk_or_oracle(graph, s, d, rng) for _ in range(count)], "random")


def make_elitism_immigrants(elite: RouteChromosome, graph: TopologySnapshot, count: int,
                            p_m_i: float, rng: np.random.Generator) -> ImmigrantBatch:
    """Copies of the elite, each mutated with probability ``p_m_i``.

    An immigrant that is not mutated is the elite itself.
    """
    if count < 0:
        raise ParameterError("immigrant count must be >= 0")
    batch = []
    for _ in range(count):
        if rng.random() < p_m_i:
            batch.append(mutate(graph, elite, rng))
        else:
            batch.append(replace(elite))
    return ImmigrantBatch(batch, "elite")


def replace_worst(population: Population, batch: ImmigrantBatch) -> Population:
    """Swap the ``len(batch)`` least fit members for the batch.

    Among equally unfit members, later ones are evicted first.  Immigrants
    take over the evicted slots in ascending slot order.
    """
    members = list(population.members)
    k = len(batch)
    if k > len(members):
        raise ParameterError(f"batch of {k} exceeds population size {len(members)}")
    if k == 0:
        return Population(members, population.elite, population.generation)
    ranked = sorted(range(len(members)), key=lambda i: (members[i].fitness, -i))
    for slot, ch in zip(sorted(ranked[:k]), batch.chromosomes):
        members[slot] = ch
    return Population(members, population.elite, population.generation)


class RandomImmigrants:
    """Generation hook injecting ``floor(r_ri * n)`` random immigrants."""

    def __init__(self, params: GaParams, s: int, d: int):
        self.count = immigrant_count(params.r_ri, params.n)
        self.s, self.d = s, d

    def __call__(self, population, graph, rng, previous_best=None):
        batch = make_random_immigrants(graph, self.s, self.d, self.count, rng)
        batch.chromosomes = evaluate_all(graph, batch.chromosomes)
        return replace_worst(population, batch)


class ElitismImmigrants:
    """Generation hook injecting ``floor(r_ei * n)`` elite-derived immigrants."""

    def __init__(self, params: GaParams):
        self.count = immigrant_count(params.r_ei, params.n)
        self.p_m_i = params.p_m_i

    def __call__(self, population, graph, rng, previous_best=None):
        batch = make_elitism_immigrants(population.elite, graph, self.count, self.p_m_i, rng)
        batch.chromosomes = evaluate_all(graph, batch.chromosomes)
        return replace_worst(population, batch)
