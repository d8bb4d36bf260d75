import numpy as np
import pytest

from dynroute.errors import ParameterError
from dynroute.ga import GaParams, Population, RouteChromosome, evaluate_all, init_population
from dynroute.memory import (MemoryEntry, MemoryStore, detect_change, eiga_mega_hook,
                             init_memory, mega_generation_hook, retrieve_memory, similarity,
                             update_memory)

from oracles import make_graph, random_graph


def entry(path, fit, placeholder=False):
    return MemoryEntry(RouteChromosome(path), fit, placeholder)


def cand(path, fit):
    return RouteChromosome(path, fit, 0)


class TestInit:
    def test_single_slot(self, triangle, rng):
        mem = init_memory(1, triangle, 0, 2, rng)
        assert len(mem) == 1 and mem.entries[0].is_random_placeholder

    def test_all_placeholders_and_schedule(self, rng):
        g = random_graph(rng, 9, p=0.5)
        for _ in range(50):
            mem = init_memory(3, g, 0, 8, rng)
            assert all(e.is_random_placeholder for e in mem.entries)
            assert 5 <= mem.next_update_generation <= 10

    def test_size_must_be_positive(self, triangle, rng):
        with pytest.raises(ParameterError):
            init_memory(0, triangle, 0, 2, rng)


class TestDetectChange:
    def test_unchanged_graph(self, triangle, rng):
        mem = init_memory(2, triangle, 0, 2, rng)
        changed, mem = detect_change(mem, triangle)
        assert not changed
        assert not detect_change(mem, triangle)[0]

    def test_removed_edge_used_by_memory(self, triangle):
        mem = MemoryStore((entry((0, 1, 2), 0.5),), 7)
        after = make_graph({(0, 1): 1.0, (0, 2): 5.0}, n=3, env_index=1)
        changed, refreshed = detect_change(mem, after)
        assert changed and refreshed.entries[0].stored_fitness == 0.0

    def test_blind_spot(self):
        g = make_graph({(0, 1): 1.0, (1, 2): 1.0, (0, 3): 2.0, (3, 2): 2.0})
        mem = MemoryStore((entry((0, 1, 2), 0.5),), 7)
        after = make_graph({(0, 1): 1.0, (1, 2): 1.0}, n=4, env_index=1)
        assert not detect_change(mem, after)[0]
        assert not detect_change(mem, g)[0]


class TestSimilarity:
    def test_identical(self):
        assert similarity(RouteChromosome((0, 1, 2)), RouteChromosome((0, 1, 2))) == 1.0

    def test_disjoint(self):
        assert similarity(RouteChromosome((0, 1, 9)), RouteChromosome((0, 2, 9))) == 0.0

    def test_partial_overlap(self):
        assert similarity(RouteChromosome((0, 1, 9)), RouteChromosome((0, 1, 2, 9))) == pytest.approx(0.4)

    def test_direction_does_not_matter(self):
        assert similarity(RouteChromosome((0, 1, 2, 9)), RouteChromosome((0, 2, 1, 9))) == pytest.approx(2 / 6)


class TestUpdate:
    def test_first_placeholder_taken(self, rng):
        mem = MemoryStore((entry((0, 5, 9), 0.1, True), entry((0, 6, 9), 0.2, True)), 7)
        out = update_memory(mem, cand((0, 1, 9), 0.05), 7, rng)
        assert out.entries[0].chromosome.path == (0, 1, 9)
        assert not out.entries[0].is_random_placeholder
        assert out.entries[1] == mem.entries[1]
        assert 12 <= out.next_update_generation <= 17

    def test_weaker_candidate_rejected(self, rng):
        mem = MemoryStore((entry((0, 1, 2, 9), 0.5),), 7)
        out = update_memory(mem, cand((0, 1, 3, 9), 0.4), 7, rng)
        assert out.entries == mem.entries

    def test_most_similar_replaced(self, rng):
        x, y = (0, 1, 2, 3, 9), (0, 5, 6, 9)
        c = (0, 1, 2, 4, 9)
        # shared edges: with x {(0,1),(1,2)} -> 2*2/(4+4)=0.5; with y none -> 0
        assert similarity(RouteChromosome(c), RouteChromosome(x)) == pytest.approx(0.5)
        assert similarity(RouteChromosome(c), RouteChromosome(y)) == 0.0
        mem = MemoryStore((entry(x, 0.5), entry(y, 0.9)), 7)
        out = update_memory(mem, cand(c, 0.6), 7, rng)
        assert out.entries[0].chromosome.path == c and out.entries[0].stored_fitness == 0.6
        assert out.entries[1] == mem.entries[1]


class TestRetrieve:
    def test_memory_rescues_infeasible_population(self):
        g = make_graph({(0, 1): 1.0, (1, 9): 1.0}, n=10, env_index=2)
        members = [RouteChromosome((0, 5, 9), 0.0, 2)] * 4
        pop = Population(members, members[0], 5)
        mem = MemoryStore((entry((0, 1, 9), 0.0),), 9)
        out = retrieve_memory(mem, pop, g)
        assert len(out.members) == 4
        assert max(m.fitness for m in out.members) == 0.5

    def test_placeholders_lose_the_merge(self):
        g = make_graph({(0, 1): 1.0, (1, 9): 1.0, (0, 2): 2.0, (2, 9): 2.0}, n=10, env_index=1)
        members = evaluate_all(g, [RouteChromosome((0, 1, 9)), RouteChromosome((0, 2, 9))] * 2)
        pop = Population(members, members[0], 4)
        mem = MemoryStore((entry((0, 5, 9), 0.0, True), entry((0, 6, 9), 0.0, True)), 9)
        assert retrieve_memory(mem, pop, g).members == pop.members

    def test_pool_arithmetic(self, rng):
        g = random_graph(rng, 9, p=0.5)
        pop = init_population(g, 0, 8, 20, rng)
        mem = init_memory(2, g, 0, 8, rng)
        assert len(retrieve_memory(mem, pop, g).members) == 20


class TestHooks:
    def test_static_before_update_time(self):
        rng = np.random.default_rng(2)
        g = random_graph(rng, 10, p=0.5)
        pop = init_population(g, 0, 9, 20, rng)
        mem = init_memory(2, g, 0, 9, rng)
        pop.generation = mem.next_update_generation - 1
        out_pop, out_mem = mega_generation_hook(pop, mem, g, pop.generation, GaParams(), rng, pop.elite)
        assert out_pop.members == pop.members
        assert out_mem == mem

    def test_update_time_writes_one_slot(self):
        rng = np.random.default_rng(3)
        g = random_graph(rng, 10, p=0.5)
        pop = init_population(g, 0, 9, 20, rng)
        mem = init_memory(2, g, 0, 9, rng)
        t = mem.next_update_generation
        _, out = mega_generation_hook(pop, mem, g, t, GaParams(), rng, pop.elite)
        changed = [a != b for a, b in zip(mem.entries, out.entries)]
        assert sum(changed) == 1
        assert t + 5 <= out.next_update_generation <= t + 10

    def test_change_retrieval_never_hurts_best(self):
        rng = np.random.default_rng(4)
        g = random_graph(rng, 10, p=0.5)
        pop = init_population(g, 0, 9, 20, rng)
        mem = init_memory(2, g, 0, 9, rng)
        used = {e for entry_ in mem.entries for e in zip(entry_.chromosome.path, entry_.chromosome.path[1:])}
        drop = next(iter(used))
        after = make_graph({e: c for e, c in g.edges.items() if e != tuple(sorted(drop))}, n=10, env_index=1)
        offspring = Population(evaluate_all(after, pop.members), pop.elite, 1)
        before_best = max(m.fitness for m in offspring.members)
        out, new_mem = mega_generation_hook(offspring, mem, after, 1, GaParams(), rng, pop.elite)
        assert max(m.fitness for m in out.members) >= before_best
        assert len(new_mem) == 2
        assert sum(not e.is_random_placeholder for e in new_mem.entries) == 1

    def test_eiga_mega_zero_ratio_equals_mega(self):
        rng_a, rng_b = np.random.default_rng(5), np.random.default_rng(5)
        g = random_graph(np.random.default_rng(6), 10, p=0.5)
        pop = init_population(g, 0, 9, 20, np.random.default_rng(7))
        mem = init_memory(2, g, 0, 9, np.random.default_rng(8))
        params = GaParams(r_ei=0.0)
        t = mem.next_update_generation
        a = mega_generation_hook(pop, mem, g, t, params, rng_a, pop.elite)
        b = eiga_mega_hook(pop, mem, g, t, params, rng_b, pop.elite)
        assert a[0].members == b[0].members and a[1] == b[1]

    def test_eiga_mega_keeps_size_and_best(self):
        rng = np.random.default_rng(9)
        g = random_graph(rng, 10, p=0.5)
        pop = init_population(g, 0, 9, 20, rng)
        mem = init_memory(2, g, 0, 9, rng)
        best = max(m.fitness for m in pop.members)
        out, _ = eiga_mega_hook(pop, mem, g, 1, GaParams(), rng, pop.elite)
        assert len(out.members) == 20
        assert max(m.fitness for m in out.members) >= best
