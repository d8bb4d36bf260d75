"""Seeded experiment runner: replications, per-generation records, summaries.

Each replication ``r`` derives its seed as ``master_seed + r`` and splits it
into two independent streams.  One drives topology generation and changes,
the other drives the GA.  Every scheme run with the same seeds therefore
sees the same sequence of topologies, which keeps comparisons paired.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, ExperimentInvariantError
from .ga import GaParams, Population, best_of, evolve_one_generation, init_population
from .immigrants import ElitismImmigrants, RandomImmigrants
from .memory import EigaMegaScheme, MemoryScheme, init_memory
from .oracle import GenerationRecord, dijkstra, offline_performance, path_cost, quality, recovery_times
from .topology import (DynamicsSchedule, RwpParams, TopologySnapshot, advance_mobility,
                       apply_node_toggle, ensure_sd_connected, generate_rwp_topology,
                       rebuild_edges)

log = logging.getLogger(__name__)

SCHEMES = ("sga", "riga", "eiga", "mega", "eiga-mega")
CONNECT_ATTEMPTS = 100
RECOVERY_THRESHOLD = 0.9

RECORD_HEADER = ["scheme", "replication", "generation", "env_index", "best_cost",
                 "best_fitness", "quality", "feasible_fraction"]
MEMORY_HEADER = ["scheme", "replication", "generation", "entry", "path",
                 "stored_fitness", "placeholder"]


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: str
    rwp: RwpParams = field(default_factory=RwpParams)
    schedule: DynamicsSchedule = field(default_factory=DynamicsSchedule)
    ga: GaParams = field(default_factory=GaParams)
    source: int = 0
    dest: Optional[int] = None
    generations: int = 10
    reps: int = 1
    seed: int = 0
    trace_memory: bool = False

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError("scheme", f"must be one of {', '.join(SCHEMES)}, got {self.scheme!r}")
        if self.dest is None:
            object.__setattr__(self, "dest", self.rwp.node_count - 1)
        n = self.rwp.node_count
        for key, value in (("source", self.source), ("dest", self.dest)):
            if not 0 <= value < n:
                raise ConfigError(key, f"node {value} outside [0, {n - 1}]")
        if self.source == self.dest:
            raise ConfigError("dest", "source and destination must differ")
        if self.generations < 1:
            raise ConfigError("gens", "must be >= 1")
        if self.reps < 1:
            raise ConfigError("reps", "must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed", "must be >= 0")
        if self.schedule.change_mode == "node_toggle" and self.schedule.toggle_k > n - 2:
            raise ConfigError("change-mode", f"toggle count exceeds {n - 2}")


@dataclass
class ReplicationResult:
    records: List[GenerationRecord]
    memory_trace: List[tuple] = field(default_factory=list)


@dataclass
class RunSummary:
    """Aggregates over completed replications."""

    per_generation: List[Tuple[str, int, float, float]]
    offline: Dict[str, float]
    offline_by_rep: Dict[str, List[float]]
    recovery: Dict[str, List[int]]

    def median_recovery(self, scheme: str) -> float:
        times = self.recovery.get(scheme, [])
        return float(np.median(times)) if times else math.nan

    def mean_quality(self, scheme: str, generation: int) -> float:
        for s, g, mean, _ in self.per_generation:
            if s == scheme and g == generation:
                return mean
        raise KeyError((scheme, generation))


def _connected_topology(config: ExperimentConfig, rng, replication: int):
    for _ in range(CONNECT_ATTEMPTS):
        graph, state = generate_rwp_topology(config.rwp, rng)
        if ensure_sd_connected(graph, config.source, config.dest):
            return graph, state
    raise ExperimentInvariantError(
        f"replication {replication} (seed {config.seed + replication}): no topology joining "
        f"{config.source} and {config.dest} in {CONNECT_ATTEMPTS} draws")


def _change(config: ExperimentConfig, graph, state, rng, replication: int, generation: int):
    sched, s, d = config.schedule, config.source, config.dest
    for _ in range(CONNECT_ATTEMPTS):
        if sched.change_mode == "node_toggle":
            candidate = apply_node_toggle(graph, sched.toggle_k, rng, s, d, params=config.rwp)
        else:
            state = advance_mobility(state, config.rwp, sched.dt, rng)
            moved = TopologySnapshot(state.positions, graph.active, graph.edges, graph.env_index)
            candidate = rebuild_edges(moved, config.rwp, rng)
        if ensure_sd_connected(candidate, s, d):
            return replace(candidate, env_index=graph.env_index + 1), state
    raise ExperimentInvariantError(
        f"replication {replication} (seed {config.seed + replication}): change at generation "
        f"{generation} kept disconnecting {s} and {d} after {CONNECT_ATTEMPTS} attempts")


def build_hook(config: ExperimentConfig, graph, rng):
    ga, s, d = config.ga, config.source, config.dest
    if config.scheme == "sga":
        return None
    if config.scheme == "riga":
        return RandomImmigrants(ga, s, d)
    if config.scheme == "eiga":
        return ElitismImmigrants(ga)
    memory = init_memory(ga.m, graph, s, d, rng)
    return MemoryScheme(ga, memory) if config.scheme == "mega" else EigaMegaScheme(ga, memory)


def make_record(scheme, replication, population: Population, graph, opt_cost) -> GenerationRecord:
    best = best_of(population.members)
    cost = path_cost(graph, best.path)
    feasible = sum(1 for ch in population.members if ch.fitness > 0) / len(population.members)
    return GenerationRecord(scheme, replication, population.generation, graph.env_index,
                            cost, best.fitness, quality(cost, opt_cost), feasible)


def run_replication(config: ExperimentConfig, replication: int, observer=None) -> ReplicationResult:
    """One seeded run of ``config.generations`` generations.

    ``observer(population, graph)``, if given, is called after every
    generation (used by tests to audit populations).
    """
    topo_seq, ga_seq = np.random.SeedSequence(config.seed + replication).spawn(2)
    topo_rng, ga_rng = np.random.default_rng(topo_seq), np.random.default_rng(ga_seq)
    s, d = config.source, config.dest

    graph, state = _connected_topology(config, topo_rng, replication)
    opt = dijkstra(graph, s, d).cost
    hook = build_hook(config, graph, ga_rng)
    population = init_population(graph, s, d, config.ga.n, ga_rng)
    changes = set(config.schedule.change_generations(config.generations))

    result = ReplicationResult([])
    for g in range(1, config.generations + 1):
        if g in changes:
            graph, state = _change(config, graph, state, topo_rng, replication, g)
            opt = dijkstra(graph, s, d).cost
        population = evolve_one_generation(population, graph, config.ga, ga_rng, hook)
        if observer is not None:
            observer(population, graph)
        result.records.append(make_record(config.scheme, replication, population, graph, opt))
        if config.trace_memory and isinstance(hook, MemoryScheme):
            for k, entry in enumerate(hook.memory.entries):
                result.memory_trace.append((config.scheme, replication, g, k,
                                            "-".join(map(str, entry.chromosome.path)),
                                            entry.stored_fitness, int(entry.is_random_placeholder)))
    return result


def run_experiment(config: ExperimentConfig):
    """All replications of one scheme; returns ``(records, summary, memory_trace)``."""
    records, trace = [], []
    for r in range(config.reps):
        res = run_replication(config, r)
        records.extend(res.records)
        trace.extend(res.memory_trace)
    return records, summarize(records, config.generations), trace


def summarize(records: Sequence[GenerationRecord], horizon: int) -> RunSummary:
    by_scheme: Dict[str, Dict[int, List[GenerationRecord]]] = {}
    for rec in records:
        by_scheme.setdefault(rec.scheme, {}).setdefault(rec.replication, []).append(rec)
    per_generation, offline, offline_by_rep, recovery = [], {}, {}, {}
    for scheme, reps in by_scheme.items():
        runs = [sorted(rs, key=lambda x: x.generation) for _, rs in sorted(reps.items())]
        gens = sorted({rec.generation for run in runs for rec in run})
        for g in gens:
            qs = [rec.quality for run in runs for rec in run if rec.generation == g]
            per_generation.append((scheme, g, float(np.mean(qs)), float(np.median(qs))))
        offline_by_rep[scheme] = [offline_performance(run) for run in runs]
        offline[scheme] = float(np.mean(offline_by_rep[scheme]))
        recovery[scheme] = [t for run in runs for t in recovery_times(run, horizon, RECOVERY_THRESHOLD)]
    return RunSummary(per_generation, offline, offline_by_rep, recovery)


def _comparable(config: ExperimentConfig):
    return replace(config, scheme="sga", trace_memory=False)


def compare_schemes(configs: Sequence[ExperimentConfig]):
    """Paired runs of several schemes over identical topology sequences.

    Returns ``(records, summary, memory_trace)`` with records ordered by
    scheme (as listed), replication, generation.
    """
    if not configs:
        raise ConfigError("scheme", "no schemes to compare")
    base = _comparable(configs[0])
    for cfg in configs[1:]:
        if _comparable(cfg) != base:
            raise ConfigError("scheme", "compared configurations differ in more than the scheme")
    records, trace = [], []
    for cfg in configs:
        recs, _, tr = run_experiment(cfg)
        records.extend(recs)
        trace.extend(tr)
    return records, summarize(records, configs[0].generations), trace


def comparison_table(summary: RunSummary, schemes: Sequence[str]):
    """Rows ``[generation, mean quality per scheme...]``, one per generation."""
    gens = sorted({g for s, g, _, _ in summary.per_generation if s in schemes})
    return [[g] + [summary.mean_quality(s, g) for s in schemes] for g in gens]


def _fmt(x) -> str:
    return f"{x:.6f}" if isinstance(x, float) else str(x)


def records_csv(records: Sequence[GenerationRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_HEADER)
    for r in records:
        w.writerow([_fmt(getattr(r, k)) for k in RECORD_HEADER])
    return buf.getvalue()


def summary_csv(summary: RunSummary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scheme", "generation", "mean_quality", "median_quality"])
    for row in summary.per_generation:
        w.writerow([_fmt(x) for x in row])
    w.writerow([])
    w.writerow(["scheme", "offline_perf", "median_recovery"])
    for scheme, perf in summary.offline.items():
        w.writerow([scheme, _fmt(perf), _fmt(summary.median_recovery(scheme))])
    return buf.getvalue()


def memory_csv(trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MEMORY_HEADER)
    for row in trace:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()
