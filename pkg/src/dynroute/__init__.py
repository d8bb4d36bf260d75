"""Genetic algorithms with immigrants and memory for dynamic shortest-path
routing on random waypoint topologies."""

from .bench import ExperimentConfig, compare_schemes, run_experiment
from .errors import (ConfigError, GenerationFailure, InvalidChromosome, OracleRefusal,
                     ParameterError, TopologyParseError, TopologyValidationError)
from .ga import (GaParams, Population, RouteChromosome, crossover, evolve_one_generation,
                 fitness, init_population, mutate, random_walk_path, remove_loops,
                 select_parents)
from .immigrants import make_elitism_immigrants, make_random_immigrants, replace_worst
from .memory import (MemoryStore, detect_change, init_memory, retrieve_memory, similarity,
                     update_memory)
from .oracle import OracleResult, dijkstra, enumerate_all_paths, offline_performance, quality
from .topology import (DynamicsSchedule, RwpParams, TopologySnapshot, advance_mobility,
                       apply_node_toggle, ensure_sd_connected, generate_rwp_topology,
                       load_topology, rebuild_edges, save_topology)

__version__ = "0.1.0"
