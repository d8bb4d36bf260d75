"""Command-line front end for the experiment runner.

Settings come from flags and, optionally, a ``key = value`` file given with
``--config``.  Keys in the file use the flag names without the leading
dashes.  Flags override the file.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .bench import (SCHEMES, ExperimentConfig, compare_schemes, memory_csv, records_csv,
                    summary_csv)
from .errors import ConfigError, DynrouteError
from .ga import GaParams
from .topology import DynamicsSchedule, RwpParams

# key -> (nargs, help); values stay as token lists until _build
OPTIONS = {
    "scheme": ("1", "comma-separated list from: " + ", ".join(SCHEMES)),
    "nodes": ("1", "number of nodes"),
    "area": ("2", "area width and height in meters"),
    "range": ("1", "radio range in meters"),
    "speed": ("2", "minimum and maximum speed in m/s"),
    "pause": ("1", "waypoint pause time in seconds"),
    "cost-model": ("+", "unit | distance | random LO HI"),
    "change-mode": ("+", "toggle K | mobility DT"),
    "change-interval": ("1", "generations between topology changes"),
    "changes": ("1", "total number of changes (default: as many as fit)"),
    "pop": ("1", "population size"),
    "gens": ("1", "generations per replication"),
    "pc": ("1", "crossover probability"),
    "pm": ("1", "mutation probability"),
    "rei": ("1", "elitism-based immigrant ratio"),
    "rri": ("1", "random immigrant ratio"),
    "pmi": ("1", "immigrant mutation probability"),
    "memory-size": ("1", "memory size (default max(1, pop // 10))"),
    "source": ("1", "source node id"),
    "dest": ("1", "destination node id (default: last node)"),
    "seed": ("1", "master seed"),
    "reps": ("1", "replications"),
    "out": ("1", "CSV output file (default: stdout)"),
}
FLAGS = ("trace-memory",)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("argv", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dynroute", description=__doc__.splitlines()[0])
    for key, (nargs, help_) in OPTIONS.items():
        p.add_argument(f"--{key}", nargs=None if nargs == "1" else (int(nargs) if nargs.isdigit() else nargs),
                       default=None, help=help_)
    p.add_argument("--trace-memory", action="store_true", default=None,
                   help="dump memory contents per generation to OUT.memory.csv")
    p.add_argument("--config", default=None, help="key = value settings file")
    return p


def read_config_file(path) -> Dict[str, List[str]]:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in text.split("=", 1))
        key = key.replace("_", "-")
        if key not in OPTIONS and key not in FLAGS:
            raise ConfigError(key, "unknown key")
        values[key] = value.split()
    return values


def _merge(argv: Optional[Sequence[str]]) -> Dict[str, List[str]]:
    ns = build_parser().parse_args(argv)
    merged = read_config_file(ns.config) if ns.config else {}
    for key in OPTIONS:
        value = getattr(ns, key.replace("-", "_"))
        if value is not None:
            merged[key] = value if isinstance(value, list) else [value]
    if ns.trace_memory:
        merged["trace-memory"] = ["true"]
    return merged


def _num(values, key, kind=float, count=1):
    tokens = values[key]
    if len(tokens) != count:
        raise ConfigError(key, f"expected {count} value(s), got {len(tokens)}")
    try:
        out = [kind(t) for t in tokens]
    except ValueError:
        raise ConfigError(key, f"not a valid {kind.__name__}: {' '.join(tokens)}") from None
    return out[0] if count == 1 else out


def _build(values: Dict[str, List[str]]) -> List[ExperimentConfig]:
    if "scheme" not in values:
        raise ConfigError("scheme", "required")
    schemes = [s.strip() for s in " ".join(values["scheme"]).split(",") if s.strip()]
    for s in schemes:
        if s not in SCHEMES:
            raise ConfigError("scheme", f"unknown scheme {s!r}")

    def get(key, kind=float, count=1, default=None):
        return _num(values, key, kind, count) if key in values else default

    rwp = {}
    if "nodes" in values:
        rwp["node_count"] = get("nodes", int)
    if "area" in values:
        rwp["width"], rwp["height"] = get("area", float, 2)
    if "range" in values:
        rwp["radio_range"] = get("range")
    if "speed" in values:
        rwp["speed_min"], rwp["speed_max"] = get("speed", float, 2)
    if "pause" in values:
        rwp["pause_time"] = get("pause")
    if "cost-model" in values:
        tokens = values["cost-model"]
        if tokens[0] in ("unit", "distance") and len(tokens) == 1:
            rwp["cost_model"] = tokens[0]
        elif tokens[0] == "random" and len(tokens) == 3:
            rwp["cost_model"] = "uniform_random"
            rwp["cost_lo"], rwp["cost_hi"] = _num({"cost-model": tokens[1:]}, "cost-model", float, 2)
        else:
            raise ConfigError("cost-model", f"expected unit, distance or 'random LO HI', got {' '.join(tokens)!r}")

    sched = {}
    if "change-mode" in values:
        tokens = values["change-mode"]
        if len(tokens) == 2 and tokens[0] == "toggle":
            sched["change_mode"] = "node_toggle"
            sched["toggle_k"] = _num({"change-mode": tokens[1:]}, "change-mode", int)
        elif len(tokens) == 2 and tokens[0] == "mobility":
            sched["change_mode"] = "mobility_advance"
            sched["dt"] = _num({"change-mode": tokens[1:]}, "change-mode", float)
        else:
            raise ConfigError("change-mode", f"expected 'toggle K' or 'mobility DT', got {' '.join(tokens)!r}")
    if "change-interval" in values:
        sched["change_interval"] = get("change-interval", int)
    if "changes" in values:
        sched["total_changes"] = get("changes", int)

    ga = {}
    for key, name, kind in (("pop", "n", int), ("pc", "p_c", float), ("pm", "p_m", float),
                            ("rei", "r_ei", float), ("rri", "r_ri", float),
                            ("pmi", "p_m_i", float), ("memory-size", "m", int)):
        if key in values:
            ga[name] = get(key, kind)

    def checked(cls, kwargs, key):
        try:
            return cls(**kwargs)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(key, str(exc)) from None

    rwp_params = checked(RwpParams, rwp, "nodes/area/range/speed/pause/cost-model")
    schedule = checked(DynamicsSchedule, sched, "change-mode/change-interval/changes")
    ga_params = checked(GaParams, ga, "pop/pc/pm/rei/rri/pmi/memory-size")
    common = dict(rwp=rwp_params, schedule=schedule, ga=ga_params,
                  source=get("source", int, default=0), dest=get("dest", int),
                  generations=get("gens", int, default=10), reps=get("reps", int, default=1),
                  seed=get("seed", int, default=0),
                  trace_memory="trace-memory" in values and values["trace-memory"][0].lower() in ("1", "true", "yes", "on"))
    return [ExperimentConfig(scheme=s, **common) for s in schemes]


def parse_configs(argv: Optional[Sequence[str]] = None):
    """All configs named by ``--scheme`` plus the raw ``out`` path."""
    values = _merge(argv)
    out = " ".join(values["out"]) if "out" in values else None
    configs = _build(values)
    if configs[0].trace_memory and out is None:
        raise ConfigError("trace-memory", "requires --out")
    return configs, out


def parse_config(argv: Optional[Sequence[str]] = None) -> ExperimentConfig:
    configs, _ = parse_configs(argv)
    if len(configs) != 1:
        raise ConfigError("scheme", "expected exactly one scheme")
    return configs[0]


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        configs, out = parse_configs(argv)
        records, summary, trace = compare_schemes(configs)
    except DynrouteError as exc:
        print(f"dynroute: error: {exc}", file=sys.stderr)
        return 2
    if out is None:
        sys.stdout.write(records_csv(records))
        sys.stderr.write(summary_csv(summary))
        return 0
    Path(out).write_text(records_csv(records))
    Path(f"{out}.summary.csv").write_text(summary_csv(summary))
    if configs[0].trace_memory:
        Path(f"{out}.memory.csv").write_text(memory_csv(trace))
    return 0


if __name__ == "__main__":
    sys.exit(main())
