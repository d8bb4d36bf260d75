"""Random waypoint topologies and their evolution over time.

A :class:`TopologySnapshot` is one environment ``G_i``: node positions,
awake/asleep flags and a weighted undirected edge set derived from a radio
range.  Snapshots are treated as values; every operation here returns a new
snapshot instead of mutating its input.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .errors import ParameterError, TopologyParseError, TopologyValidationError

Edge = Tuple[int, int]

COST_MODELS = ("unit", "distance", "uniform_random")

# distance-mode floor so co-located nodes still get a printable positive cost
MIN_DISTANCE_COST = 1e-6


def edge_key(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class RwpParams:
    """Random waypoint and link-cost parameters.

    Defaults are conventional MANET simulation values: a 1000 x 1000 m area,
    250 m radio range, speeds in [1, 10] m/s, 5 s pause and 50 nodes.
    """

    node_count: int = 50
    width: float = 1000.0
    height: float = 1000.0
    radio_range: float = 250.0
    speed_min: float = 1.0
    speed_max: float = 10.0
    pause_time: float = 5.0
    cost_model: str = "distance"
    cost_lo: float = 1.0
    cost_hi: float = 10.0

    def __post_init__(self):
        if self.node_count < 1:
            raise ParameterError(f"node_count must be >= 1, got {self.node_count}")
        if not (self.width > 0 and self.height > 0):
            raise ParameterError("area dimensions must be positive")
        if not self.radio_range > 0:
            raise ParameterError("radio_range must be positive")
        if not 0 < self.speed_min <= self.speed_max:
            raise ParameterError("need 0 < speed_min <= speed_max")
        if self.pause_time < 0:
            raise ParameterError("pause_time must be >= 0")
        if self.cost_model not in COST_MODELS:
            raise ParameterError(f"unknown cost_model {self.cost_model!r}")
        if not 0 < self.cost_lo <= self.cost_hi:
            raise ParameterError("need 0 < cost_lo <= cost_hi")

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)


@dataclass(frozen=True)
class DynamicsSchedule:
    """When and how the environment changes during a run.

    ``total_changes=None`` means "as many as fit in the run".
    """

    change_interval: int = 10
    change_mode: str = "node_toggle"
    toggle_k: int = 2
    dt: float = 10.0
    total_changes: Optional[int] = None

    def __post_init__(self):
        if self.change_interval < 1:
            raise ParameterError("change_interval must be >= 1")
        if self.change_mode not in ("node_toggle", "mobility_advance"):
            raise ParameterError(f"unknown change_mode {self.change_mode!r}")
        if self.change_mode == "node_toggle" and self.toggle_k < 1:
            raise ParameterError("toggle k must be >= 1")
        if self.change_mode == "mobility_advance" and not self.dt > 0:
            raise ParameterError("mobility dt must be > 0")
        if self.total_changes is not None and self.total_changes < 0:
            raise ParameterError("total_changes must be >= 0")

    def change_generations(self, generations: int) -> List[int]:
        """Generations (1-based) at whose start the environment changes."""
        gens = list(range(self.change_interval + 1, generations + 1, self.change_interval))
        if self.total_changes is not None:
            gens = gens[: self.total_changes]
        return gens


@dataclass(frozen=True, eq=False)
class TopologySnapshot:
    positions: np.ndarray
    active: np.ndarray
    edges: Dict[Edge, float]
    env_index: int = 0
    _adj: Dict[int, Tuple[int, ...]] = field(init=False, repr=False)

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        active = np.asarray(self.active, dtype=bool).reshape(-1)
        if len(active) != len(positions):
            raise ParameterError("positions and active flags differ in length")
        n = len(positions)
        adj: Dict[int, List[int]] = {u: [] for u in range(n)}
        edges = {}
        for (i, j), cost in self.edges.items():
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ParameterError(f"bad edge ({i}, {j})")
            if not (active[i] and active[j]):
                raise ParameterError(f"edge ({i}, {j}) touches a sleeping node")
            if not (cost > 0 and math.isfinite(cost)):
                raise ParameterError(f"edge ({i}, {j}) has cost {cost}")
            key = edge_key(i, j)
            if key in edges:
                raise ParameterError(f"duplicate edge {key}")
            edges[key] = float(cost)
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "active", active)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adj", {u: tuple(sorted(v)) for u, v in adj.items()})

    @property
    def node_count(self) -> int:
        return len(self.positions)

    def neighbors(self, u: int) -> Tuple[int, ...]:
        """Sorted neighbor IDs of ``u`` (empty for sleeping nodes)."""
        return self._adj[u]

    def cost(self, u: int, v: int) -> Optional[float]:
        return self.edges.get(edge_key(u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edges

    def __eq__(self, other):
        if not isinstance(other, TopologySnapshot):
            return NotImplemented
        return (
            self.env_index == other.env_index
            and np.array_equal(self.positions, other.positions)
            and np.array_equal(self.active, other.active)
            and self.edges == other.edges
        )


@dataclass(frozen=True, eq=False)
class MobilityState:
    positions: np.ndarray
    waypoints: np.ndarray
    speeds: np.ndarray
    pauses: np.ndarray

    def copy(self) -> "MobilityState":
        return MobilityState(
            self.positions.copy(), self.waypoints.copy(), self.speeds.copy(), self.pauses.copy()
        )


def _in_range_pairs(positions: np.ndarray, active: np.ndarray, radio_range: float) -> List[Edge]:
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    ok = (dist <= radio_range) & active[:, None] & active[None, :]
    ii, jj = np.nonzero(np.triu(ok, k=1))
    return list(zip(ii.tolist(), jj.tolist()))


def _edge_costs(pairs, positions, params: RwpParams, rng, previous=None):
    previous = previous or {}
    costs = {}
    for i, j in pairs:
        if params.cost_model == "unit":
            costs[(i, j)] = 1.0
        elif params.cost_model == "distance":
            d = float(math.hypot(*(positions[i] - positions[j])))
            costs[(i, j)] = max(d, MIN_DISTANCE_COST)
        elif (i, j) in previous:
            costs[(i, j)] = previous[(i, j)]
        else:
            if rng is None:
                raise ParameterError("uniform_random cost model needs a random source")
            costs[(i, j)] = float(rng.uniform(params.cost_lo, params.cost_hi))
    return costs


def generate_rwp_topology(params: RwpParams, rng: np.random.Generator):
    """Scatter nodes uniformly, give each a waypoint and speed, link by range.

    Returns ``(snapshot, mobility_state)``.  The graph may be disconnected;
    use :func:`ensure_sd_connected` to check the pair you care about.
    """
    n = params.node_count
    size = np.array([params.width, params.height])
    positions = rng.uniform(0.0, 1.0, size=(n, 2)) * size
    waypoints = rng.uniform(0.0, 1.0, size=(n, 2)) * size
    speeds = rng.uniform(params.speed_min, params.speed_max, size=n)
    state = MobilityState(positions.copy(), waypoints, speeds, np.zeros(n))
    active = np.ones(n, dtype=bool)
    pairs = _in_range_pairs(positions, active, params.radio_range)
    edges = _edge_costs(pairs, positions, params, rng)
    return TopologySnapshot(positions, active, edges, env_index=0), state


def advance_mobility(state: MobilityState, params: RwpParams, dt: float,
                     rng: np.random.Generator) -> MobilityState:
    """Move every node along its straight leg for ``dt`` seconds.

    A node that can reach its waypoint within the remaining step is snapped
    onto it and starts pausing; when the pause runs out a new waypoint and
    speed are drawn.
    """
    if not dt > 0:
        raise ParameterError("dt must be > 0")
    new = state.copy()
    size = np.array([params.width, params.height])
    for u in range(len(new.positions)):
        budget = float(dt)
        while budget > 0:
            if new.pauses[u] > 0:
                used = min(new.pauses[u], budget)
                new.pauses[u] -= used
                budget -= used
                if new.pauses[u] <= 0:
                    new.pauses[u] = 0.0
                    new.waypoints[u] = rng.uniform(0.0, 1.0, size=2) * size
                    new.speeds[u] = rng.uniform(params.speed_min, params.speed_max)
                continue
            delta = new.waypoints[u] - new.positions[u]
            remaining = float(math.hypot(*delta))
            reach = new.speeds[u] * budget
            if remaining <= reach:
                new.positions[u] = new.waypoints[u]
                budget -= remaining / new.speeds[u]
                new.pauses[u] = params.pause_time
                if params.pause_time == 0:
                    new.waypoints[u] = rng.uniform(0.0, 1.0, size=2) * size
                    new.speeds[u] = rng.uniform(params.speed_min, params.speed_max)
            else:
                new.positions[u] = new.positions[u] + delta * (reach / remaining)
                budget = 0.0
    np.clip(new.positions, 0.0, size, out=new.positions)
    return new


def rebuild_edges(snapshot: TopologySnapshot, params: RwpParams,
                  rng: Optional[np.random.Generator] = None) -> TopologySnapshot:
    """Recompute the edge set from the range rule over active nodes.

    In ``uniform_random`` mode surviving edges keep their previous cost and
    only new edges draw a fresh one from ``rng``.
    """
    pairs = _in_range_pairs(snapshot.positions, snapshot.active, params.radio_range)
    edges = _edge_costs(pairs, snapshot.positions, params, rng, previous=snapshot.edges)
    return TopologySnapshot(snapshot.positions, snapshot.active, edges, snapshot.env_index + 1)


def toggle_nodes(snapshot: TopologySnapshot, nodes: Iterable[int],
                 params: Optional[RwpParams] = None,
                 rng: Optional[np.random.Generator] = None) -> TopologySnapshot:
    """Flip the active flag of ``nodes`` and bump the environment index.

    Edges touching a node that falls asleep are dropped.  When ``params`` is
    given, the range-rule edges of nodes that wake up are restored as well
    (costs of untouched edges are kept).
    """
    active = snapshot.active.copy()
    for u in nodes:
        active[u] = not active[u]
    edges = {e: c for e, c in snapshot.edges.items() if active[e[0]] and active[e[1]]}
    if params is not None:
        pairs = _in_range_pairs(snapshot.positions, active, params.radio_range)
        fresh = [p for p in pairs if p not in edges]
        edges.update(_edge_costs(fresh, snapshot.positions, params, rng, previous=snapshot.edges))
    return TopologySnapshot(snapshot.positions, active, edges, snapshot.env_index + 1)


def apply_node_toggle(snapshot: TopologySnapshot, k: int, rng: np.random.Generator,
                      s: int, d: int, params: Optional[RwpParams] = None) -> TopologySnapshot:
    """Sleep/wake churn: ``k`` random nodes other than ``s`` and ``d`` flip state."""
    n = snapshot.node_count
    if not 1 <= k <= n - 2:
        raise ParameterError(f"toggle count k={k} outside [1, {n - 2}]")
    candidates = np.array([u for u in range(n) if u != s and u != d])
    chosen = rng.choice(candidates, size=k, replace=False)
    return toggle_nodes(snapshot, sorted(int(u) for u in chosen), params, rng)


def ensure_sd_connected(snapshot: TopologySnapshot, s: int, d: int) -> bool:
    """Breadth-first reachability of ``d`` from ``s`` over active edges."""
    if s == d:
        raise ParameterError("source and destination must differ")
    for u in (s, d):
        if not (0 <= u < snapshot.node_count) or not snapshot.active[u]:
            raise ParameterError(f"endpoint {u} is not an active node")
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in snapshot.neighbors(u):
            if v == d:
                return True
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return False


def save_topology(snapshot: TopologySnapshot, path) -> None:
    lines = [f"nodes {snapshot.node_count}"]
    for u, ((x, y), on) in enumerate(zip(snapshot.positions, snapshot.active)):
        lines.append(f"node {u} {x:.6f} {y:.6f} {int(on)}")
    lines.append(f"edges {len(snapshot.edges)}")
    for (i, j), cost in sorted(snapshot.edges.items()):
        lines.append(f"edge {i} {j} {cost:.6f}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_topology(path) -> TopologySnapshot:
    """Parse the plain-text topology format written by :func:`save_topology`.

    Raises :class:`TopologyParseError` (or its validation subclass) carrying
    the offending 1-based line number.
    """
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        text = raw.strip()
        if text and not text.startswith("#"):
            rows.append((lineno, text.split()))
    it = iter(rows)

    def take(keyword, nfields):
        try:
            lineno, parts = next(it)
        except StopIteration:
            raise TopologyParseError(len(rows) and rows[-1][0], f"unexpected end of file, expected {keyword!r}")
        if parts[0] != keyword or len(parts) != nfields:
            raise TopologyParseError(lineno, f"expected {keyword!r} with {nfields - 1} fields, got {' '.join(parts)!r}")
        return lineno, parts[1:]

    def number(lineno, text, kind):
        try:
            return kind(text)
        except ValueError:
            raise TopologyParseError(lineno, f"bad number {text!r}") from None

    lineno, (count,) = take("nodes", 2)
    n = number(lineno, count, int)
    if n < 1:
        raise TopologyValidationError(lineno, "node count must be positive")
    positions = np.zeros((n, 2))
    active = np.zeros(n, dtype=bool)
    for expected in range(n):
        lineno, (uid, x, y, flag) = take("node", 5)
        if number(lineno, uid, int) != expected:
            raise TopologyParseError(lineno, f"expected node id {expected}, got {uid}")
        positions[expected] = (number(lineno, x, float), number(lineno, y, float))
        if flag not in ("0", "1"):
            raise TopologyParseError(lineno, f"active flag must be 0 or 1, got {flag!r}")
        active[expected] = flag == "1"
    lineno, (count,) = take("edges", 2)
    m = number(lineno, count, int)
    edges = {}
    for _ in range(m):
        lineno, (i, j, c) = take("edge", 4)
        i, j, cost = number(lineno, i, int), number(lineno, j, int), number(lineno, c, float)
        for u in (i, j):
            if not 0 <= u < n:
                raise TopologyValidationError(lineno, f"edge references unknown node {u}")
            if not active[u]:
                raise TopologyValidationError(lineno, f"edge touches sleeping node {u}")
        if i == j:
            raise TopologyValidationError(lineno, "self-loop")
        if not (cost > 0 and math.isfinite(cost)):
            raise TopologyValidationError(lineno, f"edge cost must be positive and finite, got {c}")
        if edge_key(i, j) in edges:
            raise TopologyValidationError(lineno, f"duplicate edge ({i}, {j})")
        edges[edge_key(i, j)] = cost
    extra = next(it, None)
    if extra is not None:
        raise TopologyParseError(extra[0], "trailing content after edge list")
    return TopologySnapshot(positions, active, edges)


def from_edges(node_count: int, edges: Dict[Edge, float], env_index: int = 0,
               active=None) -> TopologySnapshot:
    """Build a snapshot from an explicit edge map; positions are zeros."""
    if active is None:
        active = np.ones(node_count, dtype=bool)
    return TopologySnapshot(np.zeros((node_count, 2)), active, dict(edges), env_index)
