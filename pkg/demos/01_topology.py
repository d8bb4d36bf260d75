"""
A random waypoint network and its churn
=======================================

Drop nodes on a plane, link every pair within radio range, then watch the
graph change as nodes sleep and wake or keep moving.
"""

import numpy as np

from dynroute import RwpParams, generate_rwp_topology
from dynroute.topology import advance_mobility, apply_node_toggle, ensure_sd_connected, rebuild_edges

params = RwpParams(node_count=30, width=800, height=800, radio_range=250)
rng = np.random.default_rng(7)
graph, state = generate_rwp_topology(params, rng)
print("nodes:", graph.node_count, "links:", len(graph.edges))
print("0 reaches 29:", ensure_sd_connected(graph, 0, 29))

# degree spread says how dense the radio graph is
degree = np.array([len(graph.neighbors(u)) for u in range(graph.node_count)])
print("degree min/mean/max:", degree.min(), degree.mean().round(2), degree.max())

# node toggling: two nodes other than the endpoints flip state
slept = apply_node_toggle(graph, 2, rng, 0, 29, params=params)
print("asleep:", np.flatnonzero(~slept.active), "links now:", len(slept.edges), "env", slept.env_index)

# mobility: every node advances 20 seconds along its waypoint leg
state = advance_mobility(state, params, 20.0, rng)
moved = rebuild_edges(type(graph)(state.positions, graph.active, graph.edges, graph.env_index), params, rng)
lost = set(graph.edges) - set(moved.edges)
gained = set(moved.edges) - set(graph.edges)
print("after moving:", len(lost), "links broke,", len(gained), "appeared")
