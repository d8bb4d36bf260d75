"""
Shortest path by evolution on a fixed network
=============================================

Run the plain elitist GA on one static topology and compare its best
route with the exact shortest path.
"""

import numpy as np

from dynroute import GaParams, RwpParams, dijkstra, evolve_one_generation, generate_rwp_topology, init_population
from dynroute.ga import best_of, route_cost

rng = np.random.default_rng(2)
params = RwpParams(node_count=20)
while True:
    graph, _ = generate_rwp_topology(params, rng)
    opt = dijkstra(graph, 0, 19)
    if opt.reachable:
        break
print("optimal route:", opt.path, "cost", round(opt.cost, 2))

ga = GaParams(n=20, p_c=0.9, p_m=0.1)
pop = init_population(graph, 0, 19, ga.n, rng)
for t in range(1, 31):
    pop = evolve_one_generation(pop, graph, ga, rng)
    best = best_of(pop.members)
    if t % 5 == 0:
        print(f"gen {t:2d}  best cost {route_cost(best):8.2f}  quality {opt.cost / route_cost(best):.3f}")

print("GA route:", best_of(pop.members).path)
