"""
Inside the memory scheme
========================

Follow the memory slots of one MEGA run: random placeholders are
overwritten by good routes, and a change shows up as a drop in stored
fitness.
"""

from dynroute import ExperimentConfig, run_experiment
from dynroute.bench import memory_csv
from dynroute.topology import DynamicsSchedule

cfg = ExperimentConfig("mega", schedule=DynamicsSchedule(change_interval=8), generations=20,
                       reps=1, seed=0, trace_memory=True)
records, summary, trace = run_experiment(cfg)

# print a slot only when its route or stored fitness moved
last = {}
for scheme, rep, gen, slot, path, stored, placeholder in trace:
    if last.get(slot) != (path, stored):
        tag = "placeholder" if placeholder else ""
        print(f"gen {gen:2d} slot {slot}  fitness {stored:.5f}  {path} {tag}")
    last[slot] = (path, stored)

# the same trace, as written by --trace-memory
print(memory_csv(trace).splitlines()[0])
