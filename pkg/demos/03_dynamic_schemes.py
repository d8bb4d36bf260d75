"""
Keeping up with a changing network
==================================

The same sequence of topology changes is replayed for each scheme, so the
per-generation quality curves can be compared directly.
"""

from dynroute import ExperimentConfig, compare_schemes
from dynroute.bench import comparison_table
from dynroute.topology import DynamicsSchedule

schemes = ["sga", "riga", "eiga", "mega", "eiga-mega"]
schedule = DynamicsSchedule(change_interval=10, change_mode="node_toggle", toggle_k=2)
configs = [ExperimentConfig(s, schedule=schedule, generations=30, reps=10, seed=0) for s in schemes]
records, summary, _ = compare_schemes(configs)

# mean quality per generation; changes land on generations 11 and 21
print("gen " + " ".join(f"{s:>9}" for s in schemes))
for row in comparison_table(summary, schemes):
    print(f"{row[0]:3d} " + " ".join(f"{q:9.3f}" for q in row[1:]))

for s in schemes:
    print(f"{s:>9}: offline {summary.offline[s]:.4f}  median recovery {summary.median_recovery(s)}")
