"""Comparison design and the boosted-sensitivity pilot, in simulation.

First draws the sparse pair design used for a real study (degree-6 random
regular graphs, globally shuffled trials).  Then reruns the plain-vs-
boosted comparison as a synthetic experiment: the same banded pair design
judged by observers with full or halved judgment noise, reconstructed and
scored against the true ordering.
"""

import numpy as np

from boostpc.sampling import build_trials, sample_pair_graph
from boostpc.simulate import run_pilot_experiment

print("== sparse comparison design ==")
graphs = [sample_pair_graph(155, 6, seed=k, set_id=f"scene{k}")
          for k in range(8)]
trials = build_trials(graphs, votes_target=20, seed=99)
print(f"8 sets x 155 items at degree 6 -> {sum(len(g.edges) for g in graphs)}"
      f" pairs, {len(trials)} shuffled trials")
left_frac = np.mean([t.left_item == t.pair[0] for t in trials])
print(f"left/right randomization: {left_frac:.3f} of trials show the "
      "lower-numbered item on the left\n")

print("== plain vs boosted paired comparison, simulated ==")
print("13 quality levels, pairs within 6 levels (57 pairs), 20 votes each")
plains, boosts = [], []
for seed in range(50):
    p, b = run_pilot_experiment(n_levels=13, votes_per_pair=20,
                                plain_sigma=1.0, boosted_sigma=0.5,
                                seed=seed, mu_spacing=0.15)
    plains.append(p)
    boosts.append(b)
print(f"mean SROCC vs true ordering over 50 seeds:")
print(f"  plain   (sigma = 1.0): {np.mean(plains):.4f}")
print(f"  boosted (sigma = 0.5): {np.mean(boosts):.4f}")
print("halving the observation noise tightens the recovered ranking")
