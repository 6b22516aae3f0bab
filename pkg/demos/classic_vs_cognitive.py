"""Bounded-confidence dynamics with a fixed tolerance and with mind-derived ones.

The classic run gives every agent the same tolerance.  In the cognitive run
each agent's tolerance shrinks with the confidence of its activated
supporting beliefs, so confident agents hold their ground while the others
drift towards them.
"""

import numpy as np

from tvgmind import SimConfig, clusters, generate_society, run, spread

n = 60
seed = 7

flat = generate_society("complete_static", n, seed=seed)
t = run(flat, SimConfig(mode="classic", eps=0.25, seed=seed, max_events=30000))
lo, hi, mean, var = spread(t.final_opinions)
rep = clusters(t.final_opinions, 0.01)
print(f"classic eps=0.25: {len(t)} events, {rep.count} clusters at "
      f"{np.round(rep.centroids, 3).tolist()}")

params = {"support_nodes": 3, "support_dc": [0.0, 1.0], "topic_dc": 0.0}
minded = generate_society("complete_static", n, params, seed=seed)
cfg = SimConfig(mode="cognitive", eps_max=0.3, k=0.0, delta_plus=0.0,
                seed=seed, max_events=30000)
t2 = run(minded, cfg)
rep2 = clusters(t2.final_opinions, 0.01)
print(f"cognitive eps_max=0.3: {len(t2)} events, {rep2.count} clusters at "
      f"{np.round(rep2.centroids, 3).tolist()}")

# agents that started most confident should have moved the least
x = t2.opinion_matrix()
moved = np.abs(x[-1] - x[0])
sup = np.array([np.mean([minded.agents[a].mind.reps[u].confidence for u in (1, 2, 3)])
                for a in range(n)])
order = np.argsort(sup)
print("mean distance moved, least vs most confident third:",
      round(float(moved[order[: n // 3]].mean()), 3),
      round(float(moved[order[-n // 3:]].mean()), 3))
