"""Open clusters, chemical distance and thin boxes.

An edge is open when its weight is at most the 0.8-quantile.  The script
measures the chemical distance d_C(0, n e1) against the lattice distance,
then inspects a thin box of scale 80 at two open probabilities.
"""
import json

from fpplab.hashing import replica_seed
from fpplab.percolation import (BoxParams, PercConfig, b1_violation, box_geometry, chemical_sample,
                                good_barrier, pilot_delta)
from fpplab.weights import DistributionSpec, Environment

dist = DistributionSpec.exponential(1.0)
thr = float(dist.quantile(0.8))

for n in (20, 40, 60):
    ratios, restricted, tried = [], [], 0
    while len(ratios) < 50:
        s = chemical_sample(Environment(replica_seed(3, tried), dist, 2), thr, (n, 0))
        tried += 1
        if s.connected:
            ratios.append(s.ratio)
            restricted.append(s.restricted / s.distance)
    print(f"n={n:3d}: connected {50 / tried:.2f}, mean d_C/n {sum(ratios) / 50:.3f}, "
          f"max {max(ratios):.3f}, restricted/unrestricted max {max(restricted):.3f}")

# barrier shells need a supercritical field well above threshold at this scale
params = BoxParams((0, 0), 1, 80, 10)
geom = box_geometry(params, 2)
print("\nthin box geometry:", json.dumps(geom.summary(), default=str))
delta = pilot_delta(dist)
# the cheap-crossing scan is the slow part (about 20 s at this scale), so run it once
cheap = b1_violation(Environment(0, dist, 2), params, delta, PercConfig(2, 2, delta, thr).pair_budget)
print(f"seed 0: cheap crossing {'none' if cheap is None else 'found'} (delta = {delta:.4f})")
for q in (0.8, 0.95):
    cfg = PercConfig(2, 2, delta, float(dist.quantile(q)))
    for seed in range(3):
        env = Environment(seed, dist, 2)
        bar = good_barrier(env, params, cfg, geom)
        print(f"open prob {q}, seed {seed}: good barrier {bar.ok}{'' if bar.ok else ' (' + bar.reason + ')'}")
