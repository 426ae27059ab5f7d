"""Which weights does a geodesic use?

Draws exponential(1) environments, takes the selected geodesic from the
origin to (40, 0), and compares the histogram of weights along it with the
ambient law.  Light edges are over-represented and heavy edges nearly
vanish.
"""
import numpy as np

from fpplab.empirical import weights_measure
from fpplab.geodesics import geodesic
from fpplab.hashing import replica_seed
from fpplab.intervals import IntervalSet
from fpplab.weights import DistributionSpec, Environment

dist = DistributionSpec.exponential(1.0)
target = (40, 0)
runs = [geodesic(Environment(replica_seed(5, i), dist, 2), (0, 0), target) for i in range(100)]

T = np.array([r.T for r in runs])
edges = np.array([len(r.geodesic) for r in runs])
print(f"T(0, x)/|x|_1 = {T.mean() / 40:.4f} ± {T.std(ddof=1) / 40 / 10:.4f}")
print(f"geodesic length / |x|_1 = {edges.mean() / 40:.3f}")
print(f"touched the search box in {sum(r.boundary_touched for r in runs)} of {len(runs)} runs\n")

print(f"{'set':>14} {'ambient':>9} {'on geodesic':>12} {'ratio':>7}")
for lo, hi in [(0, 0.1), (0.1, 0.5), (0.5, 1), (1, 2), (2, 4), (4, np.inf)]:
    B = IntervalSet.half_open(lo, hi)
    mu = float(dist.prob(B))
    emp = np.mean([weights_measure(r.weights, B) for r in runs])
    print(f"{str(B):>14} {mu:9.4f} {emp:12.4f} {emp / mu:7.3f}")
