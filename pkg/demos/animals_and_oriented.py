"""Greedy lattice animals and oriented passage times.

First part: the exact maximum N_n of open edges on an n-step self-avoiding
walk from the origin, for several densities p; N_n/n grows like p^(1/2).
Second part: oriented minimal passage times T_n to level n divided by n.
"""
import numpy as np

from fpplab.animals import AnimalInstance, exact_Nn
from fpplab.hashing import replica_seed
from fpplab.percolation import oriented_min_passage
from fpplab.weights import DistributionSpec, Environment

n = 10
ps = [0.05, 0.1, 0.2, 0.4]
means = []
for p in ps:
    dist = DistributionSpec.bernoulli_shift(0, 1, p)
    N = [exact_Nn(AnimalInstance(Environment(replica_seed(1, i), dist, 2), n)) for i in range(300)]
    means.append(np.mean(N) / n)
    print(f"p={p:<5} E[N_n]/n = {means[-1]:.4f}")
slope = np.polyfit(np.log(ps), np.log(means), 1)[0]
print(f"log-log slope {slope:.3f} (square-root scaling gives 0.5)\n")

dist = DistributionSpec.exponential(1.0)
for m in (25, 50, 100):
    T = np.array([oriented_min_passage(Environment(replica_seed(2, i), dist, 2), m) for i in range(60)])
    print(f"n={m:3d}: T_n/n mean {T.mean() / m:.4f}, 0.9-quantile {np.quantile(T / m, 0.9):.4f}")
