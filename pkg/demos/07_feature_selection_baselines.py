"""The three feature-selection baselines on planted data.

Dimension 0 carries the class signal; ReliefF weights, single-run recursive
elimination, and the 10-member bootstrap ensemble must all surface it.
"""

import numpy as np

from relsom.evaluation import relieff_weights, rfe_ensemble_rank, rfe_rank

rng = np.random.default_rng(8)
n = 60
y = np.arange(n) < n // 2
X = np.column_stack([
    np.where(y, 1.0, -1.0) + rng.standard_normal(n) * 0.3,  # signal
    rng.standard_normal(n),                                  # noise
    rng.standard_normal(n) * 2.0,                            # scaled noise
    np.where(y, 0.15, -0.15) + rng.standard_normal(n),       # weak signal
])

relieff = relieff_weights(X, y, k_neighbors=8)
print("ReliefF weights:", np.round(relieff.weights, 3), "(clamped:", relieff.k_clamped, ")")

ranking = rfe_rank(X, y, seed=0)
print("RFE ranking (best first):", list(ranking))

ensemble = rfe_ensemble_rank(X, y, seed=0, members=10)
print("ensemble ranking:", list(ensemble.ranking))
print("mean ranks:", np.round(ensemble.mean_ranks, 2))
print("member rankings:")
for j, member in enumerate(ensemble.member_rankings):
    print(f"  member {j}: {list(member)}")
