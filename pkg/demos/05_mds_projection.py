"""Project a normalized space to 2-D and inspect embedding quality.

The first example is exactly embeddable (a 3-4-5 right triangle), the
second is a higher-dimensional cloud under a fractional norm where only an
approximation exists; the stress history shows the SMACOF refinement
converging monotonically.
"""

import numpy as np

from relsom import LabelStore, build_normalized_space, mds_embed, overlay
from relsom.features import DescriptorId, FeatureMatrix

triangle = FeatureMatrix(
    DescriptorId.make("triangle", dim=2),
    ["a", "b", "c"],
    np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]),
)
space = build_normalized_space(triangle, 2.0)
emb = mds_embed(space, space.ids, seed=0)
print("3-4-5 triangle, recovered pairwise distances (raw scale):")
for i, j in (("a", "b"), ("a", "c"), ("b", "c")):
    xi, yi = emb.coords[i]
    xj, yj = emb.coords[j]
    print(f"  d({i},{j}) = {np.hypot(xi - xj, yi - yj) * space.s:.6f}")
print(f"  stress: {emb.stress:.2e}")

rng = np.random.default_rng(1)
ids = [f"p{j:02d}" for j in range(40)]
cloud = FeatureMatrix(DescriptorId.make("cloud", dim=6), ids, rng.standard_normal((40, 6)))
space6 = build_normalized_space(cloud, 1.25)
emb6 = mds_embed(space6, ids, seed=1)
print(f"\n40-point 6-D cloud under L1.25: final stress {emb6.stress:.4f}")
hist = emb6.stress_history
print("stress history (every 10th step):", [f"{s:.4f}" for s in hist[::10]])
print("monotone non-increasing:", all(b <= a + 1e-12 for a, b in zip(hist, hist[1:])))

labels = LabelStore()
labels.assign("p00", "relevant")
labels.assign("p01", "irrelevant")
annotated = overlay(emb6, labels, {"p00": "relevant"})
print("\noverlay sample:", annotated["points"][0])
