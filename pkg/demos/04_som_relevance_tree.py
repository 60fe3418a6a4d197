"""Train the hierarchical SOM classifier and walk its structure.

Two overlapping blobs force mixed cells at the root, which recursively
split into child SOMs. Prints per-cell statistics, the uncertainty layers,
and the resulting active-learning query.
"""

import numpy as np

from relsom import (
    LabelStore,
    SomHyperparams,
    build_normalized_space,
    build_tree,
    classify_all,
    node_layers,
    query_candidates,
)
from relsom.features import DescriptorId, FeatureMatrix

rng = np.random.default_rng(4)
n_per = 80
ids = [f"a{j:03d}" for j in range(n_per)] + [f"b{j:03d}" for j in range(n_per)]
X = np.concatenate([
    rng.standard_normal((n_per, 2)) - 0.8,
    rng.standard_normal((n_per, 2)) + 0.8,
])
matrix = FeatureMatrix(DescriptorId.make("toy", dim=2), ids, X)
space = build_normalized_space(matrix, 2.0)

labels = LabelStore()
for item_id in ids[::2]:  # label half the corpus
    labels.assign(item_id, "relevant" if item_id.startswith("a") else "irrelevant")

params = SomHyperparams(seed=3, c_t=12, m_t=0.2)
tree = build_tree(ids, space, labels, params)

print(f"tree has {len(tree.nodes)} nodes")
for node_id in sorted(tree.nodes):
    node = tree.nodes[node_id]
    print(f"\nnode {node_id} (depth {node.depth}, children at cells {sorted(node.children)})")
    layers = node_layers(node, tree.p, params.q_t)
    for cell, st in enumerate(node.stats):
        quality = layers.label_quality[cell]
        flag = " [needs labels]" if layers.insufficient[cell] else ""
        print(
            f"  cell {cell}: {st.n_items:3d} items, {st.n_pos}+/{st.n_neg}-, "
            f"mix={st.mix_ratio:.2f} labelratio={st.label_ratio:.2f} "
            f"qe={st.mean_qe:.3f} quality={'--' if quality is None else f'{quality:.2f}'}{flag}"
        )

result = classify_all(tree, space, labels)
truth = {i: "relevant" if i.startswith("a") else "irrelevant" for i in ids}
acc = sum(1 for i in ids if result[i] == truth[i]) / len(ids)
print(f"\ntraining-set accuracy: {acc:.3f}")

query = query_candidates(tree, space, labels, budget=8)
print(f"next items to label: {query}")
