"""Run the whole iterative loop headlessly with a ground-truth oracle.

Each iteration: label the queried items, re-rank all similarity measures,
retrain the SOM tree with the winning measure, and pose the next query.
On a corpus whose signal lives in one feature block, the selection should
converge to that block.
"""

import os
import tempfile

from relsom import load_corpus, simulate
from relsom.session import SessionConfig
from relsom.synthetic import make_benchmark_corpus

workdir = tempfile.mkdtemp()
manifest = os.path.join(workdir, "manifest.csv")
make_benchmark_corpus(manifest, per_class=60, seed=2)
corpus, features = load_corpus(manifest)

target = "class-3"  # signal planted across one wide block
oracle = {i: gt == target for i, gt in corpus.ground_truth_map().items()}

config = SessionConfig(master_seed=11, sample_size=30, query_budget=15)
session, trace = simulate(corpus, features, oracle, iterations=6, config=config)

print(f"target {target} over {len(corpus)} items\n")
for record in trace:
    print(
        f"iteration {record['iteration']}: selected {record['descriptor']} "
        f"(p={record['p']:g}) with {record['relevant']}+ / {record['irrelevant']}- labels; "
        f"next query {len(record['query'])} items"
    )

status = session.status()
print(f"\nfinal model: {status['descriptor']} (p={status['p']:g}), "
      f"{status['relevant']}+/{status['irrelevant']}- labels, "
      f"{status['neutral']} still neutral")
tree = session.tree
print(f"tree nodes: {sorted(tree.nodes)}")
