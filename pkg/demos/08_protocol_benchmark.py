"""A reduced advisor-vs-baselines benchmark with the formatted table.

The full protocol (5 targets x 5 budgets x 3 k values against the best of
60 selection combinations) runs via `relsom evaluate`; this demo keeps two
targets and two budgets so it finishes in under a minute.
"""

import os
import tempfile
import time

from relsom import load_corpus
from relsom.evaluation import run_protocol
from relsom.synthetic import make_benchmark_corpus

workdir = tempfile.mkdtemp()
manifest = os.path.join(workdir, "manifest.csv")
make_benchmark_corpus(manifest, per_class=80, seed=0)
corpus, features = load_corpus(manifest)

t0 = time.time()
report = run_protocol(
    corpus, features,
    targets=["class-0", "class-2"],  # sparse-signal vs wide-signal target
    budgets=(25, 50),
    master_seed=0,
    jobs=2,
)
print(report.format_table())
print(f"\ncompleted in {time.time() - t0:.1f}s")

csv_path = os.path.join(workdir, "report.csv")
report.write_csv(csv_path)
print(f"CSV written to {csv_path}")
