"""Load a corpus from a manifest and draw first-iteration samples.

Builds a small inline-vector corpus, then shows what each representative
sampling strategy picks from the same feature matrix and seed.
"""

import os
import tempfile

import numpy as np

from relsom import SamplingStrategy, draw_sample, load_corpus
from relsom.corpus import vector_cell, write_manifest

rng = np.random.default_rng(0)

# a 1-D corpus with one obvious outlier at each end
values = np.concatenate([[-25.0], rng.standard_normal(28), [25.0]])
rows = [(f"item{j:02d}", vector_cell([[v]]), None) for j, v in enumerate(values)]

workdir = tempfile.mkdtemp()
manifest = os.path.join(workdir, "manifest.csv")
write_manifest(manifest, rows)

corpus, identity = load_corpus(manifest)
matrix = next(iter(identity.values()))
print(f"corpus: {len(corpus)} items, kind={corpus.kind}")
print(f"identity descriptor: {matrix.descriptor.name}, dim={matrix.dim}")

for variant in (
    "minimum-maximum",
    "quantile",
    "normal-bootstrap",
    "stratified-normal-bootstrap",
    "normal-subsample",
    "stratified-subsample",
):
    sample = draw_sample(corpus, matrix, SamplingStrategy(variant, sample_size=6, seed=7))
    picked = [f"{i}({float(matrix.vector(i)[0]):+.1f})" for i in sample]
    print(f"{variant:28s} -> {', '.join(picked)}")

print("\nminimum-maximum always contains the argmin/argmax of dimension 0:")
sample = draw_sample(corpus, matrix, SamplingStrategy("minimum-maximum", 2, 0))
print(" ", sample)
