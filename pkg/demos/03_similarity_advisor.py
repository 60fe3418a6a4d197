"""Rank all (descriptor, norm) measures by labeled-group separation.

The corpus plants its class signal purely in the color distribution, with
matching grayscale statistics, so color-histogram measures should top the
ranking while grayscale texture and layout measures trail.
"""

import tempfile

import numpy as np

from relsom import LabelStore, build_spaces, load_corpus, rank_measures
from relsom.features import extract_all
from relsom.synthetic import make_color_corpus

workdir = tempfile.mkdtemp()
manifest = make_color_corpus(workdir, per_class=20, seed=5)
corpus, _ = load_corpus(manifest)
features = extract_all(corpus, workers=2)
spaces = build_spaces(features)
print(f"{len(spaces)} measures over {len(corpus)} images")

rng = np.random.default_rng(0)
labels = LabelStore()
for item_id in rng.choice(corpus.ids, size=16, replace=False):
    labels.assign(item_id, "relevant" if item_id.startswith("warm") else "irrelevant")

ranking = rank_measures(spaces, labels)
print(f"\nactive metric: {ranking.active_metric}\n")
print(f"{'rank':>4}  {'measure':<34} {'score':>7}  bar")
for rank, score in enumerate(ranking.scores[:12]):
    bar = "#" * int(round(score.q_comb / ranking.top.q_comb * 30))
    print(f"{rank:>4}  {str(score.measure):<34} {score.q_comb:7.4f}  {bar}")
print("  ...")
worst = ranking.scores[-1]
print(f"{len(ranking.scores) - 1:>4}  {str(worst.measure):<34} {worst.q_comb:7.4f}")
