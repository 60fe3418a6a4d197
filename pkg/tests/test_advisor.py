import numpy as np
import pytest

from relsom.advisor import (
    combined_score,
    inter_group_distance,
    intra_group_distance,
    rank_measures,
    score_measure,
)
from relsom.errors import InsufficientLabelsError
from relsom.metric_space import NORM_PS, NormalizedSpace, SimilarityMeasure, build_spaces
from relsom.features import DescriptorId

from .conftest import labeled_store, make_matrix


def raw_space(ids, data, p, name="d"):
    """NormalizedSpace wrapper around raw vectors, bypassing normalization."""
    measure = SimilarityMeasure(DescriptorId.make(name), float(p))
    data = np.asarray(data, dtype=np.float64)
    return NormalizedSpace(measure, ids, data, np.zeros(data.shape[1]), 1.0, False)


def brute_lp(x, y, p):
    return float(np.sum(np.abs(np.asarray(x) - np.asarray(y)) ** p) ** (1.0 / p))


class TestInterGroupDistance:
    def test_analytic_centroids(self):
        space = raw_space(["a", "b", "c", "d"], [[0, 0], [2, 0], [4, 0], [6, 0]], 2.0)
        labels = labeled_store(["a", "b"], ["c", "d"])
        assert inter_group_distance(space, labels) == pytest.approx(4.0)

    def test_coincident_singletons(self):
        space = raw_space(["a", "b"], [[1, 1], [1, 1]], 2.0)
        labels = labeled_store(["a"], ["b"])
        assert inter_group_distance(space, labels) == 0.0

    def test_empty_side_names_the_side(self):
        space = raw_space(["a"], [[0.0]], 2.0)
        with pytest.raises(InsufficientLabelsError, match="irrelevant"):
            inter_group_distance(space, labeled_store(["a"], []))
        with pytest.raises(InsufficientLabelsError, match="relevant"):
            inter_group_distance(space, labeled_store([], ["a"]))

    def test_matches_bruteforce_centroid_oracle(self):
        rng = np.random.default_rng(0)
        ids = [f"i{j:02d}" for j in range(60)]
        X = rng.standard_normal((60, 5))
        space = raw_space(ids, X, 1.0)
        labels = labeled_store(ids[:30], ids[30:])
        # independent mean-then-distance computation
        pos = np.stack([X[ids.index(i)] for i in sorted(labels.relevant)])
        neg = np.stack([X[ids.index(i)] for i in sorted(labels.irrelevant)])
        expected = brute_lp(pos.mean(axis=0), neg.mean(axis=0), 1.0)
        assert inter_group_distance(space, labels) == pytest.approx(expected, abs=1e-12)


class TestIntraGroupDistance:
    def test_analytic_max_pair(self):
        space = raw_space(["a", "b", "c"], [[0, 0], [3, 4], [1, 0]], 2.0)
        assert intra_group_distance(space, {"a", "b", "c"}) == pytest.approx(5.0)

    def test_degenerate_sizes(self):
        space = raw_space(["a"], [[1.0, 1.0]], 2.0)
        assert intra_group_distance(space, {"a"}) == 0.0
        assert intra_group_distance(space, set()) == 0.0

    def test_matches_exhaustive_pair_oracle(self):
        rng = np.random.default_rng(1)
        ids = [f"i{j:02d}" for j in range(40)]
        X = rng.standard_normal((40, 4))
        space = raw_space(ids, X, 1.25)
        expected = max(
            brute_lp(X[i], X[j], 1.25) for i in range(40) for j in range(40) if i != j
        )
        assert intra_group_distance(space, set(ids)) == pytest.approx(expected, abs=1e-12)


class TestCombinedScore:
    def test_w_zero_default_is_inter_only(self):
        assert combined_score(4.0, 1.0, 1.0, 0.0) == 4.0

    def test_weighted(self):
        assert combined_score(4.0, 1.0, 1.0, 0.5) == 3.0

    def test_all_zero(self):
        assert combined_score(0.0, 0.0, 0.0, 0.7) == 0.0


class TestRankMeasures:
    def build_features(self, rng, n=40):
        ids = [f"i{j:02d}" for j in range(n)]
        half = n // 2
        # planted: block "signal" separates, block "noise" does not
        signal = np.concatenate([rng.standard_normal((half, 3)) - 4.0,
                                 rng.standard_normal((n - half, 3)) + 4.0])
        noise = rng.standard_normal((n, 3))
        feats = {}
        for name, data in (("signal", signal), ("noise", noise)):
            m = make_matrix(name, ids, data)
            feats[m.descriptor] = m
        labels = labeled_store(ids[:half], ids[half:])
        return ids, feats, labels

    def test_planted_block_ranks_first_and_order_is_strict(self):
        rng = np.random.default_rng(2)
        ids, feats, labels = self.build_features(rng)
        ranking = rank_measures(build_spaces(feats), labels)
        assert ranking.top.measure.descriptor.name == "signal"
        keys = [s.measure.key for s in ranking.scores]
        assert len(set(keys)) == len(keys) == 2 * len(NORM_PS)
        scores = [s.q_comb for s in ranking.scores]
        assert scores == sorted(scores, reverse=True)

    def test_exhaustive_score_check(self):
        rng = np.random.default_rng(3)
        ids, feats, labels = self.build_features(rng)
        spaces = build_spaces(feats)
        ranking = rank_measures(spaces, labels)
        best = max(spaces, key=lambda s: score_measure(s, labels).q_comb)
        assert ranking.top.measure == best.measure

    def test_all_degenerate_gives_tiebreak_order(self):
        ids = ["a", "b"]
        feats = {}
        for name in ("zzz", "aaa"):
            m = make_matrix(name, ids, [[1.0, 1.0], [1.0, 1.0]])
            feats[m.descriptor] = m
        labels = labeled_store(["a"], ["b"])
        ranking = rank_measures(build_spaces(feats), labels)
        assert all(s.degenerate and s.q_comb == 0.0 for s in ranking.scores)
        assert [s.measure.key for s in ranking.scores] == sorted(s.measure.key for s in ranking.scores)

    def test_scaling_and_translation_invariance_of_order(self):
        rng = np.random.default_rng(4)
        ids, feats, labels = self.build_features(rng)
        base_order = [s.measure.key for s in rank_measures(build_spaces(feats), labels).scores]

        scaled = {}
        for d, m in feats.items():
            shift = rng.standard_normal(m.dim) * 5.0
            scaled_m = make_matrix(d.name, ids, m.data * 1000.0 + shift)
            scaled[scaled_m.descriptor] = scaled_m
        scaled_order = [s.measure.key for s in rank_measures(build_spaces(scaled), labels).scores]
        assert scaled_order == base_order

    def test_q_inter_bounded_in_normalized_space(self):
        rng = np.random.default_rng(5)
        ids, feats, labels = self.build_features(rng)
        for score in rank_measures(build_spaces(feats), labels).scores:
            assert 0.0 <= score.q_inter <= 2.0

    def test_insufficient_labels_rejected(self):
        rng = np.random.default_rng(6)
        ids, feats, _ = self.build_features(rng)
        with pytest.raises(InsufficientLabelsError):
            rank_measures(build_spaces(feats), labeled_store(ids[:3], []))

    def test_luminance_planted_image_corpus(self, tmp_path):
        # class separation planted purely in mean luminance: a luminance
        # histogram measure must win the exhaustive score comparison
        from relsom.corpus import load_corpus
        from relsom.features import extract_all
        from relsom.synthetic import make_luminance_corpus

        manifest = make_luminance_corpus(str(tmp_path), per_class=15, seed=5)
        corpus, _ = load_corpus(manifest)
        spaces = build_spaces(extract_all(corpus, workers=2))
        rng = np.random.default_rng(0)
        labels = labeled_store(
            [i for i in rng.choice(corpus.ids, 16, replace=False) if i.startswith("bright")],
            [i for i in rng.choice(corpus.ids, 16, replace=False) if i.startswith("dark")],
        )
        ranking = rank_measures(spaces, labels)
        assert ranking.top.measure.descriptor.name == "luminance-histogram"
        best = max(spaces, key=lambda s: score_measure(s, labels).q_comb)
        assert ranking.top.measure == best.measure

    def test_duplicate_label_shifts_centroid_boundedly(self):
        # re-labeling an already-labeled item is a no-op on the score
        rng = np.random.default_rng(7)
        ids, feats, labels = self.build_features(rng)
        spaces = build_spaces(feats)
        before = [s.q_comb for s in rank_measures(spaces, labels).scores]
        labels.assign(sorted(labels.relevant)[0], "relevant")
        after = [s.q_comb for s in rank_measures(spaces, labels).scores]
        assert before == after
