import numpy as np
import pytest

from relsom.errors import InsufficientLabelsError, UnclassifiableError
from relsom.labels import IRRELEVANT, RELEVANT, LabelStore
from relsom.metric_space import build_normalized_space, lp_distance
from relsom.som import (
    SomHyperparams,
    SomTree,
    build_tree,
    classify,
    classify_all,
    label_ratio,
    mix_ratio,
    node_layers,
    query_candidates,
    train_som,
)

from .conftest import labeled_store, make_matrix


def blob_space(rng, n_per=20, sep=8.0, p=2.0, dim=2):
    """Two well-separated Gaussian blobs; ids a* are one blob, b* the other."""
    ids = [f"a{j:03d}" for j in range(n_per)] + [f"b{j:03d}" for j in range(n_per)]
    X = np.concatenate([
        rng.standard_normal((n_per, dim)) - sep / 2,
        rng.standard_normal((n_per, dim)) + sep / 2,
    ])
    matrix = make_matrix("blob", ids, X)
    return build_normalized_space(matrix, p)


def oracle_classify(tree, space, labels, item_id):
    """Independent recursive implementation of the stated descent rule."""
    node = tree.nodes[tree.root_id]
    x = space.vector(item_id)
    while True:
        cells = node.grid.cells
        d = [lp_distance(x, node.grid.prototypes[c], space.p) for c in range(cells)]
        bmu = min(range(cells), key=lambda c: (d[c], c))
        if bmu in node.children:
            node = tree.nodes[node.children[bmu]]
            continue

        def counts(cell):
            members = [i for i, cc in node.grid.cell_assignments.items() if cc == cell]
            pos = sum(1 for i in members if labels.label_of(i) == RELEVANT)
            neg = sum(1 for i in members if labels.label_of(i) == IRRELEVANT)
            return pos, neg

        pos, neg = counts(bmu)
        if pos + neg == 0:
            for c in sorted(range(cells), key=lambda c: (d[c], c)):
                pos, neg = counts(c)
                if pos + neg > 0:
                    break
            else:
                raise UnclassifiableError("oracle: no labels anywhere")
        if pos + neg == 0:
            raise UnclassifiableError("oracle: no labels anywhere")
        return RELEVANT if pos > neg else IRRELEVANT


class TestTrainSom:
    def test_single_item_converges(self):
        rng = np.random.default_rng(0)
        space = blob_space(rng, n_per=1)
        params = SomHyperparams(epochs=30, seed=1)
        grid = train_som(["a000"], space, params, seed=1)
        assert grid.cell_assignments == {"a000": int(
            np.argmin(((grid.prototypes - space.vector("a000")) ** 2).sum(axis=1))
        )}
        target = space.vector("a000")
        best = min(np.abs(grid.prototypes - target).sum(axis=1))
        assert best < 0.05

    def test_input_equal_to_prototype_is_its_bmu(self):
        rng = np.random.default_rng(1)
        space = blob_space(rng)
        grid = train_som(space.ids, space, SomHyperparams(), seed=2)
        for cell in range(grid.cells):
            x = grid.prototypes[cell]
            d = ((np.abs(grid.prototypes - x)) ** 2).sum(axis=1)
            assert int(d.argmin()) == cell

    def test_blobs_never_mix_and_bmu_oracle(self):
        rng = np.random.default_rng(2)
        space = blob_space(rng)
        grid = train_som(space.ids, space, SomHyperparams(), seed=3)
        # brute-force nearest-prototype assignment
        for item_id, cell in grid.cell_assignments.items():
            d = [lp_distance(space.vector(item_id), grid.prototypes[c], 2.0) for c in range(9)]
            assert min(range(9), key=lambda c: (d[c], c)) == cell
        for cell in range(grid.cells):
            members = grid.members(cell)
            kinds = {i[0] for i in members}
            assert len(kinds) <= 1, f"cell {cell} mixes blobs: {members}"

    def test_empty_item_set_rejected(self):
        rng = np.random.default_rng(3)
        space = blob_space(rng)
        with pytest.raises(ValueError):
            train_som([], space, SomHyperparams(), seed=0)

    def test_bitwise_determinism(self):
        rng = np.random.default_rng(4)
        space = blob_space(rng)
        a = train_som(space.ids, space, SomHyperparams(), seed=7)
        b = train_som(space.ids, space, SomHyperparams(), seed=7)
        assert np.array_equal(a.prototypes, b.prototypes)
        assert a.cell_assignments == b.cell_assignments


class TestRatios:
    def test_mix_ratio_formula(self):
        assert mix_ratio(3, 1) == 0.25
        assert mix_ratio(5, 0) == 0.0
        assert mix_ratio(0, 0) == 0.0
        assert mix_ratio(2, 2) == 0.5

    def test_label_ratio_formula(self):
        assert label_ratio(1, 1, 10) == pytest.approx(0.2)
        assert label_ratio(5, 5, 10) == 1.0
        assert label_ratio(0, 0, 0) == 0.0

    def test_mix_ratio_never_exceeds_half(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            pos, neg = rng.integers(0, 30, size=2)
            assert 0.0 <= mix_ratio(int(pos), int(neg)) <= 0.5


def full_labels(space, fraction=1.0, seed=0):
    rng = np.random.default_rng(seed)
    store = LabelStore()
    for item_id in space.ids:
        if rng.random() <= fraction:
            store.assign(item_id, RELEVANT if item_id.startswith("a") else IRRELEVANT)
    return store


class TestBuildTree:
    def test_pure_cells_no_children(self):
        rng = np.random.default_rng(5)
        space = blob_space(rng)
        labels = full_labels(space)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=1))
        assert list(tree.nodes) == ["root"]

    def test_mt_half_never_splits(self):
        rng = np.random.default_rng(6)
        # overlapping blobs force mixed cells, but m_t = 0.5 is unreachable
        space = blob_space(rng, sep=0.5)
        labels = full_labels(space)
        tree = build_tree(space.ids, space, labels, SomHyperparams(m_t=0.5, seed=2))
        assert list(tree.nodes) == ["root"]

    def test_split_set_matches_bruteforce_criterion(self):
        rng = np.random.default_rng(7)
        space = blob_space(rng, n_per=60, sep=0.8)
        labels = full_labels(space, fraction=0.8, seed=1)
        params = SomHyperparams(m_t=0.2, c_t=18, max_depth=2, seed=3)
        tree = build_tree(space.ids, space, labels, params)
        for node in tree.nodes.values():
            for cell in range(node.grid.cells):
                st = node.stats[cell]
                should_split = (
                    st.mix_ratio > params.m_t
                    and st.n_items > params.c_t
                    and node.depth < params.max_depth
                )
                assert (cell in node.children) == should_split, (node.node_id, cell)

    def test_child_trained_on_exactly_the_cell_items(self):
        rng = np.random.default_rng(8)
        space = blob_space(rng, n_per=60, sep=0.8)
        labels = full_labels(space, fraction=0.8, seed=2)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=4, c_t=12))
        for node in tree.nodes.values():
            for cell, child_id in node.children.items():
                child = tree.nodes[child_id]
                assert sorted(child.grid.cell_assignments) == node.grid.members(cell)

    def test_every_item_reaches_exactly_one_leaf(self):
        rng = np.random.default_rng(9)
        space = blob_space(rng, n_per=50, sep=1.0)
        labels = full_labels(space, fraction=0.7, seed=3)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=5, c_t=10))
        leaf_members = []
        for node in tree.nodes.values():
            for cell in range(node.grid.cells):
                if cell not in node.children:
                    leaf_members.extend(node.grid.members(cell))
        assert sorted(leaf_members) == sorted(space.ids)

    def test_insufficient_labels_rejected(self):
        rng = np.random.default_rng(10)
        space = blob_space(rng)
        with pytest.raises(InsufficientLabelsError):
            build_tree(space.ids, space, labeled_store(["a000"], []), SomHyperparams())

    def test_bitwise_determinism_and_serialization_roundtrip(self):
        rng = np.random.default_rng(11)
        space = blob_space(rng, n_per=40, sep=1.0)
        labels = full_labels(space, fraction=0.9, seed=4)
        params = SomHyperparams(seed=6, c_t=10)
        t1 = build_tree(space.ids, space, labels, params)
        t2 = build_tree(space.ids, space, labels, params)
        assert set(t1.nodes) == set(t2.nodes)
        for node_id in t1.nodes:
            assert np.array_equal(t1.nodes[node_id].grid.prototypes, t2.nodes[node_id].grid.prototypes)
            assert t1.nodes[node_id].grid.cell_assignments == t2.nodes[node_id].grid.cell_assignments
        # JSON roundtrip preserves classification behavior exactly
        restored = SomTree.from_json(t1.to_json())
        got = classify_all(restored, space, labels)
        want = classify_all(t1, space, labels)
        assert got == want


class TestClassify:
    def test_pure_relevant_leaf(self):
        rng = np.random.default_rng(12)
        space = blob_space(rng)
        labels = full_labels(space)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=7))
        for item_id in space.ids:
            expected = RELEVANT if item_id.startswith("a") else IRRELEVANT
            assert classify(item_id, tree, space, labels) == expected

    def test_unlabeled_cell_falls_back_to_nearest_labeled(self):
        rng = np.random.default_rng(13)
        space = blob_space(rng)
        # label only blob b; blob a cells have no labels and must defer
        labels = labeled_store([], [i for i in space.ids if i.startswith("b")])
        labels.assign("a000", RELEVANT)  # satisfy both-sides precondition
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=8))
        for item_id in space.ids:
            got = classify(item_id, tree, space, labels)
            assert got == oracle_classify(tree, space, labels, item_id)

    def test_majority_tie_is_irrelevant(self):
        rng = np.random.default_rng(14)
        space = blob_space(rng, n_per=10, sep=0.1)
        # balanced labels everywhere: ties must resolve irrelevant
        labels = full_labels(space)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=9, m_t=0.6))
        counts = {}
        for item_id, cell in tree.root.grid.cell_assignments.items():
            pos, neg = counts.get(cell, (0, 0))
            if labels.label_of(item_id) == RELEVANT:
                counts[cell] = (pos + 1, neg)
            else:
                counts[cell] = (pos, neg + 1)
        tied = [c for c, (pos, neg) in counts.items() if pos == neg > 0]
        if tied:
            for item_id, cell in tree.root.grid.cell_assignments.items():
                if cell in tied:
                    assert classify(item_id, tree, space, labels) == IRRELEVANT

    def test_agrees_with_bruteforce_oracle_100_items(self):
        rng = np.random.default_rng(15)
        space = blob_space(rng, n_per=50, sep=1.2)
        labels = full_labels(space, fraction=0.5, seed=5)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=10, c_t=10))
        result = classify_all(tree, space, labels)
        for item_id in space.ids:
            assert result[item_id] == oracle_classify(tree, space, labels, item_id)

    def test_two_blob_accuracy_with_sparse_labels(self):
        rng = np.random.default_rng(16)
        space = blob_space(rng, n_per=50, sep=8.0)
        labels = full_labels(space, fraction=0.2, seed=6)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=11))
        result = classify_all(tree, space, labels)
        correct = sum(
            1 for i in space.ids
            if result[i] == (RELEVANT if i.startswith("a") else IRRELEVANT)
        )
        assert correct / len(space.ids) >= 0.95

    def test_unclassifiable_without_labels(self):
        rng = np.random.default_rng(17)
        space = blob_space(rng)
        labels = full_labels(space)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=12))
        with pytest.raises(UnclassifiableError):
            classify("a000", tree, space, LabelStore())


class TestQueryCandidates:
    def test_fully_labeled_empty_query(self):
        rng = np.random.default_rng(18)
        space = blob_space(rng)
        labels = full_labels(space)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=13))
        assert query_candidates(tree, space, labels) == []

    def test_marked_cell_returns_prototype_nearest(self):
        rng = np.random.default_rng(19)
        space = blob_space(rng, n_per=20)
        labels = full_labels(space, fraction=0.15, seed=7)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=14))
        got = query_candidates(tree, space, labels, budget=3)
        assert len(got) == 3
        assert all(labels.label_of(i) == "neutral" for i in got)

    def test_matches_exhaustive_oracle(self):
        # independent oracle over many random trees and label patterns
        for trial in range(20):
            rng = np.random.default_rng(100 + trial)
            space = blob_space(rng, n_per=30, sep=float(rng.uniform(0.5, 4.0)))
            labels = full_labels(space, fraction=float(rng.uniform(0.05, 0.6)), seed=trial)
            params = SomHyperparams(seed=trial, c_t=int(rng.integers(8, 20)))
            tree = build_tree(space.ids, space, labels, params)
            budget = int(rng.integers(1, 15))
            got = query_candidates(tree, space, labels, budget=budget)

            q_t = params.q_t
            cells = []
            for node in tree.nodes.values():
                for cell in range(node.grid.cells):
                    if cell in node.children:
                        continue
                    members = node.grid.members(cell)
                    pos = sum(1 for i in members if labels.label_of(i) == RELEVANT)
                    neg = sum(1 for i in members if labels.label_of(i) == IRRELEVANT)
                    ratio = (pos + neg) / len(members) if members else 0.0
                    if ratio < q_t:
                        neutral = [i for i in members if labels.label_of(i) == "neutral"]
                        if neutral:
                            neutral.sort(key=lambda i: (
                                lp_distance(space.vector(i), node.grid.prototypes[cell], space.p), i
                            ))
                            cells.append((ratio, -len(members), node.path + (cell,), neutral))
            cells.sort(key=lambda entry: (entry[0], entry[1], entry[2]))
            queues = [list(entry[3]) for entry in cells]
            expected = []
            while len(expected) < budget and any(queues):
                for q in queues:
                    if q and len(expected) < budget:
                        expected.append(q.pop(0))
            assert got == expected, f"trial {trial}"

    def test_only_neutral_items_returned(self):
        rng = np.random.default_rng(20)
        space = blob_space(rng, n_per=25)
        labels = full_labels(space, fraction=0.3, seed=8)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=15))
        for item_id in query_candidates(tree, space, labels, budget=50):
            assert labels.label_of(item_id) == "neutral"


class TestNodeLayers:
    def test_empty_cell_qe_zero(self):
        rng = np.random.default_rng(21)
        space = blob_space(rng, n_per=2)
        labels = full_labels(space)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=16))
        layers = node_layers(tree.root, tree.p, tree.hyperparams.q_t)
        for cell in range(tree.root.grid.cells):
            if not tree.root.grid.members(cell):
                assert layers.quantization_error[cell] == 0.0

    def test_identical_prototypes_flat_umatrix(self):
        rng = np.random.default_rng(22)
        space = blob_space(rng)
        labels = full_labels(space)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=17))
        node = tree.root
        node.grid.prototypes[:] = 1.0
        layers = node_layers(node, tree.p, tree.hyperparams.q_t)
        assert all(v == 0.0 for v in layers.u_matrix)

    def test_umatrix_matches_neighbor_oracle(self):
        rng = np.random.default_rng(23)
        space = blob_space(rng)
        labels = full_labels(space)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=18))
        node = tree.root
        node.grid.prototypes[:] = rng.standard_normal(node.grid.prototypes.shape)
        layers = node_layers(node, tree.p, tree.hyperparams.q_t)
        width, height = node.grid.width, node.grid.height
        for cell in range(node.grid.cells):
            r, c = divmod(cell, width)
            dists = []
            for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if 0 <= rr < height and 0 <= cc < width:
                    dists.append(lp_distance(
                        node.grid.prototypes[cell], node.grid.prototypes[rr * width + cc], space.p
                    ))
            assert layers.u_matrix[cell] == pytest.approx(float(np.mean(dists)), abs=1e-12)

    def test_label_quality_encoding(self):
        rng = np.random.default_rng(24)
        space = blob_space(rng)
        labels = full_labels(space)
        tree = build_tree(space.ids, space, labels, SomHyperparams(seed=19))
        layers = node_layers(tree.root, tree.p, tree.hyperparams.q_t)
        for cell, st in enumerate(tree.root.stats):
            q = layers.label_quality[cell]
            if st.n_pos + st.n_neg == 0:
                assert q is None
            elif st.n_pos > st.n_neg:
                assert q == pytest.approx(1.0 - st.mix_ratio)
            elif st.n_neg > st.n_pos:
                assert q == pytest.approx(st.mix_ratio)
            else:
                assert q == 0.5
            assert layers.insufficient[cell] == (st.label_ratio < tree.hyperparams.q_t)
