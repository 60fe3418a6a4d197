"""Headless benchmark: k-NN F1 protocol against feature-selection baselines.

For each analysis target and label budget, the baseline arm performs feature
selection (ReliefF, recursive elimination with a linear max-margin ranker,
and a 10-member bootstrap ranking ensemble) on the concatenation of all
descriptors, takes the best F1 over every (algorithm, subset size, norm)
combination, and competes against the F1 of the single top-ranked measure.
Both arms share the same seeded label draw and 50/50 train/test split.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .advisor import rank_measures
from .labels import IRRELEVANT, RELEVANT, LabelStore
from .metric_space import NORM_PS, build_spaces, pairwise_distances, validate_p
from .seeding import derive_seed

DEFAULT_BUDGETS = (25, 50, 75, 100, 125)
DEFAULT_KS = (1, 3, 5)
DEFAULT_SUBSET_SIZES = (5, 10, 15, 20)
ALGORITHMS = ("relieff", "rfe-linear", "rfe-ensemble")

SGD_EPOCHS = 200
SGD_ETA0 = 0.5
SGD_ETA_DECAY = 0.01
SGD_LAMBDA = 1e-3


# ---------------------------------------------------------------------------
# k-NN with F1 scoring


def knn_f1(source, relevance, train_ids, test_ids, k: int = 3, p: float = 2.0) -> float:
    """Majority-vote k-NN F1 with the relevant class as positive.

    Neighbor distance ties break toward the lexicographically lower train
    id. F1 is 0 when precision + recall is 0.
    """
    validate_p(p)
    train_ids = sorted(train_ids)
    test_ids = sorted(test_ids)
    if set(train_ids) & set(test_ids):
        raise ValueError("train and test ids overlap")
    y_train = np.array([bool(relevance[i]) for i in train_ids])
    if y_train.all() or not y_train.any():
        raise ValueError("training set must contain both classes")
    X_train = np.stack([source.vector(i) for i in train_ids])
    X_test = np.stack([source.vector(i) for i in test_ids])
    D = pairwise_distances(X_test, X_train, p)

    # train_ids are sorted, so the positional index doubles as the id tie-break
    order = np.lexsort((np.tile(np.arange(len(train_ids)), (len(test_ids), 1)), D), axis=1)
    votes = y_train[order[:, :k]].sum(axis=1)
    predicted = votes * 2 > k

    actual = np.array([bool(relevance[i]) for i in test_ids])
    tp = int((predicted & actual).sum())
    fp = int((predicted & ~actual).sum())
    fn = int((~predicted & actual).sum())
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2.0 * precision * recall / (precision + recall)


# ---------------------------------------------------------------------------
# ReliefF


@dataclass(frozen=True)
class ReliefFResult:
    weights: np.ndarray
    k_clamped: bool


def relieff_weights(X: np.ndarray, y, k_neighbors: int = 10, seed: int = 0) -> ReliefFResult:
    """Binary ReliefF over min-max scaled features.

    Every labeled instance serves as a sample; per instance the k nearest
    hits and misses (L1 distance on the scaled features, ties by row index)
    decrease and increase the per-dimension weights respectively. A class
    smaller than k+1 clamps k and sets the warning flag.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=bool)
    m, d = X.shape
    if y.all() or not y.any():
        raise ValueError("ReliefF needs both classes")

    lo, hi = X.min(axis=0), X.max(axis=0)
    span = hi - lo
    span[span == 0.0] = 1.0  # constant dims scale to zero diff, weight stays 0
    S = (X - lo) / span

    clamped = False
    weights = np.zeros(d)
    D = np.abs(S[:, None, :] - S[None, :, :]).sum(axis=2)
    for i in range(m):
        same = np.nonzero((y == y[i]) & (np.arange(m) != i))[0]
        other = np.nonzero(y != y[i])[0]
        k_hit = min(k_neighbors, len(same))
        k_miss = min(k_neighbors, len(other))
        if k_hit < k_neighbors or k_miss < k_neighbors:
            clamped = True
        contrib = np.zeros(d)
        if k_hit > 0:
            hits = same[np.lexsort((same, D[i, same]))][:k_hit]
            contrib -= np.abs(S[hits] - S[i]).mean(axis=0)
        if k_miss > 0:
            misses = other[np.lexsort((other, D[i, other]))][:k_miss]
            contrib += np.abs(S[misses] - S[i]).mean(axis=0)
        weights += contrib
    return ReliefFResult(weights / m, clamped)


# ---------------------------------------------------------------------------
# linear max-margin ranking via stochastic subgradient descent


def _sgd_hinge_core(X, y, order, eta0, decay, lam):
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    t = 0
    for s in range(order.shape[0]):
        i = order[s]
        t += 1
        eta = eta0 / (1.0 + decay * t)
        dot = b
        for j in range(d):
            dot += w[j] * X[i, j]
        shrink = 1.0 - eta * lam
        if y[i] * dot < 1.0:
            coef = eta * y[i]
            for j in range(d):
                w[j] = w[j] * shrink + coef * X[i, j]
            b += coef
        else:
            for j in range(d):
                w[j] = w[j] * shrink
    return w, b


try:  # the JIT only accelerates; results are identical to the plain loop
    from numba import njit

    _sgd_hinge = njit(cache=True, nogil=True)(_sgd_hinge_core)
except ImportError:  # pragma: no cover
    _sgd_hinge = _sgd_hinge_core


def train_linear_classifier(X: np.ndarray, y, seed: int):
    """Hinge-loss linear classifier, fixed 200-epoch seeded SGD schedule."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y_pm = np.where(np.asarray(y, dtype=bool), 1.0, -1.0)
    n = X.shape[0]
    rng = np.random.default_rng(seed)
    order = np.concatenate([rng.permutation(n) for _ in range(SGD_EPOCHS)]).astype(np.int64)
    return _sgd_hinge(X, y_pm, order, SGD_ETA0, SGD_ETA_DECAY, SGD_LAMBDA)


def rfe_rank(X: np.ndarray, y, seed: int) -> np.ndarray:
    """Recursive elimination ranking: repeatedly drop the surviving dimension
    with the smallest |weight| (ties drop the higher index, so lower indices
    survive longer). Returns dimension indices, most important first.
    """
    X = np.asarray(X, dtype=np.float64)
    d = X.shape[1]
    alive = list(range(d))
    removed = []
    round_no = 0
    while len(alive) > 1:
        w, _ = train_linear_classifier(X[:, alive], y, derive_seed(seed, "round", round_no))
        magnitude = np.abs(w)
        worst = magnitude.min()
        candidates = [j for j in range(len(alive)) if magnitude[j] == worst]
        drop = max(candidates)
        removed.append(alive.pop(drop))
        round_no += 1
    return np.array(alive + removed[::-1], dtype=np.int64)


@dataclass(frozen=True)
class RfeEnsembleResult:
    ranking: np.ndarray
    member_rankings: tuple  # one full ranking per bootstrap member
    mean_ranks: np.ndarray


def rfe_ensemble_rank(X: np.ndarray, y, seed: int, members: int = 10) -> RfeEnsembleResult:
    """Ranking ensemble of bootstrap RFE runs aggregated by mean rank."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=bool)
    n, d = X.shape
    member_rankings = []
    for j in range(members):
        rng = np.random.default_rng(derive_seed(seed, "bootstrap", j))
        while True:  # redraw until the bootstrap sample holds both classes
            idx = rng.integers(0, n, size=n)
            yb = y[idx]
            if yb.any() and not yb.all():
                break
        ranking = rfe_rank(X[idx], yb, derive_seed(seed, "member", j))
        member_rankings.append(ranking)
    positions = np.zeros((members, d))
    for j, ranking in enumerate(member_rankings):
        positions[j, ranking] = np.arange(d)
    mean_ranks = positions.mean(axis=0)
    final = np.lexsort((np.arange(d), mean_ranks)).astype(np.int64)
    return RfeEnsembleResult(final, tuple(member_rankings), mean_ranks)


def select_dimensions(algorithm: str, X: np.ndarray, y, seed: int,
                      relieff_k: int = 10) -> np.ndarray:
    """Full dimension ranking for one baseline algorithm."""
    if algorithm == "relieff":
        weights = relieff_weights(X, y, k_neighbors=relieff_k, seed=seed).weights
        return np.lexsort((np.arange(len(weights)), -weights)).astype(np.int64)
    if algorithm == "rfe-linear":
        return rfe_rank(X, y, seed)
    if algorithm == "rfe-ensemble":
        return rfe_ensemble_rank(X, y, seed).ranking
    raise ValueError(f"unknown selection algorithm {algorithm!r}")


# ---------------------------------------------------------------------------
# the protocol


class _ArrayView:
    """vector(id) view over a plain ndarray with an id index."""

    def __init__(self, ids, data):
        self._index = {i: r for r, i in enumerate(ids)}
        self._data = data

    def vector(self, item_id):
        return self._data[self._index[item_id]]


def concat_features(features) -> tuple:
    """Concatenated per-descriptor matrices, min-max scaled per dimension.

    Descriptors are stacked in name order; returns (ids, matrix).
    """
    descriptors = sorted(features, key=lambda d: d.name)
    ids = features[descriptors[0]].ids
    blocks = []
    for d in descriptors:
        if features[d].ids != ids:
            raise ValueError("feature matrices cover different item sets")
        blocks.append(features[d].data)
    X = np.concatenate(blocks, axis=1)
    lo, hi = X.min(axis=0), X.max(axis=0)
    span = hi - lo
    span[span == 0.0] = 1.0
    return ids, (X - lo) / span


@dataclass(frozen=True)
class ProtocolCell:
    target: str
    budget: int
    k: int
    baseline_f1: float
    advisor_f1: float
    advisor_descriptor: str
    advisor_p: float
    baseline_algorithm: str
    baseline_subset: int
    baseline_p: float
    outcome: str  # "win" | "loss" | "tie" from the advisor's perspective

    @property
    def win(self) -> bool:
        return self.outcome == "win"


@dataclass(frozen=True)
class ProtocolReport:
    cells: tuple
    targets: tuple
    budgets: tuple
    ks: tuple

    @property
    def wins(self) -> int:
        return sum(1 for c in self.cells if c.outcome == "win")

    @property
    def losses(self) -> int:
        return sum(1 for c in self.cells if c.outcome == "loss")

    @property
    def ties(self) -> int:
        return sum(1 for c in self.cells if c.outcome == "tie")

    def cell(self, target, budget, k) -> ProtocolCell:
        for c in self.cells:
            if (c.target, c.budget, c.k) == (target, budget, k):
                return c
        raise KeyError((target, budget, k))

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([
                "target", "labels_per_side", "k", "baseline_f1", "advisor_f1",
                "advisor_descriptor", "advisor_p", "baseline_algorithm",
                "baseline_subset", "baseline_p", "outcome",
            ])
            for c in self.cells:
                writer.writerow([
                    c.target, c.budget, c.k, f"{c.baseline_f1:.6f}", f"{c.advisor_f1:.6f}",
                    c.advisor_descriptor, c.advisor_p, c.baseline_algorithm,
                    c.baseline_subset, c.baseline_p, c.outcome,
                ])

    def format_table(self) -> str:
        lines = []
        header = (
            f"{'target':<12}{'labels':>7} | "
            f"{'base k=1':>9}{'k=3':>7}{'k=5':>7} | "
            f"{'adv k=1':>9}{'k=3':>7}{'k=5':>7}"
        )
        lines.append(header)
        lines.append("-" * len(header))
        for target in self.targets:
            for budget in self.budgets:
                row = {k: self.cell(target, budget, k) for k in self.ks}

                def fmt(value, best):
                    mark = "*" if best else " "
                    return f"{value:.3f}{mark}"

                base = "".join(
                    f"{fmt(row[k].baseline_f1, row[k].outcome == 'loss'):>7}" for k in self.ks
                )
                adv = "".join(
                    f"{fmt(row[k].advisor_f1, row[k].outcome == 'win'):>7}" for k in self.ks
                )
                lines.append(f"{target:<12}{budget:>7} | {base:>23} | {adv:>23}")
        lines.append("-" * len(header))
        lines.append(f"advisor wins {self.wins} / {len(self.cells)} cells "
                     f"(losses {self.losses}, ties {self.ties})")
        return "\n".join(lines)


def _stratified_negative_draw(rng, pools, budget):
    """Spread the negative budget as evenly as possible over the other classes."""
    classes = sorted(pools)
    picked = []
    remaining = budget
    open_classes = [c for c in classes if pools[c]]
    while remaining > 0 and open_classes:
        share = max(1, remaining // len(open_classes))
        next_open = []
        for cls in open_classes:
            take = min(share, len(pools[cls]), remaining)
            if take > 0:
                chosen = rng.choice(len(pools[cls]), size=take, replace=False)
                chosen_ids = [pools[cls][i] for i in sorted(chosen)]
                picked.extend(chosen_ids)
                pools[cls] = [i for i in pools[cls] if i not in set(chosen_ids)]
                remaining -= take
            if pools[cls] and remaining > 0:
                next_open.append(cls)
        open_classes = next_open
    if remaining > 0:
        raise ValueError(f"not enough non-target items: short by {remaining}")
    return sorted(picked)


def _run_cell(target, budget, ground_truth, spaces, concat_ids, concat_X,
              ks, subset_sizes, master_seed, relieff_k):
    seed = derive_seed(master_seed, "protocol", target, budget)
    rng = np.random.default_rng(seed)

    pos_pool = sorted(i for i, g in ground_truth.items() if g == target)
    neg_pools = {}
    for i, g in sorted(ground_truth.items()):
        if g != target:
            neg_pools.setdefault(g, []).append(i)
    if len(pos_pool) < budget:
        raise ValueError(f"target {target!r}: only {len(pos_pool)} items for budget {budget}")

    pos_idx = rng.choice(len(pos_pool), size=budget, replace=False)
    pos = [pos_pool[i] for i in sorted(pos_idx)]
    neg = _stratified_negative_draw(rng, neg_pools, budget)

    def split(side):
        perm = rng.permutation(len(side))
        cut = len(side) // 2
        train = sorted(side[i] for i in perm[:cut])
        test = sorted(side[i] for i in perm[cut:])
        return train, test

    pos_train, pos_test = split(pos)
    neg_train, neg_test = split(neg)
    train_ids = sorted(pos_train + neg_train)
    test_ids = sorted(pos_test + neg_test)
    relevance = {i: True for i in pos}
    relevance.update({i: False for i in neg})

    train_labels = LabelStore()
    for i in train_ids:
        train_labels.assign(i, RELEVANT if relevance[i] else IRRELEVANT)

    ranking = rank_measures(spaces, train_labels)
    top = ranking.top.measure
    top_space = next(s for s in spaces if s.measure == top)
    advisor_f1 = {
        k: knn_f1(top_space, relevance, train_ids, test_ids, k=k, p=top.p) for k in ks
    }

    row_of = {i: r for r, i in enumerate(concat_ids)}
    X_train = concat_X[[row_of[i] for i in train_ids]]
    y_train = np.array([relevance[i] for i in train_ids])
    best = {k: (-1.0, None) for k in ks}
    for algorithm in ALGORITHMS:
        full_ranking = select_dimensions(
            algorithm, X_train, y_train, derive_seed(seed, algorithm), relieff_k=relieff_k
        )
        for size in subset_sizes:
            dims = full_ranking[:size]
            view = _ArrayView(concat_ids, concat_X[:, dims])
            for p in NORM_PS:
                for k in ks:
                    f1 = knn_f1(view, relevance, train_ids, test_ids, k=k, p=p)
                    if f1 > best[k][0]:
                        best[k] = (f1, (algorithm, size, p))

    cells = []
    for k in ks:
        baseline_f1, combo = best[k]
        adv = advisor_f1[k]
        if adv > baseline_f1:
            outcome = "win"
        elif adv < baseline_f1:
            outcome = "loss"
        else:
            outcome = "tie"
        cells.append(ProtocolCell(
            target=target, budget=budget, k=k,
            baseline_f1=baseline_f1, advisor_f1=adv,
            advisor_descriptor=top.descriptor.name, advisor_p=top.p,
            baseline_algorithm=combo[0], baseline_subset=combo[1], baseline_p=combo[2],
            outcome=outcome,
        ))
    return cells


def run_protocol(corpus, features, targets, budgets=DEFAULT_BUDGETS, ks=DEFAULT_KS,
                 subset_sizes=DEFAULT_SUBSET_SIZES, master_seed: int = 0,
                 relieff_k: int = 10, jobs: int = 1) -> ProtocolReport:
    """Full advisor-vs-baselines comparison over targets, budgets, and k.

    Cell seeds derive from the master seed and the cell coordinates, so the
    report is reproducible bitwise and independent of execution order or
    the number of worker threads.
    """
    ground_truth = corpus.ground_truth_map()
    if len(ground_truth) != len(corpus):
        missing = sorted(set(corpus.ids) - set(ground_truth))
        raise ValueError(f"ground truth missing for {len(missing)} items, e.g. {missing[:3]}")
    budgets = tuple(budgets)
    targets = tuple(targets)
    ks = tuple(ks)
    max_budget = max(budgets)
    counts = {}
    for g in ground_truth.values():
        counts[g] = counts.get(g, 0) + 1
    for target in targets:
        n_pos = counts.get(target, 0)
        n_neg = len(ground_truth) - n_pos
        if n_pos < max_budget or n_neg < max_budget:
            raise ValueError(
                f"target {target!r} needs >= {max_budget} items on each side, "
                f"has {n_pos} target / {n_neg} non-target"
            )

    spaces = build_spaces(features)
    concat_ids, concat_X = concat_features(features)

    work = [(target, budget) for target in targets for budget in budgets]

    def run(pair):
        target, budget = pair
        return _run_cell(target, budget, ground_truth, spaces, concat_ids, concat_X,
                         ks, subset_sizes, master_seed, relieff_k)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_pair = list(pool.map(run, work))
    else:
        per_pair = [run(pair) for pair in work]

    cells = [cell for group in per_pair for cell in group]
    return ProtocolReport(tuple(cells), targets, budgets, ks)
