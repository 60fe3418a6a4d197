"""Hierarchical SOM relevance classifier.

A root SOM is trained on the whole corpus in the active normalized space;
any cell whose labeled items are mixed beyond a threshold, and which holds
enough items, recursively spawns a child SOM trained only on that cell's
items. Classification descends best-matching units to a childless cell and
returns its majority label. Cells with few labels drive the active-learning
query.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientLabelsError, UnclassifiableError
from .labels import IRRELEVANT, RELEVANT, LabelStore
from .metric_space import NormalizedSpace, validate_p
from .seeding import derive_seed


@dataclass(frozen=True)
class SomHyperparams:
    width: int = 3
    height: int = 3
    epochs: int = 20
    alpha0: float = 0.5
    radius0: float | None = None  # defaults to max(width, height) / 2
    m_t: float = 0.2
    c_t: int | None = None  # defaults to 2 * width * height
    q_t: float = 0.1
    max_depth: int = 4
    seed: int = 0

    @property
    def cells(self) -> int:
        return self.width * self.height

    @property
    def radius(self) -> float:
        return self.radius0 if self.radius0 is not None else max(self.width, self.height) / 2.0

    @property
    def split_count(self) -> int:
        return self.c_t if self.c_t is not None else 2 * self.cells

    def to_json(self) -> dict:
        return {
            "width": self.width, "height": self.height, "epochs": self.epochs,
            "alpha0": self.alpha0, "radius0": self.radius0, "m_t": self.m_t,
            "c_t": self.c_t, "q_t": self.q_t, "max_depth": self.max_depth, "seed": self.seed,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "SomHyperparams":
        return cls(**payload)


def mix_ratio(n_pos: int, n_neg: int) -> float:
    """Minority fraction among a cell's labeled items; 0 when none are labeled."""
    total = n_pos + n_neg
    if total == 0:
        return 0.0
    return min(n_pos / total, n_neg / total)


def label_ratio(n_pos: int, n_neg: int, n_items: int) -> float:
    """Fraction of a cell's items that carry a label; 0 for empty cells."""
    if n_items == 0:
        return 0.0
    return (n_pos + n_neg) / n_items


@dataclass(frozen=True)
class CellStats:
    n_items: int
    n_pos: int
    n_neg: int
    mix_ratio: float
    label_ratio: float
    mean_qe: float

    def to_json(self) -> dict:
        return {
            "n_items": self.n_items, "n_pos": self.n_pos, "n_neg": self.n_neg,
            "mix_ratio": self.mix_ratio, "label_ratio": self.label_ratio,
            "mean_qe": self.mean_qe,
        }


class SomGrid:
    """One trained map: prototype per cell plus the item-to-BMU assignment."""

    def __init__(self, width, height, prototypes, cell_assignments):
        self.width = int(width)
        self.height = int(height)
        self.prototypes = np.ascontiguousarray(prototypes, dtype=np.float64)
        self.cell_assignments = dict(cell_assignments)

    @property
    def cells(self) -> int:
        return self.width * self.height

    def members(self, cell: int):
        return sorted(i for i, c in self.cell_assignments.items() if c == cell)


@dataclass
class SomNode:
    node_id: str
    path: tuple
    depth: int
    grid: SomGrid
    parent: tuple | None  # (node_id, cell)
    children: dict = field(default_factory=dict)  # cell -> node_id
    stats: tuple = ()  # CellStats per cell

    def cell_path(self, cell: int) -> tuple:
        return self.path + (cell,)


class SomTree:
    def __init__(self, nodes, root_id, hyperparams: SomHyperparams, p: float, descriptor_name: str):
        self.nodes = nodes
        self.root_id = root_id
        self.hyperparams = hyperparams
        self.p = float(p)
        self.descriptor_name = descriptor_name

    @property
    def root(self) -> SomNode:
        return self.nodes[self.root_id]

    def leaf_cells(self):
        """(node, cell) pairs without a child, over every node."""
        out = []
        for node_id in sorted(self.nodes):
            node = self.nodes[node_id]
            for cell in range(node.grid.cells):
                if cell not in node.children:
                    out.append((node, cell))
        return out

    def to_json(self, include_assignments: bool = True) -> dict:
        nodes = {}
        for node_id, node in self.nodes.items():
            nodes[node_id] = {
                "path": list(node.path),
                "depth": node.depth,
                "parent": list(node.parent) if node.parent else None,
                "children": {str(c): nid for c, nid in sorted(node.children.items())},
                "width": node.grid.width,
                "height": node.grid.height,
                "prototypes": [list(row) for row in node.grid.prototypes],
                "stats": [s.to_json() for s in node.stats],
            }
            if include_assignments:
                nodes[node_id]["assignments"] = dict(sorted(node.grid.cell_assignments.items()))
        return {
            "root": self.root_id,
            "p": self.p,
            "descriptor": self.descriptor_name,
            "hyperparams": self.hyperparams.to_json(),
            "nodes": nodes,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "SomTree":
        nodes = {}
        for node_id, blob in payload["nodes"].items():
            grid = SomGrid(
                blob["width"], blob["height"], np.array(blob["prototypes"], dtype=np.float64),
                {i: int(c) for i, c in blob.get("assignments", {}).items()},
            )
            nodes[node_id] = SomNode(
                node_id=node_id,
                path=tuple(blob["path"]),
                depth=int(blob["depth"]),
                grid=grid,
                parent=tuple(blob["parent"]) if blob["parent"] else None,
                children={int(c): nid for c, nid in blob["children"].items()},
                stats=tuple(CellStats(**s) for s in blob["stats"]),
            )
        return cls(
            nodes, payload["root"], SomHyperparams.from_json(payload["hyperparams"]),
            payload["p"], payload["descriptor"],
        )


# ---------------------------------------------------------------------------
# training


def _grid_distance_sq(width: int, height: int) -> np.ndarray:
    coords = np.array([(i // width, i % width) for i in range(width * height)], dtype=np.float64)
    diff = coords[:, None, :] - coords[None, :, :]
    return (diff ** 2).sum(axis=2)


def _cell_distances(X: np.ndarray, prototypes: np.ndarray, p: float) -> np.ndarray:
    """Lp distances, n_items x n_cells."""
    return (np.abs(X[:, None, :] - prototypes[None, :, :]) ** p).sum(axis=2) ** (1.0 / p)


def train_som(ids, space: NormalizedSpace, params: SomHyperparams, seed: int) -> SomGrid:
    """Train one SOM on the given items.

    Prototypes start as a seeded sample of the input vectors. Each epoch
    presents items in a fresh seeded shuffle; the best-matching unit (ties
    to the lowest cell index) and its grid neighborhood move toward the
    input, with the learning rate decaying linearly to 0.01 and the Gaussian
    neighborhood radius to 0.5. A final pass assigns every item to its BMU.
    """
    ids = sorted(ids)
    if not ids:
        raise ValueError("cannot train a SOM on an empty item set")
    p = validate_p(space.p)
    X = space.rows(ids)
    m = X.shape[0]
    cells = params.cells
    rng = np.random.default_rng(seed)

    init_idx = rng.choice(m, size=cells, replace=m < cells)
    prototypes = X[init_idx].copy()
    grid_d2 = _grid_distance_sq(params.width, params.height)

    for epoch in range(params.epochs):
        frac = epoch / (params.epochs - 1) if params.epochs > 1 else 0.0
        alpha = params.alpha0 + (0.01 - params.alpha0) * frac
        radius = params.radius + (0.5 - params.radius) * frac
        gauss_denom = 2.0 * radius * radius
        for i in rng.permutation(m):
            x = X[i]
            d = (np.abs(prototypes - x) ** p).sum(axis=1)
            bmu = int(d.argmin())
            h = np.exp(-grid_d2[bmu] / gauss_denom)
            prototypes += (alpha * h)[:, None] * (x - prototypes)

    bmus = _cell_distances(X, prototypes, p).argmin(axis=1)
    assignments = {item_id: int(c) for item_id, c in zip(ids, bmus)}
    return SomGrid(params.width, params.height, prototypes, assignments)


def _cell_stats(grid: SomGrid, space: NormalizedSpace, labels: LabelStore) -> tuple:
    stats = []
    pos, neg = labels.relevant, labels.irrelevant
    members_by_cell = {c: [] for c in range(grid.cells)}
    for item_id, cell in grid.cell_assignments.items():
        members_by_cell[cell].append(item_id)
    for cell in range(grid.cells):
        members = members_by_cell[cell]
        n_pos = sum(1 for i in members if i in pos)
        n_neg = sum(1 for i in members if i in neg)
        if members:
            dists = _cell_distances(space.rows(sorted(members)), grid.prototypes[cell:cell + 1], space.p)
            mean_qe = float(dists.mean())
        else:
            mean_qe = 0.0
        stats.append(CellStats(
            n_items=len(members), n_pos=n_pos, n_neg=n_neg,
            mix_ratio=mix_ratio(n_pos, n_neg),
            label_ratio=label_ratio(n_pos, n_neg, len(members)),
            mean_qe=mean_qe,
        ))
    return tuple(stats)


def build_tree(ids, space: NormalizedSpace, labels: LabelStore, params: SomHyperparams,
               descriptor_name: str | None = None) -> SomTree:
    """Train the full hierarchical classifier.

    A cell spawns a child SOM, trained on exactly its items, when its
    labeled mixture exceeds m_t, it holds more than c_t items, and the node
    sits above max_depth. Child seeds derive from the master seed and the
    cell path, so sibling subtrees are reproducible independent of build
    order.
    """
    if not labels.relevant or not labels.irrelevant:
        raise InsufficientLabelsError("tree training needs labels on both sides")
    descriptor_name = descriptor_name or space.measure.descriptor.name
    nodes = {}

    def build_node(node_ids, path, depth, parent):
        node_id = "root" if not path else "root/" + "/".join(str(c) for c in path)
        grid = train_som(node_ids, space, params, derive_seed(params.seed, "som", *path))
        stats = _cell_stats(grid, space, labels)
        node = SomNode(node_id=node_id, path=path, depth=depth, grid=grid, parent=parent, stats=stats)
        nodes[node_id] = node
        if depth < params.max_depth:
            for cell in range(grid.cells):
                st = stats[cell]
                if st.mix_ratio > params.m_t and st.n_items > params.split_count:
                    child = build_node(grid.members(cell), path + (cell,), depth + 1, (node_id, cell))
                    node.children[cell] = child.node_id
        return node

    root = build_node(sorted(ids), (), 0, None)
    return SomTree(nodes, root.node_id, params, space.p, descriptor_name)


# ---------------------------------------------------------------------------
# classification


def _cell_label_counts(node: SomNode, labels: LabelStore):
    pos, neg = labels.relevant, labels.irrelevant
    counts = [[0, 0] for _ in range(node.grid.cells)]
    for item_id, cell in node.grid.cell_assignments.items():
        if item_id in pos:
            counts[cell][0] += 1
        elif item_id in neg:
            counts[cell][1] += 1
    return counts


def _majority(n_pos: int, n_neg: int) -> str:
    # exact ties are conservatively irrelevant
    return RELEVANT if n_pos > n_neg else IRRELEVANT


def classify_all(tree: SomTree, space: NormalizedSpace, labels: LabelStore, ids=None) -> dict:
    """Classify many items by recursive BMU descent; returns id -> label.

    At a childless cell the cell's current majority label wins; a label-free
    cell defers to the nearest labeled cell of the same grid (by prototype
    distance, ties to the lower cell index).
    """
    ids = list(ids if ids is not None else space.ids)
    out = {}
    counts_cache = {}
    pending = [(tree.root_id, ids)]
    while pending:
        node_id, group = pending.pop()
        node = tree.nodes[node_id]
        if node_id not in counts_cache:
            counts_cache[node_id] = _cell_label_counts(node, labels)
        counts = counts_cache[node_id]
        X = space.rows(group)
        dists = _cell_distances(X, node.grid.prototypes, space.p)
        bmus = dists.argmin(axis=1)
        for cell in range(node.grid.cells):
            members = [group[i] for i in np.nonzero(bmus == cell)[0]]
            if not members:
                continue
            if cell in node.children:
                pending.append((node.children[cell], members))
                continue
            n_pos, n_neg = counts[cell]
            if n_pos + n_neg > 0:
                for item_id in members:
                    out[item_id] = _majority(n_pos, n_neg)
                continue
            # fallback: nearest labeled cell of this grid, per item
            sub_d = _cell_distances(space.rows(members), node.grid.prototypes, space.p)
            for i, item_id in enumerate(members):
                order = sorted(range(node.grid.cells), key=lambda c: (sub_d[i, c], c))
                assigned = None
                for c in order:
                    cp, cn = counts[c]
                    if cp + cn > 0:
                        assigned = _majority(cp, cn)
                        break
                if assigned is None:
                    raise UnclassifiableError(
                        f"no labeled cell in grid of node {node_id}; label items before classifying"
                    )
                out[item_id] = assigned
    return out


def classify(item_id: str, tree: SomTree, space: NormalizedSpace, labels: LabelStore) -> str:
    return classify_all(tree, space, labels, [item_id])[item_id]


# ---------------------------------------------------------------------------
# active-learning query and inspection layers


def query_candidates(tree: SomTree, space: NormalizedSpace, labels: LabelStore,
                     q_t: float | None = None, budget: int = 20) -> list:
    """Unlabeled items from under-labeled childless cells.

    Cells with LabelRatio below q_t are ordered by ascending ratio (ties:
    larger cells first, then cell path); items are taken round-robin across
    the marked cells, nearest-to-prototype first inside each cell.
    """
    q_t = tree.hyperparams.q_t if q_t is None else q_t
    labeled = labels.labeled()
    marked = []
    for node, cell in tree.leaf_cells():
        members = node.grid.members(cell)
        n_pos = sum(1 for i in members if i in labels.relevant)
        n_neg = sum(1 for i in members if i in labels.irrelevant)
        ratio = label_ratio(n_pos, n_neg, len(members))
        if ratio < q_t:
            neutral = [i for i in members if i not in labeled]
            if not neutral:
                continue
            d = _cell_distances(space.rows(neutral), node.grid.prototypes[cell:cell + 1], space.p)[:, 0]
            queue = [i for _, _, i in sorted(zip(d, neutral, neutral))]
            marked.append((ratio, -len(members), node.cell_path(cell), queue))
    marked.sort(key=lambda m: (m[0], m[1], m[2]))

    picked = []
    queues = [m[3] for m in marked]
    while len(picked) < budget and any(queues):
        for queue in queues:
            if queue and len(picked) < budget:
                picked.append(queue.pop(0))
    return picked


@dataclass(frozen=True)
class NodeLayers:
    label_quality: tuple  # per cell: float in [0,1] or None when unlabeled
    insufficient: tuple  # per cell: LabelRatio < q_t
    quantization_error: tuple
    u_matrix: tuple
    feature_histogram: tuple  # per cell: prototype vector


def node_layers(node: SomNode, p: float, q_t: float) -> NodeLayers:
    """Per-cell visualization layers from the node's training-time stats.

    The label-quality scalar maps pure-irrelevant to 0, balanced mixtures to
    0.5, and pure-relevant to 1; None for cells without labels.
    """
    width, height = node.grid.width, node.grid.height
    quality, insufficient, qe = [], [], []
    for st in node.stats:
        if st.n_pos + st.n_neg == 0:
            quality.append(None)
        elif st.n_pos == st.n_neg:
            quality.append(0.5)
        elif st.n_pos > st.n_neg:
            quality.append(1.0 - st.mix_ratio)
        else:
            quality.append(st.mix_ratio)
        insufficient.append(st.label_ratio < q_t)
        qe.append(st.mean_qe)

    protos = node.grid.prototypes
    u = []
    for cell in range(node.grid.cells):
        r, c = divmod(cell, width)
        neigh = []
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            rr, cc = r + dr, c + dc
            if 0 <= rr < height and 0 <= cc < width:
                neigh.append(rr * width + cc)
        dists = [float((np.abs(protos[cell] - protos[n]) ** p).sum() ** (1.0 / p)) for n in neigh]
        u.append(dists)
    u_matrix = tuple(float(np.mean(d)) if d else 0.0 for d in u)

    return NodeLayers(
        label_quality=tuple(quality),
        insufficient=tuple(insufficient),
        quantization_error=tuple(qe),
        u_matrix=u_matrix,
        feature_histogram=tuple(tuple(row) for row in protos),
    )
