import numpy as np
import pytest

from relsom.corpus import load_corpus, vector_cell, write_manifest
from relsom.features import DescriptorId, FeatureMatrix
from relsom.labels import IRRELEVANT, RELEVANT, LabelStore


def make_matrix(name, ids, data):
    descriptor = DescriptorId.make(name, dim=int(np.asarray(data).shape[1]), source="test")
    return FeatureMatrix(descriptor, ids, np.asarray(data, dtype=np.float64))


def labeled_store(relevant, irrelevant):
    store = LabelStore()
    for i in relevant:
        store.assign(i, RELEVANT)
    for i in irrelevant:
        store.assign(i, IRRELEVANT)
    return store


def blob_ids(prefix, n):
    return [f"{prefix}{j:03d}" for j in range(n)]


@pytest.fixture
def vector_corpus(tmp_path):
    """Small two-block vector corpus with ground truth."""
    rng = np.random.default_rng(7)
    rows = []
    for cls, shift in (("a", -2.0), ("b", 2.0)):
        for j in range(12):
            b0 = rng.standard_normal(3) + shift
            b1 = rng.standard_normal(2)
            rows.append((f"{cls}{j:02d}", vector_cell([b0, b1]), cls))
    manifest = tmp_path / "manifest.csv"
    write_manifest(manifest, rows)
    corpus, identity = load_corpus(str(manifest))
    return corpus, identity


@pytest.fixture(scope="session")
def tiny_image_dir(tmp_path_factory):
    """Four deterministic PNGs: gray, black, checkerboard, gradient."""
    from PIL import Image

    out = tmp_path_factory.mktemp("imgs")

    def save(name, arr):
        Image.fromarray(arr.astype(np.uint8), "RGB").save(out / name)

    gray = np.full((64, 64, 3), 128)
    black = np.zeros((64, 64, 3))
    checker = np.zeros((64, 64, 3))
    rr, cc = np.indices((64, 64))
    checker[((rr // 8) % 2) == ((cc // 8) % 2)] = 255
    gradient = np.tile(np.linspace(0, 255, 64)[None, :, None], (64, 1, 3))
    save("gray.png", gray)
    save("black.png", black)
    save("checker.png", checker)
    save("gradient.png", gradient)
    return out
