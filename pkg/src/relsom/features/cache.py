"""Bit-exact binary cache for feature matrices.

Layout: magic, version, header length, JSON header (descriptor name, params,
params hash, dimensionality, row count, item ids, payload checksum), then
row-major float64 data. Any mismatch between the file and the requested
descriptor, or a corrupt payload, raises StaleCacheError.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct

import numpy as np

from ..errors import StaleCacheError
from .types import DescriptorId, FeatureMatrix

_MAGIC = b"RSFC"
FORMAT_VERSION = 1


def save_matrix(matrix: FeatureMatrix, path: str) -> None:
    payload = np.ascontiguousarray(matrix.data, dtype=np.float64).tobytes()
    header = {
        "descriptor": matrix.descriptor.name,
        "params": list(matrix.descriptor.params),
        "params_hash": matrix.descriptor.params_hash(),
        "dim": matrix.dim,
        "count": len(matrix.ids),
        "ids": list(matrix.ids),
        "checksum": hashlib.sha256(payload).hexdigest(),
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", FORMAT_VERSION, len(blob)))
        fh.write(blob)
        fh.write(payload)
    os.replace(tmp, path)


def load_matrix(path: str, expected: DescriptorId | None = None) -> FeatureMatrix:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise StaleCacheError(f"cannot read cache {path}: {exc}") from exc
    if len(raw) < 12 or raw[:4] != _MAGIC:
        raise StaleCacheError(f"{path}: not a feature cache file")
    version, header_len = struct.unpack("<II", raw[4:12])
    if version != FORMAT_VERSION:
        raise StaleCacheError(f"{path}: cache format version {version}, expected {FORMAT_VERSION}")
    try:
        header = json.loads(raw[12:12 + header_len].decode("utf-8"))
        payload = raw[12 + header_len:]
        dim, count = int(header["dim"]), int(header["count"])
        ids = list(header["ids"])
    except (ValueError, KeyError, UnicodeDecodeError) as exc:
        raise StaleCacheError(f"{path}: corrupt cache header: {exc}") from exc
    if hashlib.sha256(payload).hexdigest() != header.get("checksum"):
        raise StaleCacheError(f"{path}: payload checksum mismatch (corrupt or truncated)")
    if len(payload) != dim * count * 8:
        raise StaleCacheError(f"{path}: payload size does not match header")

    descriptor = DescriptorId(header["descriptor"], tuple(tuple(kv) for kv in header["params"]))
    if expected is not None:
        if descriptor.name != expected.name:
            raise StaleCacheError(
                f"{path}: cache holds {descriptor.name!r}, expected {expected.name!r}"
            )
        if header["params_hash"] != expected.params_hash():
            raise StaleCacheError(
                f"{path}: descriptor params changed (cache {header['params_hash']}, "
                f"current {expected.params_hash()})"
            )
        descriptor = expected
    data = np.frombuffer(payload, dtype=np.float64).reshape(count, dim)
    return FeatureMatrix(descriptor, ids, data.copy())


def cache_roundtrip(matrix: FeatureMatrix, path: str) -> FeatureMatrix:
    """Save then reload a matrix; the result is bit-exact equal to the input."""
    save_matrix(matrix, path)
    return load_matrix(path, expected=matrix.descriptor)


def cache_path(cache_dir: str, descriptor: DescriptorId) -> str:
    return os.path.join(cache_dir, f"{descriptor.name}.feats")
