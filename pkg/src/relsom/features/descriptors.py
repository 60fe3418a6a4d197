"""The perceptual descriptor bank.

Eleven descriptors spanning color, edge, texture, and structure families.
Every image is resampled to a fixed 128x128 working resolution (bilinear)
before extraction, so dimensionality and runtime are independent of source
size. Histogram descriptors are L1-normalized at extraction.
"""

from __future__ import annotations

import numpy as np
from PIL import Image
from scipy import ndimage
from scipy.fft import next_fast_len
from skimage.feature import graycomatrix, local_binary_pattern

from .types import DescriptorId

WORK_SIZE = 128
_GRAY_W = (0.299, 0.587, 0.114)  # ITU-R 601 luma weights
_EPS = 1e-12


def load_image(path: str) -> np.ndarray:
    """Load an image as float RGB in [0,1] at the working resolution."""
    with Image.open(path) as img:
        rgb = img.convert("RGB").resize((WORK_SIZE, WORK_SIZE), Image.BILINEAR)
    return np.asarray(rgb, dtype=np.float64) / 255.0


def to_gray(rgb: np.ndarray) -> np.ndarray:
    return _GRAY_W[0] * rgb[..., 0] + _GRAY_W[1] * rgb[..., 1] + _GRAY_W[2] * rgb[..., 2]


def _l1(hist: np.ndarray) -> np.ndarray:
    total = hist.sum()
    if total <= 0.0:
        return np.full(hist.shape, 1.0 / hist.size)
    return hist / total


# -- color ------------------------------------------------------------------


def luminance_histogram(rgb: np.ndarray) -> np.ndarray:
    hist, _ = np.histogram(to_gray(rgb), bins=32, range=(0.0, 1.0))
    return _l1(hist.astype(np.float64))


def _joint_histogram(channels, bins: int) -> np.ndarray:
    idx = 0
    for ch in channels:
        q = np.minimum((ch * bins).astype(np.int64), bins - 1)
        idx = idx * bins + q
    hist = np.bincount(idx.ravel(), minlength=bins ** len(channels)).astype(np.float64)
    return _l1(hist)


def rgb_histogram(rgb: np.ndarray) -> np.ndarray:
    return _joint_histogram([rgb[..., 0], rgb[..., 1], rgb[..., 2]], bins=4)


def opponent_histogram(rgb: np.ndarray) -> np.ndarray:
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    o1 = (r - g) / np.sqrt(2.0)
    o2 = (r + g - 2.0 * b) / np.sqrt(6.0)
    o3 = (r + g + b) / np.sqrt(3.0)
    # rescale each opponent axis from its theoretical range into [0,1]
    c1 = (o1 + 1.0 / np.sqrt(2.0)) / (2.0 / np.sqrt(2.0))
    c2 = (o2 + 2.0 / np.sqrt(6.0)) / (4.0 / np.sqrt(6.0))
    c3 = o3 / np.sqrt(3.0)
    return _joint_histogram([c1, c2, c3], bins=4)


# -- edges ------------------------------------------------------------------


def _sobel_gradients(gray: np.ndarray):
    """Interior Sobel gradients (boundary row/col excluded)."""
    p = gray
    gx = (
        (p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:])
        - (p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2])
    )
    gy = (
        (p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:])
        - (p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:])
    )
    return gx, gy


def edge_orientation_histogram(rgb: np.ndarray) -> np.ndarray:
    """Magnitude-weighted gradient orientation histogram, 18 bins over 180 degrees.

    Bins are centered on 0, 10, ..., 170 degrees so axis-aligned edges land
    mid-bin instead of on a bin boundary.
    """
    gx, gy = _sobel_gradients(to_gray(rgb))
    mag = np.hypot(gx, gy)
    theta = np.degrees(np.arctan2(gy, gx))
    bins = np.minimum((((theta + 5.0) % 180.0) / 10.0).astype(np.int64), 17)
    hist = np.bincount(bins.ravel(), weights=mag.ravel(), minlength=18)
    return _l1(hist)


# -- texture ----------------------------------------------------------------

_HARALICK_LEVELS = 32
_HARALICK_ANGLES = (0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4)


def _haralick_from_glcm(p: np.ndarray) -> np.ndarray:
    """The 13 classic co-occurrence features from one normalized GLCM."""
    n = p.shape[0]
    i = np.arange(n, dtype=np.float64)
    ii, jj = np.meshgrid(i, i, indexing="ij")
    px = p.sum(axis=1)
    py = p.sum(axis=0)
    mu_x = float((i * px).sum())
    mu_y = float((i * py).sum())
    sd_x = float(np.sqrt(((i - mu_x) ** 2 * px).sum()))
    sd_y = float(np.sqrt(((i - mu_y) ** 2 * py).sum()))

    k_sum = np.arange(2 * n - 1, dtype=np.float64)
    p_sum = np.zeros(2 * n - 1)
    np.add.at(p_sum, (ii + jj).astype(np.int64).ravel(), p.ravel())
    k_diff = np.arange(n, dtype=np.float64)
    p_diff = np.zeros(n)
    np.add.at(p_diff, np.abs(ii - jj).astype(np.int64).ravel(), p.ravel())

    asm = float((p ** 2).sum())
    contrast = float(((ii - jj) ** 2 * p).sum())
    if sd_x * sd_y > _EPS:
        correlation = float(((ii * jj * p).sum() - mu_x * mu_y) / (sd_x * sd_y))
    else:
        correlation = 0.0  # degenerate single-level image
    variance = float(((ii - mu_x) ** 2 * p).sum())
    idm = float((p / (1.0 + (ii - jj) ** 2)).sum())
    sum_avg = float((k_sum * p_sum).sum())
    sum_var = float(((k_sum - sum_avg) ** 2 * p_sum).sum())
    sum_ent = float(-(p_sum * np.log(p_sum + _EPS)).sum())
    entropy = float(-(p * np.log(p + _EPS)).sum())
    diff_avg = float((k_diff * p_diff).sum())
    diff_var = float(((k_diff - diff_avg) ** 2 * p_diff).sum())
    diff_ent = float(-(p_diff * np.log(p_diff + _EPS)).sum())

    hxy = entropy
    pxy = np.outer(px, py)
    hxy1 = float(-(p * np.log(pxy + _EPS)).sum())
    hxy2 = float(-(pxy * np.log(pxy + _EPS)).sum())
    hx = float(-(px * np.log(px + _EPS)).sum())
    hy = float(-(py * np.log(py + _EPS)).sum())
    denom = max(hx, hy)
    imc1 = (hxy - hxy1) / denom if denom > _EPS else 0.0
    imc2 = float(np.sqrt(max(0.0, 1.0 - np.exp(-2.0 * (hxy2 - hxy)))))

    return np.array([
        asm, contrast, correlation, variance, idm, sum_avg, sum_var,
        sum_ent, entropy, diff_var, diff_ent, imc1, imc2,
    ])


def haralick(rgb: np.ndarray) -> np.ndarray:
    gray = to_gray(rgb)
    quant = np.minimum((gray * _HARALICK_LEVELS).astype(np.uint8), _HARALICK_LEVELS - 1)
    glcm = graycomatrix(
        quant, distances=[1], angles=list(_HARALICK_ANGLES),
        levels=_HARALICK_LEVELS, symmetric=True, normed=True,
    )
    feats = [_haralick_from_glcm(glcm[:, :, 0, a]) for a in range(len(_HARALICK_ANGLES))]
    return np.mean(feats, axis=0)


def _tamura_coarseness(gray: np.ndarray) -> float:
    best_e = np.full(gray.shape, -1.0)
    best_k = np.zeros(gray.shape)
    for k in range(1, 6):
        size = 2 ** k
        h = 2 ** (k - 1)
        avg = ndimage.uniform_filter(gray, size=size, mode="nearest")
        pad_h = np.pad(avg, ((0, 0), (h, h)), mode="edge")
        pad_v = np.pad(avg, ((h, h), (0, 0)), mode="edge")
        e_h = np.abs(pad_h[:, 2 * h:] - pad_h[:, :-2 * h])
        e_v = np.abs(pad_v[2 * h:, :] - pad_v[:-2 * h, :])
        e = np.maximum(e_h, e_v)
        better = e > best_e
        best_e[better] = e[better]
        best_k[better] = float(size)
    return float(best_k.mean())


def _tamura_contrast(gray: np.ndarray) -> float:
    sigma = float(gray.std())
    if sigma < _EPS:
        return 0.0
    kurt = float(((gray - gray.mean()) ** 4).mean()) / sigma ** 4
    return sigma / kurt ** 0.25


def _tamura_directionality(gray: np.ndarray) -> float:
    p = gray
    dh = (p[:-2, 2:] + p[1:-1, 2:] + p[2:, 2:]) - (p[:-2, :-2] + p[1:-1, :-2] + p[2:, :-2])
    dv = (p[2:, :-2] + p[2:, 1:-1] + p[2:, 2:]) - (p[:-2, :-2] + p[:-2, 1:-1] + p[:-2, 2:])
    mag = (np.abs(dh) + np.abs(dv)) / 2.0
    if mag.sum() <= _EPS:
        return 0.0
    theta = np.arctan2(dv, dh) % np.pi
    n_bins = 16
    bins = np.minimum((theta / np.pi * n_bins).astype(np.int64), n_bins - 1)
    hist = np.bincount(bins.ravel(), weights=mag.ravel(), minlength=n_bins)
    hist = hist / hist.sum()
    centers = (np.arange(n_bins) + 0.5) * np.pi / n_bins
    peak = centers[int(hist.argmax())]
    d = np.abs(centers - peak)
    d = np.minimum(d, np.pi - d)  # orientation is periodic mod pi
    return float((hist * d ** 2).sum())


def tamura(rgb: np.ndarray) -> np.ndarray:
    gray = to_gray(rgb)
    return np.array([
        _tamura_coarseness(gray),
        _tamura_contrast(gray),
        _tamura_directionality(gray),
    ])


def lbp(rgb: np.ndarray) -> np.ndarray:
    # integer gray levels: neighbor comparisons on floats are numerically fragile
    levels = np.round(to_gray(rgb) * 255.0).astype(np.uint8)
    codes = local_binary_pattern(levels, P=8, R=1.0, method="nri_uniform")
    hist = np.bincount(codes.astype(np.int64).ravel(), minlength=59).astype(np.float64)
    return _l1(hist)


_GABOR_WAVELENGTHS = (4.0, 8.0, 16.0, 32.0)
_GABOR_ORIENTATIONS = 6
_gabor_cache: dict = {}


def _gabor_bank(scale_idx: int):
    """Kernel FFTs and padding geometry for one scale, cached per process."""
    key = scale_idx
    if key in _gabor_cache:
        return _gabor_cache[key]
    lam = _GABOR_WAVELENGTHS[scale_idx]
    sigma = 0.56 * lam
    gamma = 0.5
    half = int(np.ceil(3.0 * sigma))
    size = 2 * half + 1
    padded = next_fast_len(WORK_SIZE + size - 1)
    y, x = np.mgrid[-half:half + 1, -half:half + 1].astype(np.float64)
    kernel_ffts = []
    for k in range(_GABOR_ORIENTATIONS):
        theta = k * np.pi / _GABOR_ORIENTATIONS
        xr = x * np.cos(theta) + y * np.sin(theta)
        yr = -x * np.sin(theta) + y * np.cos(theta)
        kernel = np.exp(-(xr ** 2 + (gamma * yr) ** 2) / (2.0 * sigma ** 2)) * np.exp(
            2j * np.pi * xr / lam
        )
        kernel -= kernel.mean()  # zero DC: uniform brightness must not respond
        pad = np.zeros((padded, padded), dtype=np.complex128)
        pad[:size, :size] = kernel
        kernel_ffts.append(np.fft.fft2(pad))
    bank = (np.stack(kernel_ffts), size, padded)
    _gabor_cache[key] = bank
    return bank


def gabor(rgb: np.ndarray) -> np.ndarray:
    """Mean magnitude and energy of each filter in a 4-scale x 6-orientation bank."""
    gray = to_gray(rgb)
    gray = gray - gray.mean()  # brightness invariance; also kills the pad-border step
    feats = []
    for scale_idx in range(len(_GABOR_WAVELENGTHS)):
        kernel_ffts, size, padded = _gabor_bank(scale_idx)
        img = np.zeros((padded, padded), dtype=np.float64)
        img[:WORK_SIZE, :WORK_SIZE] = gray
        img_fft = np.fft.fft2(img)
        resp = np.fft.ifft2(img_fft[None, :, :] * kernel_ffts, axes=(-2, -1))
        off = (size - 1) // 2
        mag = np.abs(resp[:, off:off + WORK_SIZE, off:off + WORK_SIZE])
        for k in range(_GABOR_ORIENTATIONS):
            feats.append(mag[k].mean())
            feats.append((mag[k] ** 2).mean())
    return np.array(feats)


# -- structure --------------------------------------------------------------


def blocks(rgb: np.ndarray) -> np.ndarray:
    gray = to_gray(rgb)
    step = WORK_SIZE // 4
    return gray.reshape(4, step, 4, step).mean(axis=(1, 3)).ravel()


def profile(rgb: np.ndarray) -> np.ndarray:
    gray = to_gray(rgb)
    step = WORK_SIZE // 16
    rows = gray.mean(axis=1).reshape(16, step).mean(axis=1)
    cols = gray.mean(axis=0).reshape(16, step).mean(axis=1)
    return np.concatenate([rows, cols])


def hu_moments(rgb: np.ndarray) -> np.ndarray:
    gray = to_gray(rgb)
    h, w = gray.shape
    ys, xs = np.mgrid[0:h, 0:w].astype(np.float64)
    m00 = gray.sum()
    if m00 <= _EPS:
        return np.zeros(7)
    cx = (xs * gray).sum() / m00
    cy = (ys * gray).sum() / m00
    dx, dy = xs - cx, ys - cy

    def mu(p, q):
        return float((dx ** p * dy ** q * gray).sum())

    def eta(p, q):
        return mu(p, q) / m00 ** (1.0 + (p + q) / 2.0)

    n20, n02, n11 = eta(2, 0), eta(0, 2), eta(1, 1)
    n30, n03, n21, n12 = eta(3, 0), eta(0, 3), eta(2, 1), eta(1, 2)
    h1 = n20 + n02
    h2 = (n20 - n02) ** 2 + 4.0 * n11 ** 2
    h3 = (n30 - 3 * n12) ** 2 + (3 * n21 - n03) ** 2
    h4 = (n30 + n12) ** 2 + (n21 + n03) ** 2
    h5 = (n30 - 3 * n12) * (n30 + n12) * ((n30 + n12) ** 2 - 3 * (n21 + n03) ** 2) + (
        3 * n21 - n03
    ) * (n21 + n03) * (3 * (n30 + n12) ** 2 - (n21 + n03) ** 2)
    h6 = (n20 - n02) * ((n30 + n12) ** 2 - (n21 + n03) ** 2) + 4 * n11 * (n30 + n12) * (
        n21 + n03
    )
    h7 = (3 * n21 - n03) * (n30 + n12) * ((n30 + n12) ** 2 - 3 * (n21 + n03) ** 2) - (
        n30 - 3 * n12
    ) * (n21 + n03) * (3 * (n30 + n12) ** 2 - (n21 + n03) ** 2)
    return np.array([h1, h2, h3, h4, h5, h6, h7])


# -- registry ---------------------------------------------------------------

_SPECS = [
    ("luminance-histogram", 32, luminance_histogram, {"bins": 32}),
    ("rgb-histogram", 64, rgb_histogram, {"bins_per_channel": 4}),
    ("opponent-histogram", 64, opponent_histogram, {"bins_per_channel": 4}),
    ("edge-orientation-histogram", 18, edge_orientation_histogram, {"bins": 18}),
    ("haralick", 13, haralick, {"levels": 32, "distance": 1, "angles": 4}),
    ("tamura", 3, tamura, {"coarseness_scales": 5, "direction_bins": 16}),
    ("lbp", 59, lbp, {"points": 8, "radius": 1, "method": "nri_uniform"}),
    ("gabor", 48, gabor, {"scales": 4, "orientations": 6}),
    ("blocks", 16, blocks, {"grid": 4}),
    ("profile", 32, profile, {"bins": 16}),
    ("hu-moments", 7, hu_moments, {}),
]

REGISTRY = {}
for _name, _dim, _fn, _params in _SPECS:
    _params = dict(_params, resolution=WORK_SIZE)
    REGISTRY[_name] = (DescriptorId.make(_name, **_params), _dim, _fn)


def registered_descriptors():
    """All image DescriptorIds, sorted by name."""
    return sorted((entry[0] for entry in REGISTRY.values()), key=lambda d: d.name)


def descriptor_by_name(name: str) -> DescriptorId:
    if name not in REGISTRY:
        raise KeyError(f"unknown descriptor {name!r}; known: {sorted(REGISTRY)}")
    return REGISTRY[name][0]


def descriptor_dim(name: str) -> int:
    return REGISTRY[name][1]
