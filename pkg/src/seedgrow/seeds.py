"""Automatic seed selection.

Pipeline stage between ROI extraction and region growing: keep only
interior pixels as seed candidates (no background anywhere in their mask
window), embed them as normalized (x, y, intensity) features, cluster
with K-means, and snap each centroid to its nearest candidate. Every ROI
that has candidates ends up with at least one seed; if clustering left it
empty, a fallback seed nearest the ROI centroid is added and flagged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import kmeans as km
from .raster import BinaryMask, GrayImage, LabelMap
from .roi import Roi


@dataclass(frozen=True)
class SeedCandidate:
    x: int
    y: int
    intensity: int
    roi_id: int


@dataclass(frozen=True)
class Seed:
    x: int
    y: int
    intensity: int
    roi_id: int
    cluster_id: int
    fallback: bool


def interior_candidates(
    mask: BinaryMask, labels: LabelMap, img: GrayImage, r_mask: int
) -> list[SeedCandidate]:
    """Foreground pixels whose full r_mask x r_mask window is foreground.

    Out-of-image counts as background, so the window may not extend past
    the border. Candidates come back in raster-scan order. Pixels whose
    label is 0 (e.g. removed by the small-component filter) are skipped.
    """
    if r_mask < 1 or r_mask % 2 == 0:
        raise ValueError(f"mask window size must be odd and >= 1, got {r_mask}")
    if not (mask.bits.shape == labels.labels.shape == img.pixels.shape):
        raise ValueError("mask, labels and image dimensions must match")
    radius = r_mask // 2
    if radius == 0:
        interior = mask.bits
    else:
        padded = np.pad(mask.bits, radius, mode="constant", constant_values=False)
        interior = sliding_window_view(padded, (r_mask, r_mask)).all(axis=(2, 3))
    ys, xs = np.nonzero(interior & (labels.labels > 0))
    pix = img.pixels
    lab = labels.labels
    return [
        SeedCandidate(int(x), int(y), int(pix[y, x]), int(lab[y, x]))
        for y, x in zip(ys, xs)
    ]


def extract_features(
    cands: list[SeedCandidate],
    img: GrayImage,
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0),
) -> np.ndarray:
    """(n, 3) array of (x, y, intensity) normalized to [0, 1] per axis.

    Degenerate axes (width or height 1) map to 0. The optional per-axis
    weights rescale features before clustering; the default keeps position
    and intensity on equal footing.
    """
    if not cands:
        raise ValueError("empty candidate list")
    span_x = max(img.width - 1, 1)
    span_y = max(img.height - 1, 1)
    feats = np.array(
        [(c.x / span_x, c.y / span_y, c.intensity / 255.0) for c in cands],
        dtype=np.float64,
    )
    return feats * np.asarray(weights, dtype=np.float64)


def select_seeds(
    cands: list[SeedCandidate],
    feats: np.ndarray,
    rois: list[Roi],
    k: int,
    rng_seed: int = 0,
) -> list[Seed]:
    """Cluster candidates and return one seed per centroid plus ROI fallbacks.

    Each centroid snaps to the candidate nearest to it in feature space
    (ties to the lowest raster index), so seeds are always real candidate
    pixels. Duplicate snaps are dropped. ROIs that own candidates but got
    no seed receive a fallback: their candidate nearest (in image space)
    to the ROI centroid, flagged fallback=True.
    """
    if not cands:
        raise ValueError("no seed candidates")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > len(cands):
        raise ValueError(f"k={k} exceeds the {len(cands)} available seed candidates")

    model = km.kmeans(feats, k, rng_seed=rng_seed)
    seeds: list[Seed] = []
    used_pixels: set[tuple[int, int]] = set()
    for cluster_id, centroid in enumerate(model.centroids):
        idx = int(((feats - centroid[None, :]) ** 2).sum(axis=1).argmin())
        c = cands[idx]
        if (c.x, c.y) in used_pixels:
            continue
        used_pixels.add((c.x, c.y))
        seeds.append(Seed(c.x, c.y, c.intensity, c.roi_id, cluster_id, fallback=False))

    covered = {s.roi_id for s in seeds}
    by_roi: dict[int, list[int]] = {}
    for i, c in enumerate(cands):
        by_roi.setdefault(c.roi_id, []).append(i)
    for roi in rois:
        if roi.id in covered or roi.id not in by_roi:
            continue
        cx, cy = roi.centroid
        best_idx = min(
            by_roi[roi.id],
            key=lambda i: ((cands[i].x - cx) ** 2 + (cands[i].y - cy) ** 2, i),
        )
        c = cands[best_idx]
        cluster_id = km.assign(model, feats[best_idx])
        seeds.append(Seed(c.x, c.y, c.intensity, c.roi_id, cluster_id, fallback=True))
    return seeds


def seedless_rois(cands: list[SeedCandidate], rois: list[Roi]) -> list[int]:
    """Ids of ROIs with no interior candidate at all (cannot be seeded)."""
    with_cands = {c.roi_id for c in cands}
    return [r.id for r in rois if r.id not in with_cands]
