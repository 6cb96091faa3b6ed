"""Connected-component extraction of regions of interest from a binary mask."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .raster import BinaryMask, LabelMap


class Connectivity(enum.Enum):
    FOUR = "four"
    EIGHT = "eight"


_STRUCTURES = {
    Connectivity.FOUR: np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool),
    Connectivity.EIGHT: np.ones((3, 3), dtype=bool),
}


@dataclass(frozen=True)
class Roi:
    """Summary of one connected foreground region."""

    id: int
    pixel_count: int
    bbox: tuple[int, int, int, int]  # (min_x, min_y, max_x, max_y), inclusive
    centroid: tuple[float, float]  # (x, y)


def _roi_stats(labels: np.ndarray, n: int) -> list[Roi]:
    flat = labels.ravel()
    counts = np.bincount(flat, minlength=n + 1)
    h, w = labels.shape
    ys, xs = np.nonzero(labels)
    ids = labels[ys, xs]
    sum_x = np.bincount(ids, weights=xs, minlength=n + 1)
    sum_y = np.bincount(ids, weights=ys, minlength=n + 1)
    boxes = ndimage.find_objects(labels, max_label=n)
    rois = []
    for i in range(1, n + 1):
        sy, sx = boxes[i - 1]
        rois.append(
            Roi(
                id=i,
                pixel_count=int(counts[i]),
                bbox=(sx.start, sy.start, sx.stop - 1, sy.stop - 1),
                centroid=(sum_x[i] / counts[i], sum_y[i] / counts[i]),
            )
        )
    return rois


def connected_components(mask: BinaryMask, c: Connectivity) -> tuple[LabelMap, list[Roi]]:
    """Partition foreground pixels into maximal connected components.

    Labels are assigned 1..n in raster-scan order of each component's
    first pixel; background stays 0.
    """
    raw, n = ndimage.label(mask.bits, structure=_STRUCTURES[c])
    if n == 0:
        return LabelMap(np.zeros(mask.bits.shape, dtype=np.int32)), []
    # renumber by first raster occurrence; scipy's ordering is not contractual
    flat = raw.ravel()
    first_seen = np.full(n + 1, flat.size, dtype=np.int64)
    np.minimum.at(first_seen, flat, np.arange(flat.size))
    order = np.argsort(first_seen[1:], kind="stable")  # old label-1 -> rank
    remap = np.zeros(n + 1, dtype=np.int32)
    remap[order + 1] = np.arange(1, n + 1, dtype=np.int32)
    labels = remap[raw]
    return LabelMap(labels), _roi_stats(labels, n)


def filter_small(
    rois: list[Roi], labels: LabelMap, min_area: int
) -> tuple[LabelMap, list[Roi]]:
    """Relabel components smaller than min_area to background; survivor ids
    are compacted to 1..m preserving their original order."""
    if min_area < 0:
        raise ValueError(f"min_area must be >= 0, got {min_area}")
    survivors = [r for r in rois if r.pixel_count >= min_area]
    if len(survivors) == len(rois):
        return labels, list(rois)
    remap = np.zeros(len(rois) + 1, dtype=np.int32)
    out_rois = []
    for new_id, r in enumerate(survivors, start=1):
        remap[r.id] = new_id
        out_rois.append(Roi(new_id, r.pixel_count, r.bbox, r.centroid))
    return LabelMap(remap[labels.labels]), out_rois
