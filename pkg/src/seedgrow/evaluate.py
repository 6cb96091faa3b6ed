"""Segmentation quality metrics against ground-truth label maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import LabelMap


@dataclass(frozen=True)
class RegionMatch:
    gt_id: int
    pred_id: int
    dice: float


@dataclass(frozen=True)
class EvalReport:
    n_gt_regions: int
    n_pred_regions: int
    matches: list[RegionMatch]
    mean_dice: float
    over_segmented: bool
    under_segmented: bool


def dice_match(pred: LabelMap, gt: LabelMap) -> EvalReport:
    """Greedy one-to-one region matching by descending overlap.

    dice(A, B) = 2|A n B| / (|A| + |B|). Unmatched ground-truth regions
    contribute 0 to mean_dice, whose denominator is the ground-truth
    region count. under_segmented flags any predicted region overlapping
    two or more ground-truth regions at dice >= 0.1; over_segmented flags
    more predicted regions than ground-truth ones.
    """
    if pred.labels.shape != gt.labels.shape:
        raise ValueError(
            f"dimension mismatch: prediction {pred.labels.shape} vs ground truth {gt.labels.shape}"
        )
    n_gt = gt.n_regions
    n_pred = pred.n_regions
    gt_sizes = np.bincount(gt.labels.ravel(), minlength=n_gt + 1)
    pred_sizes = np.bincount(pred.labels.ravel(), minlength=n_pred + 1)

    # joint tally of overlapping (gt, pred) foreground pairs
    both = (gt.labels > 0) & (pred.labels > 0)
    g = gt.labels[both].astype(np.int64)
    p = pred.labels[both].astype(np.int64)
    inter = np.bincount(g * (n_pred + 1) + p, minlength=(n_gt + 1) * (n_pred + 1))
    inter = inter.reshape(n_gt + 1, n_pred + 1)

    # ties on overlap break by pair dice so the outcome does not depend on
    # label numbering; ids only settle exact double-ties
    pairs = [
        (int(inter[gi, pi]), 2.0 * inter[gi, pi] / (gt_sizes[gi] + pred_sizes[pi]), gi, pi)
        for gi in range(1, n_gt + 1)
        for pi in range(1, n_pred + 1)
        if inter[gi, pi] > 0
    ]
    pairs.sort(key=lambda t: (-t[0], -t[1], t[2], t[3]))
    used_gt: set[int] = set()
    used_pred: set[int] = set()
    matches = []
    for _, dice, gi, pi in pairs:
        if gi in used_gt or pi in used_pred:
            continue
        used_gt.add(gi)
        used_pred.add(pi)
        matches.append(RegionMatch(gi, pi, dice))

    if n_gt == 0:
        mean_dice = 1.0 if n_pred == 0 else 0.0
    else:
        mean_dice = sum(m.dice for m in matches) / n_gt

    under = False
    for pi in range(1, n_pred + 1):
        hits = 0
        for gi in range(1, n_gt + 1):
            pair_dice = 2.0 * inter[gi, pi] / (gt_sizes[gi] + pred_sizes[pi])
            if pair_dice >= 0.1:
                hits += 1
        if hits >= 2:
            under = True
            break

    return EvalReport(
        n_gt_regions=n_gt,
        n_pred_regions=n_pred,
        matches=matches,
        mean_dice=float(mean_dice),
        over_segmented=n_pred > n_gt,
        under_segmented=under,
    )
