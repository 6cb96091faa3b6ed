"""End-to-end segmentation pipeline and its machine-readable run report.

Stage order: median filter, Otsu threshold, binarize, connected
components, small-component filter, interior candidate filter, feature
extraction, K-means seed selection, region growing. The report echoes the
full configuration, so feeding the echoed values back reproduces the run
exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .evaluate import EvalReport
from .grow import GrowConfig, GrowResult, NeighborhoodRule, grow_regions
from .preprocess import median_filter
from .raster import BinaryMask, GrayImage, LabelMap, histogram
from .roi import Connectivity, Roi, connected_components, filter_small
from .seeds import (
    Seed,
    SeedCandidate,
    extract_features,
    interior_candidates,
    seedless_rois,
    select_seeds,
)
from .threshold import OtsuResult, Polarity, binarize, otsu_threshold

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SegmentationConfig:
    k: int = 4
    seed_mask_r: int = 3
    median_radius: int = 1
    grow_radius: int = 1
    connectivity: Connectivity = Connectivity.FOUR
    polarity: Polarity = Polarity.BRIGHT_FOREGROUND
    min_area: int = 9
    rng_seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.seed_mask_r < 1 or self.seed_mask_r % 2 == 0:
            raise ValueError(f"seed_mask_r must be odd and >= 1, got {self.seed_mask_r}")
        if self.median_radius < 0:
            raise ValueError(f"median_radius must be >= 0, got {self.median_radius}")
        if self.grow_radius < 0:
            raise ValueError(f"grow_radius must be >= 0, got {self.grow_radius}")
        if self.min_area < 0:
            raise ValueError(f"min_area must be >= 0, got {self.min_area}")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed_mask_r": self.seed_mask_r,
            "median_radius": self.median_radius,
            "grow_radius": self.grow_radius,
            "connectivity": self.connectivity.value,
            "polarity": self.polarity.value,
            "min_area": self.min_area,
            "rng_seed": self.rng_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SegmentationConfig":
        return cls(
            k=int(d["k"]),
            seed_mask_r=int(d["seed_mask_r"]),
            median_radius=int(d["median_radius"]),
            grow_radius=int(d["grow_radius"]),
            connectivity=Connectivity(d["connectivity"]),
            polarity=Polarity(d["polarity"]),
            min_area=int(d["min_area"]),
            rng_seed=int(d["rng_seed"]),
        )


@dataclass
class PipelineResult:
    config: SegmentationConfig
    filtered: GrayImage
    otsu: OtsuResult
    mask: BinaryMask
    roi_labels: LabelMap  # after the small-component filter
    rois: list[Roi]
    candidates: list[SeedCandidate]
    seeds: list[Seed]
    grow: GrowResult
    warnings: list[str] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)

    @property
    def labels(self) -> LabelMap:
        return self.grow.labels


class PipelineError(ValueError):
    """Raised when a pipeline stage cannot produce a usable result."""


def segment_image(img: GrayImage, cfg: SegmentationConfig) -> PipelineResult:
    """Run the full pipeline on one image.

    Raises PipelineError when thresholding finds no region of interest or
    when k exceeds the number of interior seed candidates.
    """
    timings: dict[str, float] = {}
    warnings: list[str] = []

    def clock(name: str, fn):
        start = time.perf_counter()
        out = fn()
        timings[name] = (time.perf_counter() - start) * 1000.0
        return out

    filtered = clock("median_filter", lambda: median_filter(img, cfg.median_radius))
    otsu = clock("otsu", lambda: otsu_threshold(histogram(filtered)))
    mask = clock("binarize", lambda: binarize(filtered, otsu.threshold, cfg.polarity))
    labels, rois = clock("components", lambda: connected_components(mask, cfg.connectivity))
    labels, rois = clock("filter_small", lambda: filter_small(rois, labels, cfg.min_area))
    if not rois:
        raise PipelineError(
            f"no ROI found: thresholding at {otsu.threshold} with {cfg.polarity.value} "
            f"polarity left no component of at least {cfg.min_area} px"
        )

    # the small-component filter may have returned specks to background, so
    # candidate windows are tested against the filtered foreground
    eff_mask = BinaryMask(labels.labels > 0)
    cands = clock(
        "candidates", lambda: interior_candidates(eff_mask, labels, filtered, cfg.seed_mask_r)
    )
    if cfg.k > len(cands):
        raise PipelineError(
            f"k={cfg.k} exceeds the {len(cands)} interior seed candidates found "
            f"(window {cfg.seed_mask_r}x{cfg.seed_mask_r}); lower --k or --seed-mask-r"
        )
    for roi_id in seedless_rois(cands, rois):
        warnings.append(
            f"ROI {roi_id} has no interior candidate at window "
            f"{cfg.seed_mask_r}x{cfg.seed_mask_r} and stays seedless"
        )

    feats = clock("features", lambda: extract_features(cands, filtered))
    seeds = clock("seeds", lambda: select_seeds(cands, feats, rois, cfg.k, cfg.rng_seed))
    grow_cfg = GrowConfig(
        threshold=otsu.threshold,
        polarity=cfg.polarity,
        grow_radius=cfg.grow_radius,
        connectivity=cfg.connectivity,
        neighborhood_rule=NeighborhoodRule.PIXEL_AND_MEAN,
    )
    result = clock("grow", lambda: grow_regions(filtered, seeds, grow_cfg))
    return PipelineResult(
        config=cfg,
        filtered=filtered,
        otsu=otsu,
        mask=mask,
        roi_labels=labels,
        rois=rois,
        candidates=cands,
        seeds=seeds,
        grow=result,
        warnings=warnings,
        timings_ms=timings,
    )


def run_report(result: PipelineResult, include_timings: bool = False) -> dict:
    """JSON-ready report; identical runs produce identical reports unless
    timings are explicitly included."""
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": result.config.to_dict(),
        "grow_order": "best_first_mean_diff_fifo",
        "otsu": {
            "threshold": result.otsu.threshold,
            "between_class_variance": result.otsu.between_class_variance,
        },
        "rois": {
            "count": len(result.rois),
            "regions": [
                {
                    "id": r.id,
                    "pixel_count": r.pixel_count,
                    "bbox": list(r.bbox),
                    "centroid": [r.centroid[0], r.centroid[1]],
                }
                for r in result.rois
            ],
        },
        "candidates": {"count": len(result.candidates)},
        "seeds": [
            {
                "x": s.x,
                "y": s.y,
                "intensity": s.intensity,
                "roi_id": s.roi_id,
                "cluster_id": s.cluster_id,
                "fallback": s.fallback,
            }
            for s in result.seeds
        ],
        "regions": {
            "sizes": list(result.grow.region_sizes),
            "frontier_rejections": result.grow.frontier_rejections,
        },
        "warnings": list(result.warnings),
    }
    if include_timings:
        report["timings_ms"] = {k: round(v, 3) for k, v in result.timings_ms.items()}
    return report


def eval_report_dict(report: EvalReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n_gt_regions": report.n_gt_regions,
        "n_pred_regions": report.n_pred_regions,
        "matches": [
            {"gt_id": m.gt_id, "pred_id": m.pred_id, "dice": m.dice} for m in report.matches
        ],
        "mean_dice": report.mean_dice,
        "over_segmented": report.over_segmented,
        "under_segmented": report.under_segmented,
    }


def mark_seeds(img: GrayImage, seeds: list[Seed], polarity: Polarity) -> GrayImage:
    """Copy of the image with seed pixels set to the intensity opposite the
    foreground polarity, so marks stay visible on the objects."""
    marked = img.pixels.copy()
    value = 0 if polarity is Polarity.BRIGHT_FOREGROUND else 255
    for s in seeds:
        marked[s.y, s.x] = value
    return GrayImage(marked)
