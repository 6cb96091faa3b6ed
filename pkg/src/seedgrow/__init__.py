"""Automatic seeded region growing for grayscale image segmentation."""

from .evaluate import EvalReport, RegionMatch, dice_match
from .grow import GrowConfig, GrowResult, NeighborhoodRule, accept, acceptance_mask, grow_regions
from .kmeans import KMeansModel, assign, kmeans
from .pipeline import (
    PipelineError,
    PipelineResult,
    SegmentationConfig,
    run_report,
    segment_image,
)
from .preprocess import median_filter
from .raster import (
    BinaryMask,
    GrayImage,
    LabelMap,
    histogram,
    load_gray,
    load_label_png,
    save_gray_png,
    save_label_png,
)
from .roi import Connectivity, Roi, connected_components, filter_small
from .seeds import Seed, SeedCandidate, extract_features, interior_candidates, select_seeds
from .synth import BlobSpec, generate_blobs
from .threshold import OtsuResult, Polarity, binarize, otsu_threshold

__version__ = "0.1.0"

__all__ = [
    "BinaryMask",
    "BlobSpec",
    "Connectivity",
    "EvalReport",
    "GrayImage",
    "GrowConfig",
    "GrowResult",
    "KMeansModel",
    "LabelMap",
    "NeighborhoodRule",
    "OtsuResult",
    "PipelineError",
    "PipelineResult",
    "Polarity",
    "RegionMatch",
    "Roi",
    "Seed",
    "SeedCandidate",
    "SegmentationConfig",
    "accept",
    "acceptance_mask",
    "assign",
    "binarize",
    "connected_components",
    "dice_match",
    "extract_features",
    "filter_small",
    "generate_blobs",
    "grow_regions",
    "histogram",
    "interior_candidates",
    "kmeans",
    "load_gray",
    "load_label_png",
    "median_filter",
    "otsu_threshold",
    "run_report",
    "save_gray_png",
    "save_label_png",
    "segment_image",
    "select_seeds",
]
