"""Deterministic synthetic scene layouts shared by the test modules.

Blob centers keep a large pairwise separation relative to blob radius, so
seed clustering has a clean structure to find and the end-to-end checks
fail only when the pipeline itself is wrong.
"""

from __future__ import annotations

import numpy as np

from seedgrow import BlobSpec, GrayImage, LabelMap, Seed, generate_blobs

# layouts for 1..6 blobs on a 256x256 canvas
_CENTERS = {
    1: [(128, 128)],
    2: [(72, 128), (184, 128)],
    3: [(128, 64), (64, 192), (192, 192)],
    4: [(72, 72), (184, 72), (72, 184), (184, 184)],
    5: [(72, 72), (184, 72), (72, 184), (184, 184), (128, 128)],
    6: [
        (208, 128), (168, 197), (88, 197),
        (48, 128), (88, 59), (168, 59),
    ],
}


def blob_scene(
    n_blobs: int,
    noise_sigma: float = 0.0,
    rng_seed: int = 0,
    size: int = 256,
    radius: int = 16,
    bg: int = 40,
) -> tuple[GrayImage, LabelMap, list[BlobSpec]]:
    scale = size / 256.0
    blobs = [
        BlobSpec(round(cx * scale), round(cy * scale), radius, 200 + 5 * i)
        for i, (cx, cy) in enumerate(_CENTERS[n_blobs])
    ]
    img, gt = generate_blobs(size, size, blobs, bg, noise_sigma, rng_seed)
    return img, gt, blobs


def random_mask(rng: np.random.Generator, h: int, w: int, density: float) -> np.ndarray:
    return rng.random((h, w)) < density


def bridge_fixture() -> tuple[GrayImage, list[Seed]]:
    """Two bright 6x6 blocks joined by a 1-px-wide bright bridge.

    Threshold 128 with bright polarity: at grow radius 0 the whole
    dumbbell is one thresholded component, while at radius 1 the window
    mean of the inner bridge pixels ((3*255)/9 = 85) falls below the
    threshold and the bridge breaks.
    """
    arr = np.zeros((16, 18), dtype=np.uint8)
    arr[5:11, 1:7] = 255  # left block
    arr[5:11, 11:17] = 255  # right block
    arr[7, 7:11] = 255  # bridge
    seeds = [
        Seed(3, 7, 255, 1, 0, False),
        Seed(13, 7, 255, 2, 1, False),
    ]
    return GrayImage(arr), seeds


def clustered_points(rng: np.random.Generator, k_range=(2, 3), n_max=12):
    """Random small clustering instance with genuine k-cluster structure.

    Every component owns at least one point and centers are well
    separated, so a correct clusterer should recover the optimum; on
    structureless uniform points any single-start Lloyd variant can land
    in local optima worse than 5%, which would test luck, not code.
    """
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    n = int(rng.integers(k + 2, n_max + 1))
    while True:
        centers = rng.random((k, 3))
        sep = min(
            np.linalg.norm(centers[i] - centers[j])
            for i in range(k)
            for j in range(i + 1, k)
        )
        if sep > 0.4:
            break
    comp = list(range(k)) + [int(rng.integers(0, k)) for _ in range(n - k)]
    pts = np.array([centers[c] + rng.normal(0, 0.05, 3) for c in comp])
    return pts, k
