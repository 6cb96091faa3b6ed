"""Deterministic K-means (Lloyd's algorithm) for seed clustering.

Initialization is greedy farthest-point: the first center is the point
nearest the dataset mean, each following center is the point maximizing
its minimum distance to the centers chosen so far, ties going to the
lowest input index. The same inputs therefore always produce the same
model; rng_seed is accepted for future stochastic variants but the
default path never consumes it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class KMeansModel:
    centroids: np.ndarray  # (k, dim)
    assignments: np.ndarray  # (n,) cluster index per input point
    inertia: float  # sum of squared distances to assigned centroids
    iterations: int
    inertia_history: list[float] = field(default_factory=list, repr=False)


def _nearest(points: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1), d2


def _init_farthest_point(points: np.ndarray, k: int) -> np.ndarray:
    mean = points.mean(axis=0)
    chosen = [int(((points - mean) ** 2).sum(axis=1).argmin())]
    min_d2 = ((points - points[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < k:
        nxt = int(min_d2.argmax())
        chosen.append(nxt)
        min_d2 = np.minimum(min_d2, ((points - points[nxt]) ** 2).sum(axis=1))
    return points[chosen].copy()


def _fill_empty_clusters(
    points: np.ndarray, centroids: np.ndarray, assign: np.ndarray, d2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    # reseed each empty cluster with the point currently farthest from its
    # assigned centroid, then reassign; repeats until every cluster owns a point
    k = centroids.shape[0]
    taken: set[int] = set()
    for _ in range(k):
        sizes = np.bincount(assign, minlength=k)
        empty = np.nonzero(sizes == 0)[0]
        if empty.size == 0:
            break
        dist_own = d2[np.arange(len(points)), assign].copy()
        for idx in taken:
            dist_own[idx] = -1.0
        for c in empty:
            far = int(dist_own.argmax())
            centroids[c] = points[far]
            taken.add(far)
            dist_own[far] = -1.0
        assign, d2 = _nearest(points, centroids)
    return assign, d2


def kmeans(points, k: int, rng_seed: int = 0, max_iter: int = 100, tol: float = 1e-6) -> KMeansModel:
    """Cluster points into k groups; requires k distinct points."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("points must be a non-empty 2D array")
    n_distinct = np.unique(pts, axis=0).shape[0]
    if not 1 <= k <= n_distinct:
        raise ValueError(f"k must lie in [1, {n_distinct}] (distinct points), got {k}")

    centroids = _init_farthest_point(pts, k)
    history: list[float] = []
    assign = np.full(pts.shape[0], -1)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        new_assign, d2 = _nearest(pts, centroids)
        new_assign, d2 = _fill_empty_clusters(pts, centroids, new_assign, d2)
        history.append(float(d2[np.arange(len(pts)), new_assign].sum()))
        if np.array_equal(new_assign, assign):
            break  # exact fixed point: centroids already equal cluster means
        assign = new_assign
        means = np.empty_like(centroids)
        for c in range(k):
            means[c] = pts[assign == c].mean(axis=0)
        shift = np.sqrt(((means - centroids) ** 2).sum(axis=1)).max()
        centroids = means
        if shift < tol:
            break

    assign, d2 = _nearest(pts, centroids)
    inertia = float(d2[np.arange(len(pts)), assign].sum())
    return KMeansModel(centroids, assign, inertia, iterations, history)


def assign(model: KMeansModel, p) -> int:
    """Index of the nearest centroid (ties to the lowest index)."""
    point = np.asarray(p, dtype=np.float64)
    d2 = ((model.centroids - point[None, :]) ** 2).sum(axis=1)
    return int(d2.argmin())
