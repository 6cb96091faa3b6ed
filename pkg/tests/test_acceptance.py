"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
Oracles live in tests/oracles.py and are independent reimplementations.
"""

import time

import numpy as np
import pytest
from click.testing import CliRunner

from oracles import (
    kmeans_exhaustive_sse,
    mean_acceptance_oracle,
    median_oracle,
    otsu_oracle,
    partitions_equal,
    union_find_components,
)
from scenes import blob_scene, bridge_fixture, clustered_points, random_mask
from seedgrow import (
    BinaryMask,
    Connectivity,
    GrayImage,
    GrowConfig,
    Polarity,
    SegmentationConfig,
    connected_components,
    dice_match,
    grow_regions,
    histogram,
    kmeans,
    median_filter,
    otsu_threshold,
    save_gray_png,
    save_label_png,
    segment_image,
)
from seedgrow.cli import main

MATRIX = [(n, sigma) for n in (2, 3, 4, 5, 6) for sigma in (5.0, 10.0, 20.0)]


@pytest.fixture(scope="module")
def matrix_runs():
    runs = []
    for i, (n, sigma) in enumerate(MATRIX):
        img, gt, blobs = blob_scene(n, noise_sigma=sigma, rng_seed=100 + i)
        cfg = SegmentationConfig(k=n)
        start = time.perf_counter()
        result = segment_image(img, cfg)
        elapsed = time.perf_counter() - start
        runs.append((n, sigma, img, gt, cfg, result, elapsed))
    return runs


def test_criterion_1_otsu_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(1001)
    checked = 0
    for i in range(1000):
        if i % 2:
            h = rng.integers(0, 60, size=256)
            if h.sum() == 0:
                h[rng.integers(0, 256)] = 1
        else:
            h = np.zeros(256, dtype=np.int64)
            bins = rng.choice(256, size=int(rng.integers(1, 10)), replace=False)
            h[bins] = rng.integers(1, 500, size=len(bins))
        got = otsu_threshold(h)
        t, v = otsu_oracle(h)
        assert got.threshold == t
        assert got.between_class_variance == pytest.approx(v, rel=1e-9, abs=1e-12)
        checked += 1
    for _ in range(100):
        img = GrayImage(rng.integers(0, 256, size=(64, 64), dtype=np.uint8))
        h = histogram(img)
        got = otsu_threshold(h)
        t, v = otsu_oracle(h)
        assert got.threshold == t
        assert got.between_class_variance == pytest.approx(v, rel=1e-9)
        checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\ncriterion 1 PASS: otsu == exhaustive-scan oracle on {checked} inputs "
          f"({elapsed:.2f} s)")


def test_criterion_2_median_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(1002)
    checked = 0
    for _ in range(100):
        img = GrayImage(rng.integers(0, 256, size=(32, 32), dtype=np.uint8))
        for radius in (0, 1, 2, 3):
            assert np.array_equal(
                median_filter(img, radius).pixels, median_oracle(img.pixels, radius)
            )
            checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\ncriterion 2 PASS: median filter == window-sort oracle on {checked} "
          f"image/radius pairs ({elapsed:.2f} s)")


def test_criterion_3_connected_components_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(1003)
    checked = 0
    for _ in range(200):
        bits = random_mask(rng, 32, 32, rng.uniform(0.15, 0.75))
        for conn in Connectivity:
            labels, rois = connected_components(BinaryMask(bits), conn)
            oracle = union_find_components(bits, eight=(conn is Connectivity.EIGHT))
            assert partitions_equal(labels.labels, oracle)
            assert len(rois) == len(np.unique(oracle[oracle > 0]))
            checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\ncriterion 3 PASS: components match union-find oracle on {checked} "
          f"mask/connectivity pairs ({elapsed:.2f} s)")


def test_criterion_4_kmeans_quality():
    start = time.perf_counter()
    rng = np.random.default_rng(1004)
    exact = 0
    for _ in range(100):
        pts, k = clustered_points(rng)
        best = kmeans_exhaustive_sse(pts, k)
        got = kmeans(pts, k).inertia
        assert got >= best - 1e-9
        assert got <= best * 1.05 + 1e-12
        exact += abs(got - best) <= 1e-9 * max(best, 1e-9)

    # the three worked examples, exactly
    pts = np.array([[0.1, 0.2, 0.3], [0.4, 0.5, 0.6], [0.7, 0.8, 0.9]])
    full = kmeans(pts, 3)
    assert full.inertia == 0.0
    assert {tuple(c) for c in full.centroids} == {tuple(p) for p in pts}
    single = kmeans(pts, 1)
    assert single.centroids[0] == pytest.approx(pts.mean(axis=0))
    quad = np.array([[v, 0.0, 0.0] for v in (0.0, 0.04, 0.9, 0.94)])
    model = kmeans(quad, 2)
    assert sorted(float(c[0]) for c in model.centroids) == pytest.approx([0.02, 0.92])
    assert model.assignments[0] == model.assignments[1] != model.assignments[2]
    assert model.assignments[2] == model.assignments[3]

    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"\ncriterion 4 PASS: inertia within 5% of exhaustive optimum on 100 "
          f"instances ({exact} exact), worked examples exact ({elapsed:.2f} s)")


def test_criterion_5_seed_criteria():
    start = time.perf_counter()
    scenes = [
        (n, sigma, rep)
        for n in (1, 2, 3, 4, 5)
        for sigma in (0.0, 10.0)
        for rep in range(5)
    ]
    assert len(scenes) == 50
    seeds_checked = 0
    for n, sigma, rep in scenes:
        img, _, _ = blob_scene(n, noise_sigma=sigma, rng_seed=7000 + 31 * rep + n,
                               size=128, radius=10)
        result = segment_image(img, SegmentationConfig(k=n))
        labels = result.roi_labels.labels
        h, w = labels.shape
        radius = result.config.seed_mask_r // 2
        for s in result.seeds:
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    yy, xx = s.y + dy, s.x + dx
                    assert 0 <= yy < h and 0 <= xx < w  # window inside image
                    assert labels[yy, xx] == s.roi_id  # foreground, inside own ROI
            seeds_checked += 1
        rois_with_candidates = {c.roi_id for c in result.candidates}
        seeded = {s.roi_id for s in result.seeds}
        assert rois_with_candidates <= seeded
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"\ncriterion 5 PASS: {seeds_checked} seeds on 50 scenes satisfy the "
          f"window/ROI/coverage criteria ({elapsed:.2f} s)")


def test_criterion_6_no_explosion(matrix_runs):
    for n, sigma, img, gt, cfg, result, _ in matrix_runs:
        labeled = result.labels.labels > 0
        oracle_acc = mean_acceptance_oracle(
            result.filtered.pixels, result.otsu.threshold, cfg.grow_radius, bright=True
        )
        assert not (labeled & ~oracle_acc).any()

        # radius 0: grown set == union of seeded thresholded components
        flat_cfg = GrowConfig(
            threshold=result.otsu.threshold,
            polarity=Polarity.BRIGHT_FOREGROUND,
            grow_radius=0,
            connectivity=Connectivity.FOUR,
        )
        flat = grow_regions(result.filtered, result.seeds, flat_cfg)
        fg = result.filtered.pixels > result.otsu.threshold
        oracle_cc = union_find_components(fg, eight=False)
        seeded_roots = sorted({int(oracle_cc[s.y, s.x]) for s in result.seeds})
        assert np.array_equal(flat.labels.labels > 0, np.isin(oracle_cc, seeded_roots))
    print(f"\ncriterion 6 PASS: labels within acceptance mask and radius-0 growth "
          f"matches seeded components on {len(matrix_runs)} runs")


def test_criterion_7_end_to_end_synthetic(matrix_runs):
    for n, sigma, img, gt, cfg, result, elapsed in matrix_runs:
        assert result.labels.n_regions == n, (n, sigma)
        report = dice_match(result.labels, gt)
        assert report.mean_dice >= 0.90, (n, sigma, report.mean_dice)
        assert not report.under_segmented, (n, sigma)
        assert result.labels.n_regions <= cfg.k
        assert elapsed < 1.0, (n, sigma, elapsed)
    dices = [dice_match(r.labels, gt).mean_dice
             for _, _, _, gt, _, r, _ in matrix_runs]
    print(f"\ncriterion 7 PASS: {len(matrix_runs)} runs, exactly N regions each, "
          f"mean dice {min(dices):.3f}..{max(dices):.3f}, all < 1 s")


def test_criterion_8_bridge_leak_rejection():
    img, seeds = bridge_fixture()
    with_mean = grow_regions(
        img, seeds, GrowConfig(128, Polarity.BRIGHT_FOREGROUND, grow_radius=1)
    )
    grown = with_mean.labels.labels
    # two regions that do not touch: the bridge interior was rejected
    comps, rois = connected_components(BinaryMask(grown > 0), Connectivity.FOUR)
    assert len(rois) == 2
    # each connected part carries exactly one region label
    for roi in rois:
        part_labels = np.unique(grown[comps.labels == roi.id])
        assert len(part_labels) == 1

    flat = grow_regions(
        img, seeds, GrowConfig(128, Polarity.BRIGHT_FOREGROUND, grow_radius=0)
    )
    _, flat_rois = connected_components(BinaryMask(flat.labels.labels > 0), Connectivity.FOUR)
    assert len(flat_rois) == 1  # the bridge conducts: one fused object
    print("\ncriterion 8 PASS: bridge fixture gives two separated regions at "
          "radius 1 and one fused object at radius 0")


def test_criterion_9_determinism(tmp_path):
    runner = CliRunner()
    reps = 10

    # segment: the criterion-7 matrix, rerun `reps` times
    inputs = []
    for i, (n, sigma) in enumerate(MATRIX):
        img, gt, _ = blob_scene(n, noise_sigma=sigma, rng_seed=100 + i)
        path = tmp_path / f"in_{i}.png"
        save_gray_png(img, path)
        inputs.append((path, n))
        if i == 0:
            gt_path = tmp_path / "gt_0.png"
            save_label_png(gt, gt_path)
    for i, (path, n) in enumerate(inputs):
        baseline = None
        for rep in range(reps):
            prefix = tmp_path / f"run_{i}_{rep}"
            result = runner.invoke(main, ["segment", str(path), str(prefix),
                                          "--k", str(n)])
            assert result.exit_code == 0, result.output
            blob = tuple((tmp_path / f"run_{i}_{rep}{ext}").read_bytes()
                         for ext in (".labels.png", ".seeds.png", ".report.json"))
            if baseline is None:
                baseline = blob
            else:
                assert blob == baseline, f"run {i} rep {rep} differs"

    # synth, eval and otsu are deterministic too
    synth_args = ["synth", str(tmp_path / "s"), "--width", "96", "--height", "96",
                  "--noise-sigma", "8", "--rng-seed", "3",
                  "--blob", "30,30,9,200", "--blob", "66,66,9,210"]
    synth_bytes = None
    for _ in range(reps):
        assert runner.invoke(main, synth_args).exit_code == 0
        blob = ((tmp_path / "s.png").read_bytes(), (tmp_path / "s.gt.png").read_bytes())
        synth_bytes = synth_bytes or blob
        assert blob == synth_bytes

    first_labels = tmp_path / "run_0_0.labels.png"
    eval_bytes = None
    for rep in range(reps):
        out = tmp_path / f"eval_{rep}.json"
        assert runner.invoke(main, ["eval", str(first_labels), str(gt_path),
                                    str(out)]).exit_code == 0
        payload = out.read_bytes()
        eval_bytes = eval_bytes or payload
        assert payload == eval_bytes

    otsu_out = None
    for _ in range(reps):
        result = runner.invoke(main, ["otsu", str(inputs[0][0])])
        assert result.exit_code == 0
        otsu_out = otsu_out or result.output
        assert result.output == otsu_out

    print(f"\ncriterion 9 PASS: byte-identical outputs for segment ({reps}x matrix), "
          f"synth, eval and otsu")
