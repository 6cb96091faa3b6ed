"""Batch command-line front end.

Commands: ``segment`` (full pipeline on one image or a directory),
``synth`` (synthetic ground-truth scenes), ``eval`` (Dice report of a
prediction against ground truth), ``otsu`` (print the threshold).
Outputs are deterministic: rerunning any command with the same inputs
and flags writes byte-identical files.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from .evaluate import dice_match
from .pipeline import (
    PipelineError,
    SegmentationConfig,
    eval_report_dict,
    mark_seeds,
    run_report,
    segment_image,
)
from .raster import (
    histogram,
    load_gray,
    load_label_png,
    save_gray_png,
    save_label_png,
)
from .roi import Connectivity
from .synth import BlobSpec, generate_blobs
from .threshold import Polarity, otsu_threshold


def _write_json(path: Path, payload: dict) -> None:
    path.write_bytes((json.dumps(payload, indent=2) + "\n").encode("utf-8"))


def _config_from_flags(k, seed_mask_r, median_radius, grow_radius, connectivity,
                       polarity, min_area, rng_seed) -> SegmentationConfig:
    return SegmentationConfig(
        k=k,
        seed_mask_r=seed_mask_r,
        median_radius=median_radius,
        grow_radius=grow_radius,
        connectivity=Connectivity(connectivity),
        polarity=Polarity(polarity),
        min_area=min_area,
        rng_seed=rng_seed,
    )


def segment_one(input_path: str, prefix: str, cfg: SegmentationConfig,
                timings: bool = False) -> dict:
    """Segment one image and write <prefix>.labels.png, <prefix>.seeds.png
    and <prefix>.report.json."""
    img = load_gray(input_path)
    result = segment_image(img, cfg)
    save_label_png(result.labels, f"{prefix}.labels.png")
    save_gray_png(mark_seeds(img, result.seeds, cfg.polarity), f"{prefix}.seeds.png")
    report = run_report(result, include_timings=timings)
    _write_json(Path(f"{prefix}.report.json"), report)
    for line in result.warnings:
        click.echo(f"warning: {line}", err=True)
    if not timings:
        stage_ms = " ".join(f"{k}={v:.1f}ms" for k, v in result.timings_ms.items())
        click.echo(f"timings: {stage_ms}", err=True)
    return report


def _segment_job(args) -> tuple[str, str | None]:
    path, prefix, cfg_dict, timings = args
    try:
        segment_one(path, prefix, SegmentationConfig.from_dict(cfg_dict), timings)
        return path, None
    except (ValueError, OSError) as exc:
        return path, str(exc)


@click.group()
def main():
    """Automatic seeded region growing segmentation for grayscale images."""


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@click.argument("output_prefix")
@click.option("--k", default=4, show_default=True, help="Number of seeds to extract.")
@click.option("--seed-mask-r", default=3, show_default=True,
              help="Odd window size for the interior candidate filter.")
@click.option("--median-radius", default=1, show_default=True,
              help="Median prefilter radius (0 disables).")
@click.option("--grow-radius", default=1, show_default=True,
              help="Window radius for the neighborhood-mean growth rule (0 = pixel only).")
@click.option("--connectivity", type=click.Choice(["four", "eight"]), default="four",
              show_default=True)
@click.option("--polarity", type=click.Choice(["bright", "dark"]), default="bright",
              show_default=True, help="Side of the threshold treated as foreground.")
@click.option("--min-area", default=9, show_default=True,
              help="Drop components smaller than this many pixels.")
@click.option("--rng-seed", default=0, show_default=True)
@click.option("--jobs", default=1, show_default=True,
              help="Parallel workers when INPUT_PATH is a directory.")
@click.option("--timings", is_flag=True,
              help="Embed per-stage timings in the JSON report (breaks byte-identical reruns).")
def segment(input_path, output_prefix, k, seed_mask_r, median_radius, grow_radius,
            connectivity, polarity, min_area, rng_seed, jobs, timings):
    """Segment INPUT_PATH (image or directory) and write label image, seed
    overlay and JSON report under OUTPUT_PREFIX."""
    cfg = _config_from_flags(k, seed_mask_r, median_radius, grow_radius,
                             connectivity, polarity, min_area, rng_seed)
    src = Path(input_path)
    if src.is_dir():
        images = sorted(p for p in src.iterdir() if p.suffix.lower() in (".png", ".pgm"))
        if not images:
            raise click.ClickException(f"no .png or .pgm images found in {src}")
        out_dir = Path(output_prefix)
        out_dir.mkdir(parents=True, exist_ok=True)
        tasks = [(str(p), str(out_dir / p.stem), cfg.to_dict(), timings) for p in images]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(_segment_job, tasks))
        else:
            outcomes = [_segment_job(t) for t in tasks]
        failures = [(p, err) for p, err in outcomes if err is not None]
        for p, err in failures:
            click.echo(f"{p}: {err}", err=True)
        click.echo(f"segmented {len(outcomes) - len(failures)}/{len(outcomes)} images")
        if failures:
            sys.exit(1)
        return
    try:
        segment_one(str(src), output_prefix, cfg, timings)
    except (PipelineError, ValueError, OSError) as exc:
        raise click.ClickException(str(exc))


def _parse_blob(text: str) -> BlobSpec:
    parts = text.split(",")
    if len(parts) != 4:
        raise click.BadParameter(f"expected cx,cy,radius,intensity, got {text!r}")
    cx, cy, radius, intensity = (int(p) for p in parts)
    return BlobSpec(cx, cy, radius, intensity)


@main.command()
@click.argument("output_prefix")
@click.option("--spec", "spec_path", type=click.Path(exists=True),
              help="JSON scene description (overrides the inline flags).")
@click.option("--width", default=256, show_default=True)
@click.option("--height", default=256, show_default=True)
@click.option("--bg", default=30, show_default=True, help="Background intensity.")
@click.option("--noise-sigma", default=0.0, show_default=True)
@click.option("--rng-seed", default=0, show_default=True)
@click.option("--blob", "blob_texts", multiple=True, metavar="CX,CY,R,INTENSITY",
              help="Add one disk blob; repeatable.")
def synth(output_prefix, spec_path, width, height, bg, noise_sigma, rng_seed, blob_texts):
    """Generate a synthetic scene: <prefix>.png plus ground truth <prefix>.gt.png."""
    try:
        if spec_path:
            scene = json.loads(Path(spec_path).read_text("utf-8"))
            width = int(scene.get("width", width))
            height = int(scene.get("height", height))
            bg = int(scene.get("bg_intensity", bg))
            noise_sigma = float(scene.get("noise_sigma", noise_sigma))
            rng_seed = int(scene.get("rng_seed", rng_seed))
            blobs = [
                BlobSpec(int(b["cx"]), int(b["cy"]), int(b["radius"]), int(b["intensity"]))
                for b in scene.get("blobs", [])
            ]
        else:
            blobs = [_parse_blob(t) for t in blob_texts]
        img, gt = generate_blobs(width, height, blobs, bg, noise_sigma, rng_seed)
    except (ValueError, KeyError) as exc:
        raise click.ClickException(str(exc))
    if not blobs:
        click.echo("warning: no blobs given, writing a constant scene", err=True)
    save_gray_png(img, f"{output_prefix}.png")
    save_label_png(gt, f"{output_prefix}.gt.png")


@main.command("eval")
@click.argument("pred_path", type=click.Path(exists=True))
@click.argument("gt_path", type=click.Path(exists=True))
@click.argument("report_path")
def eval_cmd(pred_path, gt_path, report_path):
    """Compare a predicted label map against ground truth; write a Dice report."""
    try:
        pred = load_label_png(pred_path)
        gt = load_label_png(gt_path)
        report = dice_match(pred, gt)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    _write_json(Path(report_path), eval_report_dict(report))
    click.echo(f"mean_dice={report.mean_dice:.4f} "
               f"gt={report.n_gt_regions} pred={report.n_pred_regions}")


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
def otsu(input_path):
    """Print the Otsu threshold and between-class variance of an image."""
    try:
        result = otsu_threshold(histogram(load_gray(input_path)))
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"threshold={result.threshold} "
               f"between_class_variance={result.between_class_variance:.6f}")


if __name__ == "__main__":
    main()
