"""Core raster types and image file I/O.

All rasters are stored row-major with (x = column, y = row) and the origin
at the top-left corner. Instances are immutable after construction: the
backing arrays are copied in and marked read-only, so values can be shared
freely across threads.

Supported file formats: binary PGM (P5, maxval 255) and 8-bit grayscale PNG
for input images; paletted 8-bit or 16-bit grayscale PNG for label maps.
Color inputs are rejected rather than silently converted.
"""

from __future__ import annotations

import colorsys
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D raster, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"raster dimensions must be positive, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """2D raster of 8-bit intensities, shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError(f"intensities must be integers, got {arr.dtype}")
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("intensities must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen_array(arr, np.uint8))

    @classmethod
    def from_flat(cls, width: int, height: int, values) -> "GrayImage":
        flat = np.asarray(values)
        if flat.size != width * height:
            raise ValueError(
                f"expected {width * height} pixels for {width}x{height}, got {flat.size}"
            )
        return cls(flat.reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, GrayImage) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Per-pixel foreground (True) / background (False) classification."""

    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", _frozen_array(self.bits, bool))

    @classmethod
    def from_flat(cls, width: int, height: int, values) -> "BinaryMask":
        flat = np.asarray(values)
        if flat.size != width * height:
            raise ValueError(
                f"expected {width * height} bits for {width}x{height}, got {flat.size}"
            )
        return cls(flat.reshape(height, width))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryMask) and np.array_equal(self.bits, other.bits)


@dataclass(frozen=True, eq=False)
class LabelMap:
    """Per-pixel region identifiers; 0 is background.

    The used ids must be gapless: every id in 1..max(labels) occurs at
    least once, so region count equals the largest label.
    """

    labels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.labels)
        if arr.size and arr.min() < 0:
            raise ValueError("labels must be non-negative")
        arr = _frozen_array(arr, np.int32)
        top = int(arr.max()) if arr.size else 0
        if top > 0:
            counts = np.bincount(arr.ravel(), minlength=top + 1)
            if not np.all(counts[1:] > 0):
                missing = np.nonzero(counts[1:] == 0)[0] + 1
                raise ValueError(f"label ids are not contiguous, missing {missing.tolist()}")
        object.__setattr__(self, "labels", arr)

    @classmethod
    def from_flat(cls, width: int, height: int, values) -> "LabelMap":
        flat = np.asarray(values)
        if flat.size != width * height:
            raise ValueError(
                f"expected {width * height} labels for {width}x{height}, got {flat.size}"
            )
        return cls(flat.reshape(height, width))

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def n_regions(self) -> int:
        return int(self.labels.max())

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelMap) and np.array_equal(self.labels, other.labels)


def histogram(img: GrayImage) -> np.ndarray:
    """256-entry intensity tally; entries sum to the image pixel count."""
    return np.bincount(img.pixels.ravel(), minlength=256).astype(np.int64)


def _parse_pgm(data: bytes) -> GrayImage:
    pos = 2  # past the "P5" magic
    tokens = []
    while len(tokens) < 3:
        if pos >= len(data):
            raise ValueError("truncated PGM header")
        ch = data[pos : pos + 1]
        if ch.isspace():
            pos += 1
        elif ch == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            start = pos
            while pos < len(data) and not data[pos : pos + 1].isspace():
                pos += 1
            tokens.append(data[start:pos])
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise ValueError(f"malformed PGM header tokens {tokens}") from None
    if width < 1 or height < 1:
        raise ValueError(f"PGM dimensions must be positive, got {width}x{height}")
    if maxval != 255:
        raise ValueError(f"unsupported PGM maxval {maxval}, only 255 is supported")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise ValueError("missing whitespace before PGM raster data")
    raster = data[pos + 1 :]
    if len(raster) != width * height:
        raise ValueError(
            f"PGM header declares {width * height} pixels but file carries {len(raster)} bytes"
        )
    return GrayImage.from_flat(width, height, np.frombuffer(raster, dtype=np.uint8))


def _load_png_gray(data: bytes, path) -> GrayImage:
    im = Image.open(io.BytesIO(data))
    if im.mode == "L":
        return GrayImage(np.asarray(im))
    if im.mode in ("I", "I;16", "I;16B", "I;16L", "1"):
        raise ValueError(f"{path}: unsupported bit depth (PNG mode {im.mode}), need 8-bit grayscale")
    raise ValueError(f"{path}: not an 8-bit grayscale PNG (mode {im.mode}); color input is rejected")


def load_gray(path) -> GrayImage:
    """Load a binary PGM (P5) or 8-bit grayscale PNG, bit-exactly."""
    data = Path(path).read_bytes()
    if data.startswith(b"P5"):
        return _parse_pgm(data)
    if data.startswith(_PNG_MAGIC):
        return _load_png_gray(data, path)
    raise ValueError(f"{path}: unsupported format, expected binary PGM (P5) or PNG")


def save_gray_png(img: GrayImage, path) -> None:
    Image.fromarray(img.pixels, mode="L").save(Path(path), format="PNG")


def _label_palette() -> list[int]:
    # index 0 stays black; the rest get well-spread hues so regions are
    # visually distinct, but round-tripping relies on indices, not colors
    flat = [0, 0, 0]
    for i in range(1, 256):
        r, g, b = colorsys.hsv_to_rgb((i * 0.6180339887498949) % 1.0, 0.85, 1.0)
        flat += [round(r * 255), round(g * 255), round(b * 255)]
    return flat


def save_label_png(label_map: LabelMap, path) -> None:
    """Write a label map as PNG: paletted 8-bit if max label fits in a
    palette index, 16-bit grayscale otherwise. Round-trips exactly via
    ``load_label_png``."""
    top = label_map.n_regions
    if top <= 255:
        im = Image.fromarray(label_map.labels.astype(np.uint8), mode="P")
        im.putpalette(_label_palette())
    elif top <= 65535:
        im = Image.fromarray(label_map.labels.astype(np.uint16))
    else:
        raise ValueError(f"cannot encode {top} regions in a 16-bit PNG")
    im.save(Path(path), format="PNG")


def load_label_png(path) -> LabelMap:
    """Read a label map written by ``save_label_png`` (palette indices or
    16-bit values are the labels; plain 8-bit gray is accepted too)."""
    im = Image.open(Path(path))
    if im.mode in ("P", "L", "I", "I;16", "I;16B", "I;16L"):
        return LabelMap(np.asarray(im).astype(np.int32))
    raise ValueError(f"{path}: PNG mode {im.mode} is not a supported label encoding")
