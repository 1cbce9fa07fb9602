"""Page image loading, binarization, line segmentation and line normalization.

Page images use the scanner convention (0 = ink, 1 = paper).  Normalized line
strips handed to the recognizer are ink-positive (1 = ink) so the network sees
sparse positive inputs.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptImage, EmptyLine, UnsupportedFormat

INK_THRESHOLD = 0.5

DEFAULT_LINE_HEIGHT = 48
DEFAULT_MIN_LINE_HEIGHT = 8
DEFAULT_SMOOTH_RADIUS = 2


@dataclass(frozen=True)
class GrayImage:
    """A grayscale raster page, intensities in [0, 1], 0 = ink."""

    pixels: np.ndarray  # (height, width) float32

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 2 or p.size == 0:
            raise ValueError("GrayImage needs a nonempty 2-D array")
        if not np.isfinite(p).all() or p.min() < 0.0 or p.max() > 1.0:
            raise ValueError("GrayImage intensities must lie in [0, 1]")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def is_bilevel(self) -> bool:
        return bool(np.isin(self.pixels, (0.0, 1.0)).all())


@dataclass(frozen=True)
class LineBox:
    """A horizontal band of a page; bottom/right are exclusive."""

    top: int
    bottom: int
    left: int
    right: int

    def __post_init__(self):
        if not (0 <= self.top < self.bottom and 0 <= self.left < self.right):
            raise ValueError(f"degenerate line box {self}")


@dataclass(frozen=True)
class LineImage:
    """A height-normalized line strip, ink-positive (1 = ink)."""

    pixels: np.ndarray  # (height, width) float32

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 2 or p.size == 0:
            raise ValueError("LineImage needs a nonempty 2-D array")
        if not np.isfinite(p).all() or p.min() < 0.0 or p.max() > 1.0:
            raise ValueError("LineImage intensities must lie in [0, 1]")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class OtsuResult:
    image: GrayImage
    threshold: float
    degenerate: bool = False


def load_image(data: bytes) -> GrayImage:
    """Decode PNG or PGM (P5) bytes into a GrayImage.

    Multi-channel inputs are reduced by averaging the channels.
    """
    try:
        img = Image.open(io.BytesIO(data))
        fmt = img.format
    except UnidentifiedImageError as e:
        raise UnsupportedFormat("not a recognizable PNG or PGM file") from e
    if fmt not in ("PNG", "PPM"):
        raise UnsupportedFormat(f"unsupported image format {fmt!r}")
    try:
        img.load()
    except OSError as e:
        raise CorruptImage(str(e)) from e
    arr = np.asarray(img)
    if arr.ndim == 3:
        arr = arr.mean(axis=2)
    if arr.dtype == bool:
        arr = arr.astype(np.float32) * 255.0
    pixels = (arr.astype(np.float32) / 255.0).clip(0.0, 1.0)
    return GrayImage(pixels)


def save_png(img: GrayImage | LineImage, path) -> None:
    """Write an image as 8-bit grayscale PNG (scanner polarity, 0 = ink)."""
    p = img.pixels
    if isinstance(img, LineImage):
        p = 1.0 - p
    Image.fromarray((p * 255.0).round().astype(np.uint8), mode="L").save(path, "PNG")


def _histogram256(pixels: np.ndarray) -> np.ndarray:
    bins = (pixels * 255.0).round().astype(np.int64).clip(0, 255)
    return np.bincount(bins.ravel(), minlength=256).astype(np.float64)


def binarize_otsu(img: GrayImage) -> OtsuResult:
    """Global Otsu threshold; pixels <= threshold become ink (0.0).

    Threshold maximizes between-class variance over a 256-bin histogram, ties
    broken toward the lowest bin.  An image with a single intensity is
    returned unchanged, flagged degenerate.
    """
    hist = _histogram256(img.pixels)
    if np.count_nonzero(hist) <= 1:
        value = float(np.argmax(hist)) / 255.0
        return OtsuResult(img, value, degenerate=True)

    total = hist.sum()
    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist)  # mass of class [0..t]
    m0 = np.cumsum(hist * levels)
    w1 = total - w0
    mean_total = m0[-1]
    # between-class variance for every threshold t in 0..255
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = m0 / w0
        mu1 = (mean_total - m0) / w1
        var = w0 * w1 * (mu0 - mu1) ** 2
    var = np.nan_to_num(var, nan=-1.0)
    t = int(np.argmax(var))  # argmax returns the lowest maximizing index
    thr = t / 255.0
    out = np.where(img.pixels <= thr + 1e-12, 0.0, 1.0).astype(np.float32)
    return OtsuResult(GrayImage(out), thr)


def segment_lines(
    img: GrayImage,
    min_line_height: int = DEFAULT_MIN_LINE_HEIGHT,
    smooth_radius: int = DEFAULT_SMOOTH_RADIUS,
) -> list[LineBox]:
    """Split a bilevel page into text-line bands via its row ink projection.

    The projection is smoothed with a box filter of the given radius, which
    bridges inter-band gaps smaller than the filter reach; surviving bands are
    tightened back to their ink extent and dropped if shorter than
    ``min_line_height``.
    """
    ink = img.pixels < INK_THRESHOLD
    proj = ink.sum(axis=1)
    if smooth_radius > 0:
        kernel = np.ones(2 * smooth_radius + 1)
        smoothed = np.convolve(proj, kernel, mode="same")
    else:
        smoothed = proj.astype(np.float64)

    boxes: list[LineBox] = []
    active = smoothed > 0
    h = img.height
    row = 0
    while row < h:
        if not active[row]:
            row += 1
            continue
        start = row
        while row < h and active[row]:
            row += 1
        band = proj[start:row]
        ink_rows = np.nonzero(band)[0]
        if ink_rows.size == 0:
            continue
        top = start + int(ink_rows[0])
        bottom = start + int(ink_rows[-1]) + 1
        if bottom - top < min_line_height:
            continue
        cols = np.nonzero(ink[top:bottom].any(axis=0))[0]
        boxes.append(LineBox(top, bottom, int(cols[0]), int(cols[-1]) + 1))
    return boxes


def _resize_bilinear(a: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Separable bilinear resize with half-pixel-center coordinate mapping."""
    in_h, in_w = a.shape

    def axis_coords(n_out, n_in):
        src = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        src = src.clip(0.0, n_in - 1)
        lo = np.floor(src).astype(np.int64)
        hi = np.minimum(lo + 1, n_in - 1)
        frac = src - lo
        return lo, hi, frac

    ylo, yhi, yf = axis_coords(out_h, in_h)
    xlo, xhi, xf = axis_coords(out_w, in_w)
    rows = a[ylo] * (1.0 - yf)[:, None] + a[yhi] * yf[:, None]
    out = rows[:, xlo] * (1.0 - xf)[None, :] + rows[:, xhi] * xf[None, :]
    return out


def normalize_line(img: GrayImage, box: LineBox, target_height: int = DEFAULT_LINE_HEIGHT) -> LineImage:
    """Crop a line box, tighten to its ink extent, and rescale to the model height.

    The crop is scaled uniformly so the ink band height becomes exactly
    ``target_height``; intensities are inverted to ink-positive.
    """
    if box.bottom > img.height or box.right > img.width:
        raise ValueError(f"box {box} exceeds page {img.width}x{img.height}")
    sub = img.pixels[box.top : box.bottom, box.left : box.right]
    ink = sub < INK_THRESHOLD
    rows = np.nonzero(ink.any(axis=1))[0]
    if rows.size == 0:
        raise EmptyLine("line box contains no ink")
    tight = sub[rows[0] : rows[-1] + 1]
    h, w = tight.shape
    scale = target_height / h
    out_w = max(1, round(w * scale))
    inverted = (1.0 - tight).astype(np.float64)
    resized = _resize_bilinear(inverted, target_height, out_w)
    return LineImage(resized.clip(0.0, 1.0).astype(np.float32))
