"""Deterministic synthetic connected-script corpus generator.

Renders a procedural pseudo-script onto line strips: Arabic codepoints with
invented stroke recipes, joined right-to-left with variable-length kashida
strokes, optional vowel marks above/below letters, punctuation, embedded
Arabic-Indic digit runs (rendered left-to-right) and a small ligature set.
Ground truth is the generated logical-order text, marks and punctuation
included.  Everything is a pure function of (typeface, quality, n, seed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from .imaging import GrayImage, LineImage
from .store import LineSample

DEFAULT_TEXT_LENGTH = (15, 60)
WORD_GAP = 8
LETTER_GAP = 2
MARGIN = 4


@dataclass(frozen=True)
class Glyph:
    width: float
    strokes: tuple  # tuple of polylines, each a tuple of (x, y)
    dots: tuple
    joins_next: bool


@dataclass(frozen=True)
class Mark:
    width: float
    strokes: tuple
    position: str  # above | below


@dataclass(frozen=True)
class Typeface:
    id: str
    line_height: int
    baseline: float
    glyphs: dict[str, Glyph]
    digits: dict[str, Glyph]
    punct: dict[str, Glyph]
    marks: dict[str, Mark]
    ligatures: dict[str, Glyph]
    kashida_px: tuple[int, int] = (1, 3)
    mark_density: float = 0.25
    punct_density: float = 0.15
    digit_density: float = 0.05
    stroke_radius: float = 1.1
    slant: float = 0.0


@dataclass(frozen=True)
class QualityProfile:
    """high: grayscale as rendered; low: downscaled, thresholded, speckled."""

    mode: str = "high"
    downscale: float = 1.5
    # threshold below the 0.5 midpoint keeps thin strokes and dots alive
    # through the rescan; speckle is a per-pixel flip probability
    threshold: float = 0.4
    speckle: float = 0.001

    def __post_init__(self):
        if self.mode not in ("high", "low"):
            raise ValueError(f"unknown quality mode {self.mode!r}")


HIGH_QUALITY = QualityProfile("high")
LOW_QUALITY = QualityProfile("low")


def _parse_glyph(raw: dict) -> Glyph:
    return Glyph(
        width=float(raw["width"]),
        strokes=tuple(tuple((float(x), float(y)) for x, y in s) for s in raw["strokes"]),
        dots=tuple((float(x), float(y)) for x, y in raw.get("dots", [])),
        joins_next=bool(raw["joins_next"]),
    )


def load_typeface(name: str = "base") -> Typeface:
    """Load a committed typeface recipe from package data."""
    raw = json.loads(
        resources.files("rtlocr.data").joinpath(f"typeface_{name}.json").read_text("utf-8")
    )
    return Typeface(
        id=raw["id"],
        line_height=int(raw["line_height"]),
        baseline=float(raw["baseline"]),
        glyphs={c: _parse_glyph(g) for c, g in raw["glyphs"].items()},
        digits={c: _parse_glyph(g) for c, g in raw["digits"].items()},
        punct={c: _parse_glyph(g) for c, g in raw["punct"].items()},
        marks={
            c: Mark(
                float(m["width"]),
                tuple(tuple((float(x), float(y)) for x, y in s) for s in m["strokes"]),
                m["position"],
            )
            for c, m in raw["marks"].items()
        },
        ligatures={p: _parse_glyph(g) for p, g in raw["ligatures"].items()},
        kashida_px=tuple(raw["kashida_px"]),
        mark_density=float(raw["mark_density"]),
        punct_density=float(raw["punct_density"]),
        digit_density=float(raw["digit_density"]),
        stroke_radius=float(raw["stroke_radius"]),
        slant=float(raw.get("slant", 0.0)),
    )


def splitmix64(seed: int, index: int) -> int:
    """Documented per-line seed derivation: one splitmix64 round."""
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def _make_text(tf: Typeface, rng: np.random.Generator, length_range: tuple[int, int]) -> str:
    """Random logical-order line text with length in ``length_range`` codepoints."""
    lo, hi = length_range
    target = int(rng.integers(lo, hi + 1))
    letters = sorted(tf.glyphs)
    digits = sorted(tf.digits)
    puncts = sorted(tf.punct)
    marks = sorted(tf.marks)

    out: list[str] = []
    total = 0
    while total < target:
        budget = hi - total - (1 if out else 0)
        if budget < 1:
            break
        token: list[str] = []
        if out and rng.random() < tf.digit_density and budget >= 1:
            for _ in range(min(int(rng.integers(1, 4)), budget)):
                token.append(digits[rng.integers(len(digits))])
        elif out and rng.random() < tf.punct_density:
            token.append(puncts[rng.integers(len(puncts))])
        else:
            word_len = min(int(rng.integers(2, 8)), budget)
            for _ in range(max(word_len, 1)):
                token.append(letters[rng.integers(len(letters))])
                if len(token) < budget and rng.random() < tf.mark_density:
                    token.append(marks[rng.integers(len(marks))])
                if len(token) >= budget:
                    break
        if out:
            out.append(" ")
            total += 1
        out.extend(token)
        total += len(token)
    return "".join(out)


def _stroke_points(strokes, radius: float) -> list[tuple[float, float]]:
    pts: list[tuple[float, float]] = []
    step = 0.4
    for poly in strokes:
        for (x0, y0), (x1, y1) in zip(poly, poly[1:]):
            dist = max(np.hypot(x1 - x0, y1 - y0), 1e-6)
            n = max(int(dist / step) + 1, 2)
            for i in range(n):
                f = i / (n - 1)
                pts.append((x0 + f * (x1 - x0), y0 + f * (y1 - y0)))
    return pts


class _Canvas:
    def __init__(self, height: int, width: int):
        self.height = height
        self.width = width
        self.points: list[tuple[float, float, float]] = []  # (x, y, radius)

    def stamp(self, glyph_strokes, dots, x_offset: float, radius: float, slant: float, baseline: float):
        for x, y in _stroke_points(glyph_strokes, radius):
            xs = x_offset + x + slant * (baseline - y)
            self.points.append((xs, y, radius))
        for x, y in dots:
            xs = x_offset + x + slant * (baseline - y)
            # dots carry most of the letter-identity signal; render them
            # heavy enough to survive a coarse rescan-and-threshold
            self.points.append((xs, y, radius * 2.2))

    def render(self) -> np.ndarray:
        """Rasterize stamped points with a soft 5x5 footprint; ink-positive."""
        img = np.zeros((self.height, self.width), dtype=np.float64)
        if not self.points:
            return img
        pts = np.asarray(self.points)
        px, py, pr = pts[:, 0], pts[:, 1], pts[:, 2]
        cx, cy = np.floor(px).astype(np.int64), np.floor(py).astype(np.int64)
        for dy in range(-2, 3):
            for dx in range(-2, 3):
                gx, gy = cx + dx, cy + dy
                ok = (gx >= 0) & (gx < self.width) & (gy >= 0) & (gy < self.height)
                if not ok.any():
                    continue
                d2 = (gx + 0.5 - px) ** 2 + (gy + 0.5 - py) ** 2
                w = np.exp(-d2[ok] / (2.0 * (0.55 * pr[ok]) ** 2))
                np.add.at(img, (gy[ok], gx[ok]), w)
        return np.clip(img, 0.0, 1.0)


def _tokenize(text: str, tf: Typeface) -> list[tuple[str, str]]:
    """Split logical text into (kind, token) pairs: word, digits, punct."""
    tokens: list[tuple[str, str]] = []
    for chunk in text.split(" "):
        if not chunk:
            continue
        if chunk[0] in tf.digits:
            tokens.append(("digits", chunk))
        elif chunk[0] in tf.punct:
            tokens.append(("punct", chunk))
        else:
            tokens.append(("word", chunk))
    return tokens


def _word_pieces(word: str, tf: Typeface) -> list[tuple[Glyph, list[Mark]]]:
    """Group a word's codepoints into renderable (glyph, marks) pieces.

    Ligature pairs present in the typeface inventory are fused into a single
    glyph; each piece carries the vowel marks that follow it in the text.
    """
    pieces: list[tuple[Glyph, list[Mark]]] = []
    i = 0
    while i < len(word):
        ch = word[i]
        if ch in tf.marks:
            if pieces:
                pieces[-1][1].append(tf.marks[ch])
            i += 1
            continue
        pair = word[i : i + 2]
        if len(pair) == 2 and pair in tf.ligatures:
            pieces.append((tf.ligatures[pair], []))
            i += 2
            continue
        pieces.append((tf.glyphs[ch], []))
        i += 1
    return pieces


def render_line(text: str, tf: Typeface, rng: np.random.Generator) -> LineImage:
    """Render logical-order text right-to-left into an ink-positive strip."""
    tokens = _tokenize(text, tf)
    h = tf.line_height
    klo, khi = tf.kashida_px

    # layout pass: per-token piece lists with advances
    laid: list[list[tuple[Glyph, list[Mark], float]]] = []  # advance includes trailing joins
    for kind, token in tokens:
        pieces: list[tuple[Glyph, list[Mark]]]
        if kind == "word":
            pieces = _word_pieces(token, tf)
        elif kind == "digits":
            pieces = [(tf.digits[c], []) for c in token]
        else:
            pieces = [(tf.punct[c], []) for c in token]
        with_adv = []
        for j, (gl, marks) in enumerate(pieces):
            last = j == len(pieces) - 1
            if kind == "word" and gl.joins_next and not last:
                adv = gl.width + int(rng.integers(klo, khi + 1))
            elif not last:
                adv = gl.width + LETTER_GAP
            else:
                adv = gl.width
            with_adv.append((gl, marks, adv))
        laid.append(with_adv)

    total = sum(sum(p[2] for p in tok) for tok in laid) + WORD_GAP * max(len(laid) - 1, 0)
    slant_pad = abs(tf.slant) * h
    width = int(np.ceil(total + 2 * MARGIN + 2 * slant_pad))
    canvas = _Canvas(h, width)

    pen = width - MARGIN - slant_pad  # rightmost ink edge; pen moves leftward
    for kind, tok in zip((k for k, _ in tokens), laid):
        if kind == "digits":
            # digit runs read left-to-right: lay out from the run's left edge
            run_w = sum(p[2] for p in tok)
            x = pen - run_w
            for gl, marks, adv in tok:
                _stamp_piece(canvas, gl, marks, x, tf)
                x += adv
            pen -= run_w + WORD_GAP
            continue
        for gl, marks, adv in tok:
            x_left = pen - adv
            _stamp_piece(canvas, gl, marks, pen - gl.width, tf)
            if adv > gl.width and gl.joins_next and kind == "word":
                # kashida: baseline stroke bridging to the next glyph
                k = adv - gl.width
                canvas.stamp(
                    (((0.0, tf.baseline), (k + 0.5, tf.baseline)),),
                    (),
                    x_left - 0.5,
                    tf.stroke_radius,
                    0.0,
                    tf.baseline,
                )
            pen = x_left
        pen -= WORD_GAP
    return LineImage(canvas.render().astype(np.float32))


def _stamp_piece(canvas: _Canvas, gl: Glyph, marks, x: float, tf: Typeface) -> None:
    canvas.stamp(gl.strokes, gl.dots, x, tf.stroke_radius, tf.slant, tf.baseline)
    # mark boxes are authored with y in [0, 10]; shift above the body or under it
    for mark in marks:
        mx = x + (gl.width - mark.width) / 2.0
        dy = 3.0 if mark.position == "above" else 37.0
        shifted = tuple(tuple((sx, sy + dy) for sx, sy in s) for s in mark.strokes)
        canvas.stamp(shifted, (), mx, tf.stroke_radius * 1.1, tf.slant, tf.baseline)


def apply_quality(line: LineImage, quality: QualityProfile, rng: np.random.Generator) -> LineImage:
    """Degrade a rendered strip per the quality profile; 'high' is identity."""
    if quality.mode == "high":
        return line
    from .imaging import _resize_bilinear

    h, w = line.pixels.shape
    small_h = max(int(round(h / quality.downscale)), 1)
    small_w = max(int(round(w / quality.downscale)), 1)
    small = _resize_bilinear(line.pixels.astype(np.float64), small_h, small_w)
    bilevel = (small >= quality.threshold).astype(np.float64)
    if quality.speckle > 0:
        flips = rng.random(bilevel.shape) < quality.speckle
        bilevel = np.where(flips, 1.0 - bilevel, bilevel)
    # nearest-neighbor upsample back to the model height, keeping it bilevel
    ys = np.minimum((np.arange(h) * small_h / h).astype(np.int64), small_h - 1)
    xs = np.minimum((np.arange(w) * small_w / w).astype(np.int64), small_w - 1)
    return LineImage(bilevel[np.ix_(ys, xs)].astype(np.float32))


def generate_corpus(
    typeface: Typeface,
    quality: QualityProfile,
    n_lines: int,
    seed: int,
    length_range: tuple[int, int] = DEFAULT_TEXT_LENGTH,
) -> list[LineSample]:
    """Generate ``n_lines`` line samples, deterministically from the seed."""
    if n_lines <= 0:
        raise ValueError("n_lines must be positive")
    samples = []
    for i in range(n_lines):
        rng = np.random.Generator(np.random.PCG64(splitmix64(seed, i)))
        text = _make_text(typeface, rng, length_range)
        line = render_line(text, typeface, rng)
        line = apply_quality(line, quality, rng)
        samples.append(
            LineSample(
                image=line,
                text=text,
                source_id=typeface.id,
                status="checked",
                sample_id=f"{typeface.id}-{quality.mode}-{seed}-{i:04d}",
            )
        )
    return samples


def _jitter_glyph(gl: Glyph, rng: np.random.Generator, amount: float) -> Glyph:
    strokes = tuple(
        tuple((x + rng.uniform(-amount, amount), y + rng.uniform(-amount, amount)) for x, y in poly)
        for poly in gl.strokes
    )
    dots = tuple((x + rng.uniform(-amount, amount), y + rng.uniform(-amount, amount)) for x, y in gl.dots)
    return replace(gl, strokes=strokes, dots=dots)


def derive_typeface(base: Typeface, mutation_seed: int) -> Typeface:
    """Deterministically mutate a typeface; seed 0 is the identity."""
    if mutation_seed == 0:
        return base
    rng = np.random.Generator(np.random.PCG64(splitmix64(mutation_seed, 0xD5)))
    amount = 1.4
    glyphs = {c: _jitter_glyph(g, rng, amount) for c, g in sorted(base.glyphs.items())}
    digits = {c: _jitter_glyph(g, rng, amount * 0.6) for c, g in sorted(base.digits.items())}
    punct = {c: _jitter_glyph(g, rng, amount * 0.6) for c, g in sorted(base.punct.items())}
    ligatures = {
        p: _jitter_glyph(g, rng, amount)
        for p, g in sorted(base.ligatures.items())
        if rng.random() < 0.5
    }
    return replace(
        base,
        id=f"{base.id}-m{mutation_seed}",
        glyphs=glyphs,
        digits=digits,
        punct=punct,
        ligatures=ligatures,
        kashida_px=(1, int(rng.integers(5, 10))),
        mark_density=float(np.clip(base.mark_density + rng.uniform(-0.1, 0.2), 0.0, 1.0)),
        punct_density=float(np.clip(base.punct_density + rng.uniform(-0.05, 0.1), 0.0, 1.0)),
        stroke_radius=float(base.stroke_radius * rng.uniform(0.85, 1.35)),
        slant=float(base.slant + rng.uniform(-0.22, 0.22)),
    )


def compose_page(samples: list[LineSample], gap: int = 16, margin: int = 24) -> GrayImage:
    """Stack line strips into a page image (scanner polarity, 0 = ink)."""
    if not samples:
        raise ValueError("no lines to compose")
    width = max(s.image.width for s in samples) + 2 * margin
    height = sum(s.image.height for s in samples) + gap * (len(samples) - 1) + 2 * margin
    page = np.ones((height, width), dtype=np.float32)
    y = margin
    for s in samples:
        h, w = s.image.pixels.shape
        page[y : y + h, margin : margin + w] = 1.0 - s.image.pixels
        y += h + gap
    return GrayImage(page)


def corpus_manifest(typeface: Typeface, quality: QualityProfile, n_lines: int, seed: int) -> str:
    return json.dumps(
        {
            "typeface": typeface.id,
            "quality": quality.mode,
            "lines": n_lines,
            "seed": seed,
            "kashida_px": list(typeface.kashida_px),
            "mark_density": typeface.mark_density,
            "punct_density": typeface.punct_density,
            "digit_density": typeface.digit_density,
        },
        ensure_ascii=False,
        indent=2,
    )
