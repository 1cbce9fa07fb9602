"""Durable formats: the .korm model container and line-pair datasets.

Model container layout (all integers little-endian):

    b"KORM" | u32 version | u32 header length | header JSON (UTF-8)
    | tensor payloads (float32 LE, C order, in header index order)
    | first 8 bytes of SHA-256 over everything before it

Datasets are directories of ``<id>.png`` / ``<id>.gt.txt`` pairs matched by
stem; images use scanner polarity (dark ink) and are inverted on load.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import imaging
from .errors import (
    BadMagic,
    ChecksumMismatch,
    EmptyDataset,
    IoFailure,
    ShapeMismatch,
    UnsupportedVersion,
)
from .imaging import GrayImage, LineImage
from .net import param_shapes
from .script import Codec, normalize_text

log = logging.getLogger(__name__)

MAGIC = b"KORM"
FORMAT_VERSION = 1


@dataclass
class OcrModel:
    """A trained line recognizer: weights, codec and geometry."""

    line_height: int
    hidden_size: int
    codec: Codec
    params: dict[str, np.ndarray]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = param_shapes(self.hidden_size, self.line_height, len(self.codec))
        if set(expected) != set(self.params):
            raise ShapeMismatch(f"tensor names {sorted(self.params)} != {sorted(expected)}")
        for name, shape in expected.items():
            if tuple(self.params[name].shape) != shape:
                raise ShapeMismatch(
                    f"tensor {name}: shape {self.params[name].shape}, expected {shape}"
                )

    def equals(self, other: "OcrModel") -> bool:
        return (
            self.line_height == other.line_height
            and self.hidden_size == other.hidden_size
            and self.codec == other.codec
            and self.meta == other.meta
            and all(np.array_equal(self.params[k], other.params[k]) for k in self.params)
        )


@dataclass
class LineSample:
    """One training/evaluation unit: a line image with its transcription."""

    image: LineImage
    text: str
    source_id: str = ""
    status: str = "checked"  # draft | checked
    sample_id: str = ""


def save_model(model: OcrModel, destination) -> int:
    """Serialize a model atomically; returns bytes written."""
    names = sorted(model.params)
    header = {
        "line_height": model.line_height,
        "hidden_size": model.hidden_size,
        "codec": list(model.codec.chars),
        "meta": model.meta,
        "tensors": [{"name": n, "shape": list(model.params[n].shape)} for n in names],
    }
    header_bytes = json.dumps(header, ensure_ascii=False, sort_keys=True).encode("utf-8")
    parts = [MAGIC, struct.pack("<II", FORMAT_VERSION, len(header_bytes)), header_bytes]
    for n in names:
        parts.append(np.ascontiguousarray(model.params[n], dtype="<f4").tobytes())
    blob = b"".join(parts)
    blob += hashlib.sha256(blob).digest()[:8]

    destination = Path(destination)
    tmp = destination.with_name(destination.name + ".tmp")
    try:
        tmp.write_bytes(blob)
        os.replace(tmp, destination)
    except OSError as e:
        tmp.unlink(missing_ok=True)
        raise IoFailure(f"cannot write model to {destination}: {e}") from e
    return len(blob)


def load_model(source) -> OcrModel:
    """Read and validate a .korm model container."""
    try:
        blob = Path(source).read_bytes()
    except OSError as e:
        raise IoFailure(f"cannot read model from {source}: {e}") from e
    if len(blob) < 4 or blob[:4] != MAGIC:
        raise BadMagic("not a KORM model file")
    if len(blob) < 20:
        raise ChecksumMismatch("model file truncated")
    (version, header_len) = struct.unpack("<II", blob[4:12])
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"format version {version} not supported")
    if hashlib.sha256(blob[:-8]).digest()[:8] != blob[-8:]:
        raise ChecksumMismatch("model file corrupted (checksum failure)")
    try:
        header = json.loads(blob[12 : 12 + header_len].decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as e:
        raise ChecksumMismatch(f"unreadable header: {e}") from e

    params: dict[str, np.ndarray] = {}
    offset = 12 + header_len
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        end = offset + 4 * count
        if end > len(blob) - 8:
            raise ShapeMismatch("tensor payload exceeds file size")
        params[entry["name"]] = np.frombuffer(blob[offset:end], dtype="<f4").reshape(shape).copy()
        offset = end
    return OcrModel(
        line_height=int(header["line_height"]),
        hidden_size=int(header["hidden_size"]),
        codec=Codec(tuple(header["codec"])),
        params=params,
        meta=header.get("meta", {}),
    )


def save_dataset(samples: list[LineSample], directory) -> None:
    """Write samples as <id>.png / <id>.gt.txt pairs."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for i, sample in enumerate(samples):
        stem = sample.sample_id or f"{sample.source_id or 'line'}-{i:05d}"
        imaging.save_png(sample.image, directory / f"{stem}.png")
        (directory / f"{stem}.gt.txt").write_text(sample.text + "\n", encoding="utf-8")


def load_dataset(directory, line_height: int = imaging.DEFAULT_LINE_HEIGHT) -> list[LineSample]:
    """Load matched image/text pairs in lexicographic stem order.

    Orphan files are logged and skipped.  Images whose height differs from
    ``line_height`` are renormalized through the imaging module.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise EmptyDataset(f"{directory} is not a directory")
    images = {p.stem: p for p in directory.glob("*.png")}
    texts = {p.name[: -len(".gt.txt")]: p for p in directory.glob("*.gt.txt")}
    for stem in sorted(set(images) ^ set(texts)):
        log.warning("orphan dataset file for stem %r, skipping", stem)

    samples: list[LineSample] = []
    for stem in sorted(set(images) & set(texts)):
        page = imaging.load_image(images[stem].read_bytes())
        if page.height == line_height:
            line = LineImage((1.0 - page.pixels).astype(np.float32))
        else:
            box = imaging.LineBox(0, page.height, 0, page.width)
            line = imaging.normalize_line(page, box, line_height)
        text = normalize_text(texts[stem].read_text(encoding="utf-8").rstrip("\n"))
        samples.append(LineSample(line, text, source_id=directory.name, sample_id=stem))
    if not samples:
        raise EmptyDataset(f"no image/text pairs found in {directory}")
    return samples
