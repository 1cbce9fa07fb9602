"""Greedy best-path decoding of posterior matrices into text."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .script import BLANK, Codec, decode_labels


@dataclass(frozen=True)
class Recognition:
    """Decoded line: logical-order text plus per-character evidence."""

    text: str
    confidences: tuple[float, ...]  # per display-order character
    frame_map: tuple[tuple[int, int], ...]  # display-order char -> [start, end) columns


def best_path_decode(posteriors: np.ndarray, codec: Codec) -> Recognition:
    """Per-frame argmax, collapse repeats, drop blanks, undo display order.

    Ties in a frame go to the lowest label index.  Each emitted character's
    confidence is the mean argmax probability over its frames.
    """
    labels = posteriors.argmax(axis=1)
    display_labels: list[int] = []
    confidences: list[float] = []
    frames: list[tuple[int, int]] = []

    t = 0
    t_len = labels.shape[0]
    while t < t_len:
        lb = int(labels[t])
        start = t
        while t < t_len and labels[t] == lb:
            t += 1
        if lb != BLANK:
            display_labels.append(lb)
            confidences.append(float(posteriors[start:t, lb].mean()))
            frames.append((start, t))

    text = decode_labels(display_labels, codec)
    return Recognition(text, tuple(confidences), tuple(frames))
