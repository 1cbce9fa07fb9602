"""Character/label codec, display-order reordering and the script-only filter.

Text is stored in logical order; the recognizer reads pixel columns left to
right, so label sequences are in display order.  Reordering uses a simplified
two-pass rule with an RTL base direction: runs of LTR-class characters (Latin
letters, ASCII and Arabic-Indic digits) keep their order inside an otherwise
reversed line.  Neutrals (spaces, punctuation) take the direction of their
surrounding runs and fall back to RTL.  This is deliberately not the full
Unicode algorithm; printed RTL prose with embedded digits is all it needs to
cover, and it is an involution, so the same pass maps both ways.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from .errors import EmptyCorpus, UnknownChar, UnknownLabel

BLANK = 0

ARABIC_BLOCK = (0x0600, 0x06FF)
ARABIC_PRESENTATION = ((0xFB50, 0xFDFF), (0xFE70, 0xFEFF))
DEFAULT_SCRIPT_RANGES = (ARABIC_BLOCK,) + ARABIC_PRESENTATION

_ARABIC_INDIC_DIGITS = ((0x0660, 0x0669), (0x06F0, 0x06F9))


def normalize_text(text: str) -> str:
    """Canonical composition; applied at every text boundary."""
    return unicodedata.normalize("NFC", text)


def _is_ltr(ch: str) -> bool:
    if ch.isascii():
        return ch.isalnum()
    cp = ord(ch)
    if any(lo <= cp <= hi for lo, hi in _ARABIC_INDIC_DIGITS):
        return True
    return unicodedata.bidirectional(ch) == "L"


def _is_neutral(ch: str) -> bool:
    cat = unicodedata.category(ch)
    return cat.startswith("Z") or cat.startswith("P") or ch in "\t\n"


def _resolve_classes(text: str) -> list[str]:
    """Per-character direction: 'L' or 'R', neutrals resolved to context."""
    raw = []
    for ch in text:
        if _is_neutral(ch):
            raw.append("N")
        elif _is_ltr(ch):
            raw.append("L")
        else:
            raw.append("R")
    resolved = []
    for i, cls in enumerate(raw):
        if cls != "N":
            resolved.append(cls)
            continue
        prev = next((c for c in reversed(raw[:i]) if c != "N"), None)
        nxt = next((c for c in raw[i + 1 :] if c != "N"), None)
        resolved.append("L" if prev == "L" and nxt == "L" else "R")
    return resolved


def to_display_order(text: str) -> str:
    """Map a logical-order string to left-to-right display order (and back).

    Equivalent to reversing the whole string and re-reversing every maximal
    run of LTR-class characters; its own inverse for any fixed run
    classification.
    """
    if len(text) < 2:
        return text
    classes = _resolve_classes(text)
    runs: list[tuple[str, list[str]]] = []
    for ch, cls in zip(text, classes):
        if runs and runs[-1][0] == cls:
            runs[-1][1].append(ch)
        else:
            runs.append((cls, [ch]))
    out: list[str] = []
    for cls, chars in reversed(runs):
        out.extend(chars if cls == "L" else reversed(chars))
    return "".join(out)


@dataclass(frozen=True)
class Codec:
    """Bidirectional character/label mapping; label 0 is the CTC blank."""

    chars: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.chars)) != len(self.chars):
            raise ValueError("codec characters must be unique")
        object.__setattr__(self, "_index", {c: i + 1 for i, c in enumerate(self.chars)})

    def __len__(self) -> int:
        return len(self.chars)

    def __contains__(self, ch: str) -> bool:
        return ch in self._index

    def label_of(self, ch: str) -> int:
        return self._index[ch]

    def char_of(self, label: int) -> str:
        if not 1 <= label <= len(self.chars):
            raise UnknownLabel(label)
        return self.chars[label - 1]


def build_codec(corpus: list[str]) -> Codec:
    """Codec over every codepoint appearing in the (normalized) corpus."""
    chars: set[str] = set()
    for text in corpus:
        chars.update(normalize_text(text))
    if not chars:
        raise EmptyCorpus("no characters in corpus")
    return Codec(tuple(sorted(chars)))


def encode(text: str, codec: Codec) -> list[int]:
    """Logical text -> display-order label sequence."""
    text = normalize_text(text)
    for pos, ch in enumerate(text):
        if ch not in codec:
            raise UnknownChar(ch, pos)
    return [codec.label_of(ch) for ch in to_display_order(text)]


def decode_labels(labels: list[int], codec: Codec) -> str:
    """Display-order label sequence -> logical text (inverse of encode)."""
    display = "".join(codec.char_of(lb) for lb in labels)
    return to_display_order(display)


@dataclass(frozen=True)
class ScriptFilter:
    """Keeps only target-script characters; drops punctuation and separators."""

    ranges: tuple[tuple[int, int], ...] = DEFAULT_SCRIPT_RANGES

    def keep(self, ch: str) -> bool:
        if _is_neutral(ch):
            return False
        cp = ord(ch)
        return any(lo <= cp <= hi for lo, hi in self.ranges)


def script_only(text: str, filt: ScriptFilter | None = None) -> str:
    """Strip everything the script-only accuracy metric ignores."""
    filt = filt or ScriptFilter()
    return "".join(ch for ch in text if filt.keep(ch))
