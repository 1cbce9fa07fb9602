"""Character-accuracy evaluation: full text and script-only, with confusions.

Accuracy is micro-averaged over the corpus: 100 * (1 - total edit distance /
total reference length), computed once on raw text and once after applying the
script filter to both reference and hypothesis.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .decoder import best_path_decode
from .net import forward
from .script import ScriptFilter, normalize_text, script_only

INSERTED = "∅"  # marks an insertion/deletion partner in confusion counts


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance over codepoints (two-row DP)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            cur[j] = min(
                prev[j] + 1,  # delete ca
                cur[j - 1] + 1,  # insert cb
                prev[j - 1] + (ca != cb),
            )
        prev = cur
    return prev[-1]


def char_accuracy(gt: str, hyp: str) -> tuple[int, float]:
    """Edit distance and percent accuracy against the reference length.

    Accuracy is clamped at 0 for hypotheses worse than the empty string.
    """
    gt = normalize_text(gt)
    hyp = normalize_text(hyp)
    dist = levenshtein(gt, hyp)
    acc = 100.0 * (1.0 - dist / max(len(gt), 1))
    return dist, max(acc, 0.0)


def align(gt: str, hyp: str) -> list[tuple[str, str]]:
    """One optimal alignment as (gt char, hyp char) pairs; indels use INSERTED.

    Tie-break prefers substitution/match over indels, then the leftmost
    predecessor, which makes confusion counts deterministic.
    """
    n, m = len(gt), len(hyp)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dist[i][0] = i
    for j in range(1, m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            dist[i][j] = min(
                dist[i - 1][j - 1] + (gt[i - 1] != hyp[j - 1]),
                dist[i - 1][j] + 1,
                dist[i][j - 1] + 1,
            )
    pairs: list[tuple[str, str]] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dist[i][j] == dist[i - 1][j - 1] + (gt[i - 1] != hyp[j - 1]):
            pairs.append((gt[i - 1], hyp[j - 1]))
            i -= 1
            j -= 1
        elif i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            pairs.append((gt[i - 1], INSERTED))
            i -= 1
        else:
            pairs.append((INSERTED, hyp[j - 1]))
            j -= 1
    pairs.reverse()
    return pairs


@dataclass
class LineResult:
    line_id: str
    gt: str
    hyp: str
    distance: int


@dataclass
class EvalReport:
    full_accuracy: float | None
    script_accuracy: float | None
    total_distance: int
    total_gt_chars: int
    total_script_distance: int
    total_script_chars: int
    lines: list[LineResult] = field(default_factory=list)
    confusions: list[tuple[str, str, int]] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "full_accuracy": self.full_accuracy,
                "script_accuracy": self.script_accuracy,
                "total_distance": self.total_distance,
                "total_gt_chars": self.total_gt_chars,
                "total_script_distance": self.total_script_distance,
                "total_script_chars": self.total_script_chars,
                "lines": [
                    {"id": r.line_id, "gt": r.gt, "hyp": r.hyp, "distance": r.distance}
                    for r in self.lines
                ],
                "confusions": [
                    {"gt": g, "hyp": h, "count": c} for g, h, c in self.confusions
                ],
            },
            ensure_ascii=False,
            indent=2,
        )


def evaluate_pairs(
    pairs: list[tuple[str, str, str]],
    filt: ScriptFilter | None = None,
    top_confusions: int = 20,
) -> EvalReport:
    """Aggregate (line id, gt, hyp) triples into an EvalReport."""
    filt = filt or ScriptFilter()
    total_dist = total_len = 0
    script_dist = script_len = 0
    lines: list[LineResult] = []
    confusion: Counter[tuple[str, str]] = Counter()
    for line_id, gt, hyp in pairs:
        gt = normalize_text(gt)
        hyp = normalize_text(hyp)
        dist, _ = char_accuracy(gt, hyp)
        lines.append(LineResult(line_id, gt, hyp, dist))
        total_dist += dist
        total_len += len(gt)
        fgt = script_only(gt, filt)
        fhyp = script_only(hyp, filt)
        script_dist += levenshtein(fgt, fhyp)
        script_len += len(fgt)
        for g, h in align(gt, hyp):
            if g != h:
                confusion[(g, h)] += 1

    def pct(dist: int, ref: int) -> float | None:
        if ref == 0:
            return None
        return max(100.0 * (1.0 - dist / ref), 0.0)

    top = [(g, h, c) for (g, h), c in confusion.most_common(top_confusions)]
    return EvalReport(
        full_accuracy=pct(total_dist, total_len),
        script_accuracy=pct(script_dist, script_len),
        total_distance=total_dist,
        total_gt_chars=total_len,
        total_script_distance=script_dist,
        total_script_chars=script_len,
        lines=lines,
        confusions=top,
    )


def evaluate_model(model, samples, filt: ScriptFilter | None = None) -> EvalReport:
    """Recognize every sample with the model and score against ground truth."""
    triples = []
    for i, sample in enumerate(samples):
        post = forward(model.params, sample.image)
        rec = best_path_decode(post, model.codec)
        line_id = sample.sample_id or f"line-{i:04d}"
        triples.append((line_id, sample.text, rec.text))
    return evaluate_pairs(triples, filt)


def format_table(rows: list[tuple[str, str, float | None, float | None]]) -> str:
    """Aligned plain-text accuracy table: (model, dataset, full, script-only)."""
    header = ("Model", "Dataset", "Full", "Script-only")
    body = [
        (m, d, "n/a" if f is None else f"{f:.2f}", "n/a" if s is None else f"{s:.2f}")
        for m, d, f, s in rows
    ]
    widths = [max(len(r[i]) for r in [header] + body) for i in range(4)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for r in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return "\n".join(lines)
