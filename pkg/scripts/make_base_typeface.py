"""One-off generator for the committed base typeface glyph recipes.

Coordinates are glyph-local: x in [0, width] (left to right), y in [0, 48]
top-down, baseline at y = 34.  Joining glyphs must touch both vertical edges
near the baseline so kashida strokes connect seamlessly.
"""

import json
import math
from pathlib import Path

BASELINE = 34.0


def arc(cx, cy, rx, ry, a0, a1, n=10):
    return [
        [round(cx + rx * math.cos(a), 2), round(cy + ry * math.sin(a), 2)]
        for a in [a0 + (a1 - a0) * i / (n - 1) for i in range(n)]
    ]


def circle(cx, cy, r, n=12):
    return arc(cx, cy, r, r, 0.0, 2 * math.pi, n)


def glyph(width, strokes, dots=(), joins_next=True, entry=True, exit_=None):
    """entry: baseline stub on the right edge; exit: stub on the left edge."""
    if exit_ is None:
        exit_ = joins_next
    strokes = [[[round(x, 2), round(y, 2)] for x, y in s] for s in strokes]
    if entry:
        strokes.append([[width - 2, BASELINE], [width, BASELINE]])
    if exit_:
        strokes.append([[0, BASELINE], [2, BASELINE]])
    return {
        "width": width,
        "strokes": strokes,
        "dots": [[round(x, 2), round(y, 2)] for x, y in dots],
        "joins_next": joins_next,
    }


def bowl(width, depth=4.5):
    # shallow open bowl dipping below the baseline
    return [
        [[width, BASELINE], [width * 0.82, BASELINE + depth],
         [width * 0.5, BASELINE + depth + 1], [width * 0.18, BASELINE + depth],
         [0, BASELINE]]
    ]


def teeth(width, n_teeth, h=6.0):
    pts = [[width, BASELINE]]
    step = width / (2 * n_teeth)
    x = width
    for _ in range(n_teeth):
        x -= step
        pts.append([x, BASELINE - h])
        x -= step
        pts.append([x, BASELINE])
    return [pts]


g = {}

# alef: tall bar at the right edge, no joining to the next letter
g["ا"] = glyph(6, [[[4, 12], [4, BASELINE], [6, BASELINE]]], joins_next=False, entry=True, exit_=False)

# ba family: bowl bodies distinguished by dots
g["ب"] = glyph(14, bowl(14), dots=[[7, 42]])                     # ba: 1 below
g["ت"] = glyph(14, bowl(14), dots=[[5.5, 26], [8.5, 26]])        # ta: 2 above
g["ث"] = glyph(14, bowl(14), dots=[[4.5, 27], [7, 24], [9.5, 27]])  # tha: 3 above
g["ي"] = glyph(14, bowl(14, 6.0), dots=[[5.5, 45], [8.5, 45]])   # ya: 2 below

# jeem family: hook with a descender
_hook = [
    [[12, BASELINE], [5, 26], [8, 30], [10.5, BASELINE]],
    [[10.5, BASELINE], [8, 42], [3, 44], [0.5, 38], [0, BASELINE]],
]
g["ج"] = glyph(12, _hook, dots=[[6, 38]])   # jeem: dot inside
g["ح"] = glyph(12, _hook)                   # hha
g["خ"] = glyph(12, _hook, dots=[[6, 20]])   # kha: dot above

# dal / ra families (no joining to the next letter)
_dal = [[[3, 20], [6.5, 27], [1, BASELINE], [8, BASELINE]]]
g["د"] = glyph(8, _dal, joins_next=False, exit_=False)
_ra = [[[7, 24], [6, 31], [4, 38], [1, 43]]]
g["ر"] = glyph(7, _ra, joins_next=False, entry=True, exit_=False)
g["ز"] = glyph(7, _ra, dots=[[4, 22]], joins_next=False, entry=True, exit_=False)
_waw = [circle(4.5, 27, 2.8), [[7.2, 28], [6, 36], [3, 43], [1, 45]]]
g["و"] = glyph(9, _waw, joins_next=False, entry=True, exit_=False)

# seen / sheen: teeth
g["س"] = glyph(16, teeth(16, 3))
g["ش"] = glyph(16, teeth(16, 3), dots=[[5.5, 24], [8, 21], [10.5, 24]])

# sad: loop plus tooth
_sad = [arc(11.5, 31, 4.0, 3.2, 0, 2 * math.pi, 14), [[7.5, 31], [5, BASELINE], [0, BASELINE]]]
g["ص"] = glyph(16, _sad)

# tah: loop plus tall bar
_tah = [arc(9, 31, 3.6, 3.0, 0, 2 * math.pi, 14), [[4.5, 14], [4.5, BASELINE]]]
g["ط"] = glyph(14, _tah)

# ain / ghain: two stacked open curves
_ain = [
    arc(7.5, 26, 3.5, 4.0, -0.5 * math.pi, 0.7 * math.pi, 10),
    [[5.5, 29.5], [8.5, 40], [4, 44], [0.5, 40], [0, BASELINE]],
]
g["ع"] = glyph(12, _ain)
g["غ"] = glyph(12, _ain, dots=[[7, 18]])

# fa / qaf: loop above the baseline
_fa_loop = circle(8.5, 28, 2.6)
g["ف"] = glyph(14, [_fa_loop, [[8.5, 30.6], [11, BASELINE]], [[11, BASELINE], [0, BASELINE]]], dots=[[8.5, 21]])
g["ق"] = glyph(
    14,
    [_fa_loop, [[8.5, 30.6], [11, BASELINE]],
     [[11, BASELINE], [7, 42], [2, 43], [0, BASELINE]]],
    dots=[[7, 21], [10, 21]],
)

# kaf: bar, diagonal, baseline
g["ك"] = glyph(13, [
    [[10.5, 13], [10.5, BASELINE]],
    [[9.5, 22], [4.5, 29]],
    [[10.5, BASELINE], [0, BASELINE]],
])

# lam: tall bar into a bowl
g["ل"] = glyph(12, [
    [[10, 12], [10, BASELINE]],
    [[10, BASELINE], [8, 40], [3.5, 41], [0.5, 37], [0, BASELINE]],
])

# meem: filled-ish loop with a straight descender
g["م"] = glyph(11, [
    circle(6.5, 31.2, 2.6),
    circle(6.5, 31.2, 1.2),
    [[3.9, 32], [3.9, 45]],
    [[6.5, BASELINE], [0, BASELINE]],
])

# noon: deep cup with a dot above
g["ن"] = glyph(12, [
    [[12, BASELINE], [11, 29], [9.5, 39], [6, 41.5], [2.5, 39], [1, 29], [0, BASELINE]],
], dots=[[6, 24]])

# ha: small circle sitting on the baseline
g["ه"] = glyph(10, [circle(5, 30.5, 3.2)])

ligatures = {
    # lam-alef: two crossing tall strokes
    "لا": glyph(12, [
        [[9.5, 12], [6, 26], [3, BASELINE]],
        [[2.5, 14], [6, 26], [9, BASELINE]],
        [[3, BASELINE], [9, BASELINE]],
    ], joins_next=False, exit_=False),
    # lam-meem: lam bar with the meem loop tucked underneath
    "لم": glyph(13, [
        [[10.5, 12], [10.5, BASELINE]],
        circle(6, 30.5, 2.5),
        [[3.5, 31.5], [3.5, 45]],
        [[10.5, BASELINE], [0, BASELINE]],
    ]),
}

digits = {}
_d = {
    "٠": [circle(4, 29, 1.6, 8)],                                   # 0: small dot
    "١": [[[4, 20], [4, BASELINE]]],                                # 1
    "٢": [[[6, 20], [3, 20], [3, 26], [6, 30], [3, BASELINE]]],     # 2
    "٣": [[[6.5, 21], [5, 24], [3.5, 21], [2, 24], [2, BASELINE]]],  # 3
    "٤": [[[6, 20], [3, 24], [6, 28], [3, BASELINE]]],              # 4
    "٥": [circle(4, 27, 3.4, 10)],                                  # 5
    "٦": [[[2.5, 20], [5.5, 20], [4, 28], [4, BASELINE]]],          # 6
    "٧": [[[2, 20], [4.5, 27], [7, 20]], [[4.5, 27], [4.5, BASELINE]]],  # 7
    "٨": [[[2, BASELINE], [4.5, 24], [7, BASELINE]]],               # 8
    "٩": [circle(4.5, 24, 2.4, 10), [[6.9, 25], [6, BASELINE]]],    # 9
}
for ch, strokes in _d.items():
    digits[ch] = glyph(8, strokes, joins_next=False, entry=False, exit_=False)

punct = {
    "،": glyph(6, [[[4, 31], [3, 35], [1.5, 38]]], joins_next=False, entry=False, exit_=False),  # arabic comma
    "؟": glyph(8, [[[2, 22], [5, 19], [6.5, 23], [4, 27], [4, 30]]], dots=[[4, 34]],
                    joins_next=False, entry=False, exit_=False),  # arabic question mark
    "۔": glyph(6, [[[1, BASELINE], [5, BASELINE]]], joins_next=False, entry=False, exit_=False),  # full stop
    ".": glyph(5, [], dots=[[2.5, 33]], joins_next=False, entry=False, exit_=False),
    ":": glyph(5, [], dots=[[2.5, 26], [2.5, 33]], joins_next=False, entry=False, exit_=False),
}

marks = {
    "َ": {"width": 6, "strokes": [[[0.5, 7], [5.5, 3]]], "dots": [], "position": "above"},  # fatha
    "ُ": {"width": 6, "strokes": [circle(2.5, 4.5, 1.8, 8), [[4.3, 5], [5.5, 8]]], "dots": [], "position": "above"},  # damma
    "ِ": {"width": 6, "strokes": [[[0.5, 3], [5.5, 7]]], "dots": [], "position": "below"},  # kasra
    "ّ": {"width": 7, "strokes": [[[0.5, 8], [2, 3], [3.5, 8], [5, 3], [6.5, 8]]], "dots": [], "position": "above"},  # shadda
    "ْ": {"width": 6, "strokes": [circle(3, 5, 2.0, 8)], "dots": [], "position": "above"},  # sukun
}

typeface = {
    "id": "base",
    "line_height": 48,
    "baseline": BASELINE,
    "kashida_px": [1, 3],
    "mark_density": 0.25,
    "punct_density": 0.15,
    "digit_density": 0.05,
    "stroke_radius": 1.25,
    "slant": 0.0,
    "glyphs": g,
    "digits": digits,
    "punct": punct,
    "marks": marks,
    "ligatures": ligatures,
}

out = Path(__file__).resolve().parents[1] / "src" / "rtlocr" / "data" / "typeface_base.json"
out.parent.mkdir(parents=True, exist_ok=True)
out.write_text(json.dumps(typeface, ensure_ascii=False, indent=1), encoding="utf-8")
print(f"wrote {out}")
