"""Transcription forms: generate them from pages, import the completed result.

A form is a single self-contained HTML file: every segmented line image is
embedded as base64 PNG next to an RTL text field, with the interactive
behavior provided by an embedded script bundle.  The round-trip contract is
the JSON manifest (``{form_id, lines: [{id, sha256, text, status, note}]}``);
imports verify each line image against its recorded digest before writing
dataset pairs.
"""

from __future__ import annotations

import base64
import hashlib
import html
import io
import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from PIL import Image

from . import imaging
from .errors import DigestMismatch, MalformedManifest, NoLinesFound
from .imaging import GrayImage
from .script import normalize_text

log = logging.getLogger(__name__)

STATUSES = ("draft", "checked")


@dataclass
class ManifestLine:
    line_id: str
    sha256: str
    text: str = ""
    status: str = "draft"
    note: str = ""


@dataclass
class TranscriptionManifest:
    form_id: str
    lines: list[ManifestLine] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "form_id": self.form_id,
                "lines": [
                    {
                        "id": ln.line_id,
                        "sha256": ln.sha256,
                        "text": ln.text,
                        "status": ln.status,
                        "note": ln.note,
                    }
                    for ln in self.lines
                ],
            },
            ensure_ascii=False,
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "TranscriptionManifest":
        try:
            raw = json.loads(text)
            lines = [
                ManifestLine(
                    line_id=str(ln["id"]),
                    sha256=str(ln["sha256"]),
                    text=str(ln.get("text", "")),
                    status=str(ln.get("status", "draft")),
                    note=str(ln.get("note", "")),
                )
                for ln in raw["lines"]
            ]
            form_id = str(raw["form_id"])
        except (ValueError, KeyError, TypeError) as e:
            raise MalformedManifest(f"cannot parse manifest: {e}") from e
        ids = [ln.line_id for ln in lines]
        if len(set(ids)) != len(ids):
            raise MalformedManifest("duplicate line ids in manifest")
        for ln in lines:
            if ln.status not in STATUSES:
                raise MalformedManifest(f"line {ln.line_id}: bad status {ln.status!r}")
            if len(ln.sha256) != 64:
                raise MalformedManifest(f"line {ln.line_id}: bad digest")
        return cls(form_id, lines)


def _line_png_bytes(page: GrayImage, box: imaging.LineBox) -> bytes:
    crop = (page.pixels[box.top : box.bottom, box.left : box.right] * 255.0).round()
    buf = io.BytesIO()
    Image.fromarray(crop.astype(np.uint8), mode="L").save(buf, "PNG")
    return buf.getvalue()


def _form_bundle() -> str:
    path = resources.files("rtlocr.data").joinpath("form_bundle.js")
    try:
        return path.read_text("utf-8")
    except FileNotFoundError:
        return "// transcription UI bundle not built; fields remain usable as plain inputs\n"


_FORM_TEMPLATE = """<!DOCTYPE html>
<html lang="ar" dir="rtl">
<head>
<meta charset="utf-8">
<title>Transcription form {form_id}</title>
<style>
body {{ font-family: sans-serif; margin: 1.5em; background: #faf8f4; }}
.line {{ margin-bottom: 1.2em; }}
.line img {{ display: block; max-width: 100%; border: 1px solid #ccc; background: #fff; }}
.line input {{ width: 100%; font-size: 1.3em; direction: rtl; }}
#progress {{ position: sticky; top: 0; background: #faf8f4; padding: .4em 0; }}
</style>
</head>
<body>
<h1>Transcription form {form_id}</h1>
<div id="progress"></div>
<div id="form-root">
{rows}
</div>
<script id="line-data" type="application/json">{payload}</script>
<script>{bundle}</script>
</body>
</html>
"""


def make_form(
    pages: list[GrayImage],
    output_html: str | Path,
    prefill: list[str] | None = None,
    form_id: str | None = None,
    line_height: int = imaging.DEFAULT_LINE_HEIGHT,
    lines_dir: str | Path | None = None,
) -> TranscriptionManifest:
    """Build a transcription form plus its manifest skeleton.

    Pages are binarized and segmented; every line crop is embedded in the HTML
    and, when ``lines_dir`` is given, also written as ``<id>.png`` for the
    import step.  Prefill texts are matched to lines by index; a count
    mismatch fills what it can and logs a warning.
    """
    records = []
    manifest_lines = []
    for p, page in enumerate(pages):
        bilevel = imaging.binarize_otsu(page).image
        boxes = imaging.segment_lines(bilevel)
        for l, box in enumerate(boxes):
            line_id = f"p{p:03d}-l{l:03d}"
            png = _line_png_bytes(page, box)
            digest = hashlib.sha256(png).hexdigest()
            records.append((line_id, png, digest, box))
    if not records:
        raise NoLinesFound("no text lines found on the supplied pages")

    prefill = prefill or []
    if prefill and len(prefill) != len(records):
        log.warning(
            "prefill has %d lines but %d were segmented; extras ignored, missing left empty",
            len(prefill), len(records),
        )
    form_id = form_id or hashlib.sha256(b"".join(r[1] for r in records)).hexdigest()[:12]

    lines_dir = Path(lines_dir) if lines_dir is not None else None
    if lines_dir is not None:
        lines_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    payload = []
    for i, (line_id, png, digest, _box) in enumerate(records):
        text = normalize_text(prefill[i]) if i < len(prefill) else ""
        manifest_lines.append(ManifestLine(line_id, digest, text, "draft", ""))
        b64 = base64.b64encode(png).decode("ascii")
        rows.append(
            f'<div class="line" data-line-id="{line_id}">'
            f'<img src="data:image/png;base64,{b64}" alt="{line_id}">'
            f'<input type="text" dir="rtl" id="text-{line_id}" value="{html.escape(text, quote=True)}">'
            f"</div>"
        )
        payload.append({"id": line_id, "sha256": digest, "text": text, "status": "draft", "note": ""})
        if lines_dir is not None:
            (lines_dir / f"{line_id}.png").write_bytes(png)

    manifest = TranscriptionManifest(form_id, manifest_lines)
    doc = _FORM_TEMPLATE.format(
        form_id=form_id,
        rows="\n".join(rows),
        payload=json.dumps({"form_id": form_id, "lines": payload}, ensure_ascii=False),
        bundle=_form_bundle(),
    )
    output_html = Path(output_html)
    output_html.write_text(doc, encoding="utf-8")
    output_html.with_suffix(".manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    return manifest


@dataclass
class ImportReport:
    imported: int = 0
    skipped_draft: int = 0
    skipped_empty: int = 0
    rejected: list[str] = field(default_factory=list)  # line ids with digest mismatches


def import_transcription(
    manifest_path: str | Path,
    images_dir: str | Path,
    output_dir: str | Path,
    allow_draft: bool = False,
) -> ImportReport:
    """Turn a completed manifest plus its line images into a dataset.

    Each line image is verified against the manifest digest; a mismatch
    rejects that line only.  Only ``checked`` lines are written unless
    ``allow_draft`` is set; empty texts are skipped.
    """
    manifest = TranscriptionManifest.from_json(Path(manifest_path).read_text(encoding="utf-8"))
    images_dir = Path(images_dir)
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    report = ImportReport()
    for ln in manifest.lines:
        if ln.status == "draft" and not allow_draft:
            report.skipped_draft += 1
            continue
        text = normalize_text(ln.text).strip()
        if not text:
            report.skipped_empty += 1
            continue
        png_path = images_dir / f"{ln.line_id}.png"
        try:
            png = png_path.read_bytes()
        except OSError:
            report.rejected.append(ln.line_id)
            log.error("line %s: image missing at %s", ln.line_id, png_path)
            continue
        if hashlib.sha256(png).hexdigest() != ln.sha256:
            report.rejected.append(ln.line_id)
            log.error("line %s: image digest mismatch, rejected", ln.line_id)
            continue
        (output_dir / f"{ln.line_id}.png").write_bytes(png)
        (output_dir / f"{ln.line_id}.gt.txt").write_text(text + "\n", encoding="utf-8")
        report.imported += 1
    return report
