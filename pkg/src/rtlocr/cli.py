"""Command-line surface for the whole pipeline.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
A config file is line-oriented ``key = value`` (``#`` comments); flags given
on the command line win.  Every run echoes its effective configuration into
the output directory so it can be reproduced.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import imaging, net, synth, transcribe
from .train import TrainConfig, train as run_train
from .decoder import best_path_decode
from .errors import DataError, RtlOcrError
from .evaluate import evaluate_model, format_table
from .script import ScriptFilter
from .store import load_dataset, load_model, save_dataset

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

# keys a config file may set; anything else is rejected
CONFIG_KEYS = {
    "hidden_size": int,
    "learning_rate": float,
    "momentum": float,
    "clip_norm": float,
    "max_updates": int,
    "validation_fraction": float,
    "validation_interval": int,
    "patience": int,
    "seed": int,
    "line_height": int,
    "binarize_augment": float,
    "lines": int,
    "typeface": str,
    "quality": str,
    "mutation_seed": int,
    "jobs": int,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_config_file(path: Path) -> dict:
    values = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = CONFIG_KEYS[key](value.strip())
        except ValueError as e:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {e}") from e
    return values


def effective_config(args, keys: list[str]) -> dict:
    file_values = parse_config_file(Path(args.config)) if getattr(args, "config", None) else {}
    cfg = {}
    for key in keys:
        cfg[key] = file_values.get(key)
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
    return {k: v for k, v in cfg.items() if v is not None}


def echo_config(cfg: dict, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = [f"{k} = {v}" for k, v in sorted(cfg.items())]
    (out_dir / "config.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def _typeface_from_args(name: str, mutation_seed: int) -> synth.Typeface:
    tf = synth.load_typeface("base")
    if name not in ("base", tf.id):
        raise UsageError(f"unknown typeface {name!r} (only 'base' is built in; use --mutation-seed)")
    if mutation_seed:
        tf = synth.derive_typeface(tf, mutation_seed)
    return tf


def cmd_binarize(args) -> int:
    page = imaging.load_image(Path(args.input).read_bytes())
    result = imaging.binarize_otsu(page)
    imaging.save_png(result.image, args.output)
    print(f"threshold {result.threshold:.4f}" + (" (degenerate)" if result.degenerate else ""))
    return EXIT_OK


def cmd_segment(args) -> int:
    page = imaging.load_image(Path(args.input).read_bytes())
    bilevel = imaging.binarize_otsu(page).image
    boxes = imaging.segment_lines(bilevel, args.min_line_height, args.smooth_radius)
    for box in boxes:
        print(f"{box.top} {box.bottom} {box.left} {box.right}")
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, box in enumerate(boxes):
            line = imaging.normalize_line(page, box, args.line_height or imaging.DEFAULT_LINE_HEIGHT)
            imaging.save_png(line, out / f"line-{i:03d}.png")
    return EXIT_OK


def cmd_synth(args) -> int:
    cfg = effective_config(args, ["lines", "seed", "typeface", "quality", "mutation_seed"])
    cfg.setdefault("lines", 100)
    cfg.setdefault("seed", 1)
    cfg.setdefault("typeface", "base")
    cfg.setdefault("quality", "high")
    cfg.setdefault("mutation_seed", 0)
    tf = _typeface_from_args(cfg["typeface"], cfg["mutation_seed"])
    quality = synth.QualityProfile(cfg["quality"])
    samples = synth.generate_corpus(tf, quality, cfg["lines"], cfg["seed"])
    out = Path(args.output)
    save_dataset(samples, out)
    (out / "corpus.json").write_text(
        synth.corpus_manifest(tf, quality, cfg["lines"], cfg["seed"]), encoding="utf-8"
    )
    echo_config(cfg, out)
    print(f"wrote {len(samples)} lines to {out}")
    return EXIT_OK


def cmd_make_form(args) -> int:
    pages = [imaging.load_image(Path(p).read_bytes()) for p in args.pages]
    prefill = None
    if args.prefill:
        prefill = Path(args.prefill).read_text(encoding="utf-8").splitlines()
    out_html = Path(args.output)
    lines_dir = Path(args.lines_dir) if args.lines_dir else out_html.with_suffix("") .parent / (out_html.stem + "-lines")
    manifest = transcribe.make_form(pages, out_html, prefill=prefill, lines_dir=lines_dir)
    print(f"form {manifest.form_id}: {len(manifest.lines)} lines -> {out_html}")
    return EXIT_OK


def cmd_import_transcription(args) -> int:
    report = transcribe.import_transcription(
        args.manifest, args.images, args.output, allow_draft=args.allow_draft
    )
    print(
        f"imported {report.imported}, skipped {report.skipped_draft} draft / "
        f"{report.skipped_empty} empty, rejected {len(report.rejected)}"
    )
    return EXIT_OK if not report.rejected else EXIT_DATA


def cmd_train(args) -> int:
    keys = [
        "hidden_size", "learning_rate", "momentum", "clip_norm", "max_updates",
        "validation_fraction", "validation_interval", "patience", "seed", "line_height",
        "binarize_augment",
    ]
    cfg_values = effective_config(args, keys)
    cfg = TrainConfig(**cfg_values)
    dataset = load_dataset(args.dataset, cfg.line_height)
    out = Path(args.output)
    echo_config(cfg_values, out)
    model, report = run_train(dataset, cfg, run_dir=out)
    print(
        f"trained {report.updates_done} updates, best at {report.best_updates} "
        f"({report.seconds_per_update * 1000:.1f} ms/update) -> {report.best_checkpoint}"
    )
    return EXIT_OK


def cmd_ocr(args) -> int:
    model = load_model(args.model)
    page = imaging.load_image(Path(args.input).read_bytes())
    bilevel = imaging.binarize_otsu(page).image
    boxes = imaging.segment_lines(bilevel)
    lines = [imaging.normalize_line(bilevel, box, model.line_height) for box in boxes]

    def recognize(line):
        return best_path_decode(net.forward(model.params, line), model.codec)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            recs = list(pool.map(recognize, lines))
    else:
        recs = [recognize(line) for line in lines]

    for rec in recs:
        print(rec.text)
    if args.json_output:
        records = [
            {
                "box": [box.top, box.bottom, box.left, box.right],
                "text": rec.text,
                "confidence": float(np.mean(rec.confidences)) if rec.confidences else None,
            }
            for box, rec in zip(boxes, recs)
        ]
        Path(args.json_output).write_text(
            json.dumps(records, ensure_ascii=False, indent=2), encoding="utf-8"
        )
    return EXIT_OK


def cmd_eval(args) -> int:
    model = load_model(args.model)
    dataset = load_dataset(args.dataset, model.line_height)
    report = evaluate_model(model, dataset)
    table = format_table([(Path(args.model).name, Path(args.dataset).name, report.full_accuracy, report.script_accuracy)])
    print(table)
    if args.json_output:
        Path(args.json_output).write_text(report.to_json(), encoding="utf-8")
    return EXIT_OK


def cmd_inspect_model(args) -> int:
    model = load_model(args.model)
    n_params = sum(int(np.prod(v.shape)) for v in model.params.values())
    print(f"line height : {model.line_height}")
    print(f"hidden size : {model.hidden_size}")
    print(f"codec size  : {len(model.codec)}")
    print(f"parameters  : {n_params}")
    print(f"codec       : {''.join(model.codec.chars)!r}")
    for k, v in sorted(model.meta.items()):
        print(f"meta {k}: {v}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="rtlocr", description=__doc__)
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("binarize", help="Otsu-binarize a page image")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_binarize)

    p = sub.add_parser("segment", help="segment a page into text lines")
    p.add_argument("input")
    p.add_argument("--min-line-height", type=int, default=imaging.DEFAULT_MIN_LINE_HEIGHT)
    p.add_argument("--smooth-radius", type=int, default=imaging.DEFAULT_SMOOTH_RADIUS)
    p.add_argument("--line-height", type=int)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("synth", help="generate a synthetic line corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--config")
    p.add_argument("--lines", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--typeface")
    p.add_argument("--quality", choices=["high", "low"])
    p.add_argument("--mutation-seed", type=int, dest="mutation_seed")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("make-form", help="build a transcription form from pages")
    p.add_argument("pages", nargs="+")
    p.add_argument("-o", "--output", required=True, help="output HTML path")
    p.add_argument("--prefill", help="plain text file, one line per segmented line")
    p.add_argument("--lines-dir", help="where to keep the line PNGs for import")
    p.set_defaults(func=cmd_make_form)

    p = sub.add_parser("import-transcription", help="import a completed manifest")
    p.add_argument("manifest")
    p.add_argument("--images", required=True, help="directory of line PNGs")
    p.add_argument("-o", "--output", required=True, help="dataset output directory")
    p.add_argument("--allow-draft", action="store_true")
    p.set_defaults(func=cmd_import_transcription)

    p = sub.add_parser("train", help="train a line recognizer")
    p.add_argument("-d", "--dataset", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--config")
    for key, typ in CONFIG_KEYS.items():
        if key in ("lines", "typeface", "quality", "mutation_seed", "jobs"):
            continue
        p.add_argument(f"--{key.replace('_', '-')}", type=typ, dest=key)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("ocr", help="recognize a page image")
    p.add_argument("input")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json-output")
    p.set_defaults(func=cmd_ocr)

    p = sub.add_parser("eval", help="evaluate a model on a dataset")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-d", "--dataset", required=True)
    p.add_argument("--json-output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("inspect-model", help="print model metadata")
    p.add_argument("model")
    p.set_defaults(func=cmd_inspect_model)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except RtlOcrError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:  # pragma: no cover - safety net
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
