import json

import numpy as np
import pytest

from rtlocr import cli, imaging, net, synth
from rtlocr.script import build_codec
from rtlocr.store import OcrModel, save_dataset, save_model


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    tf = synth.load_typeface()
    samples = synth.generate_corpus(tf, synth.HIGH_QUALITY, 12, seed=41)
    save_dataset(samples, root / "ds")
    page = synth.compose_page(samples[:4])
    imaging.save_png(page, root / "page.png")
    codec = build_codec([s.text for s in samples])
    model = OcrModel(48, 8, codec, net.init_params(8, 48, len(codec), 0), {"seed": 0})
    save_model(model, root / "model.korm")
    return root


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert cli.main(["no-such-command"]) == cli.EXIT_USAGE

    def test_data_error(self, workspace):
        assert cli.main(["eval", "-m", str(workspace / "model.korm"), "-d", str(workspace / "nothing")]) == cli.EXIT_DATA

    def test_unknown_config_key(self, workspace, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("bogus_key = 3\n")
        assert cli.main(["synth", "-o", str(tmp_path / "out"), "--config", str(cfg)]) == cli.EXIT_USAGE


class TestCommands:
    def test_binarize(self, workspace, tmp_path, capsys):
        out = tmp_path / "bw.png"
        assert cli.main(["binarize", str(workspace / "page.png"), "-o", str(out)]) == 0
        assert out.exists()
        assert "threshold" in capsys.readouterr().out

    def test_segment(self, workspace, capsys):
        assert cli.main(["segment", str(workspace / "page.png")]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 4

    def test_synth_writes_corpus_and_config(self, tmp_path):
        out = tmp_path / "corpus"
        assert cli.main(["synth", "-o", str(out), "--lines", "5", "--seed", "2"]) == 0
        assert len(list(out.glob("*.png"))) == 5
        manifest = json.loads((out / "corpus.json").read_text(encoding="utf-8"))
        assert manifest["lines"] == 5 and manifest["seed"] == 2
        assert (out / "config.txt").exists()

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("lines = 3\nseed = 9\n# comment\n")
        out = tmp_path / "corpus"
        assert cli.main(["synth", "-o", str(out), "--config", str(cfg), "--lines", "4"]) == 0
        assert len(list(out.glob("*.png"))) == 4
        assert "seed = 9" in (out / "config.txt").read_text()

    def test_train_and_eval_and_inspect(self, workspace, tmp_path, capsys):
        run = tmp_path / "run"
        rc = cli.main([
            "train", "-d", str(workspace / "ds"), "-o", str(run),
            "--hidden-size", "8", "--max-updates", "10", "--validation-interval", "5",
        ])
        assert rc == 0
        assert (run / "best.korm").exists()
        capsys.readouterr()
        assert cli.main(["eval", "-m", str(run / "best.korm"), "-d", str(workspace / "ds")]) == 0
        out = capsys.readouterr().out
        assert "Script-only" in out
        assert cli.main(["inspect-model", str(run / "best.korm")]) == 0
        assert "hidden size : 8" in capsys.readouterr().out

    def test_ocr_outputs_one_line_per_box(self, workspace, capsys, tmp_path):
        json_out = tmp_path / "ocr.json"
        rc = cli.main([
            "ocr", str(workspace / "page.png"), "-m", str(workspace / "model.korm"),
            "--json-output", str(json_out),
        ])
        assert rc == 0
        assert len(capsys.readouterr().out.splitlines()) == 4
        records = json.loads(json_out.read_text(encoding="utf-8"))
        assert len(records) == 4
        assert all("box" in r and "text" in r for r in records)

    def test_ocr_jobs_deterministic_order(self, workspace, capsys):
        assert cli.main(["ocr", str(workspace / "page.png"), "-m", str(workspace / "model.korm")]) == 0
        seq = capsys.readouterr().out
        assert cli.main(["ocr", str(workspace / "page.png"), "-m", str(workspace / "model.korm"), "--jobs", "4"]) == 0
        par = capsys.readouterr().out
        assert seq == par

    def test_make_form_and_import(self, workspace, tmp_path, capsys):
        form = tmp_path / "form.html"
        rc = cli.main(["make-form", str(workspace / "page.png"), "-o", str(form), "--lines-dir", str(tmp_path / "lines")])
        assert rc == 0
        manifest_path = form.with_suffix(".manifest.json")
        data = json.loads(manifest_path.read_text(encoding="utf-8"))
        for ln in data["lines"]:
            ln["status"] = "checked"
            ln["text"] = "اب"
        completed = tmp_path / "completed.json"
        completed.write_text(json.dumps(data, ensure_ascii=False), encoding="utf-8")
        rc = cli.main([
            "import-transcription", str(completed),
            "--images", str(tmp_path / "lines"), "-o", str(tmp_path / "ds"),
        ])
        assert rc == 0
        assert len(list((tmp_path / "ds").glob("*.gt.txt"))) == 4
