import numpy as np
import pytest

from rtlocr import net, store
from rtlocr.errors import (
    BadMagic,
    ChecksumMismatch,
    EmptyDataset,
    IoFailure,
    UnsupportedVersion,
)
from rtlocr.imaging import LineImage
from rtlocr.script import Codec


def make_model(seed=0, s=4, h=8):
    codec = Codec(("ا", "ب", "ج"))
    params = net.init_params(s, h, len(codec), seed)
    return store.OcrModel(h, s, codec, params, {"seed": seed, "updates": 0, "sources": ["t"]})


class TestModelRoundTrip:
    def test_save_load_identity(self, tmp_path):
        model = make_model()
        path = tmp_path / "m.korm"
        store.save_model(model, path)
        loaded = store.load_model(path)
        assert loaded.equals(model)
        for k in model.params:
            assert np.array_equal(loaded.params[k], model.params[k])

    def test_byte_stable(self, tmp_path):
        model = make_model(3)
        a, b = tmp_path / "a.korm", tmp_path / "b.korm"
        store.save_model(model, a)
        store.save_model(model, b)
        assert a.read_bytes() == b.read_bytes()

    def test_unwritable_destination(self, tmp_path):
        with pytest.raises(IoFailure):
            store.save_model(make_model(), tmp_path / "no" / "such" / "dir" / "m.korm")

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "m.korm"
        store.save_model(make_model(), path)
        blob = path.read_bytes()
        path.write_bytes(blob[: len(blob) - 20])
        with pytest.raises(ChecksumMismatch):
            store.load_model(path)

    def test_flipped_version_byte(self, tmp_path):
        path = tmp_path / "m.korm"
        store.save_model(make_model(), path)
        blob = bytearray(path.read_bytes())
        blob[4] ^= 0xFF
        path.write_bytes(bytes(blob))
        with pytest.raises(UnsupportedVersion):
            store.load_model(path)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "m.korm"
        path.write_bytes(b"NOPE" + b"\x00" * 40)
        with pytest.raises(BadMagic):
            store.load_model(path)

    def test_payload_corruption_detected(self, tmp_path):
        path = tmp_path / "m.korm"
        store.save_model(make_model(), path)
        blob = bytearray(path.read_bytes())
        blob[-30] ^= 0x01
        path.write_bytes(bytes(blob))
        with pytest.raises(ChecksumMismatch):
            store.load_model(path)


class TestDataset:
    def make_samples(self, n=3, h=48):
        rng = np.random.default_rng(0)
        return [
            store.LineSample(
                LineImage((rng.random((h, 30)) < 0.2).astype(np.float32)),
                text=f"اب{i}",
                source_id="t",
                sample_id=f"s-{i:03d}",
            )
            for i in range(n)
        ]

    def test_round_trip(self, tmp_path):
        samples = self.make_samples()
        store.save_dataset(samples, tmp_path / "ds")
        loaded = store.load_dataset(tmp_path / "ds")
        assert [s.sample_id for s in loaded] == [s.sample_id for s in samples]
        assert [s.text for s in loaded] == [s.text for s in samples]
        for a, b in zip(loaded, samples):
            assert np.allclose(a.image.pixels, b.image.pixels, atol=1 / 255)

    def test_orphans_skipped(self, tmp_path, caplog):
        ds = tmp_path / "ds"
        store.save_dataset(self.make_samples(), ds)
        (ds / "orphan.png").write_bytes((ds / "s-000.png").read_bytes())
        (ds / "lonely.gt.txt").write_text("x\n")
        loaded = store.load_dataset(ds)
        assert len(loaded) == 3

    def test_trailing_newline_stripped(self, tmp_path):
        ds = tmp_path / "ds"
        store.save_dataset(self.make_samples(1), ds)
        assert (ds / "s-000.gt.txt").read_text(encoding="utf-8").endswith("\n")
        assert store.load_dataset(ds)[0].text == "اب0"

    def test_empty_directory(self, tmp_path):
        (tmp_path / "empty").mkdir()
        with pytest.raises(EmptyDataset):
            store.load_dataset(tmp_path / "empty")
        with pytest.raises(EmptyDataset):
            store.load_dataset(tmp_path / "missing")

    def test_height_renormalized(self, tmp_path):
        rng = np.random.default_rng(1)
        sample = store.LineSample(
            LineImage((rng.random((24, 40)) < 0.3).astype(np.float32)),
            text="اب",
            sample_id="tall",
        )
        store.save_dataset([sample], tmp_path / "ds")
        loaded = store.load_dataset(tmp_path / "ds", line_height=48)
        assert loaded[0].image.height == 48
