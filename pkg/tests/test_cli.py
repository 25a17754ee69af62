import json

import numpy as np
import pytest

from discordlab.cli import main
from discordlab.estimators import ScatterPoint
from discordlab.io import CsvFormatError, read_scatter, write_scatter

SMOKE = ["run", "--m", "4", "--a-grid", "10", "--wdown-per-a", "6", "--states", "10", "--seed", "1", "--workers", "1"]


@pytest.fixture(scope="module")
def smoke_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("smoke")
    assert main([*SMOKE, "--out", str(out)]) == 0
    return out


class TestRun:
    def test_outputs(self, smoke_run):
        lines = (smoke_run / "scatter.csv").read_text().splitlines()
        assert len(lines) == 62
        assert lines[0] == "channel_id,a,weight_entropy_bits,avg_discord_bits,avg_distortion,n_states,argmin_mode"
        manifest = json.loads((smoke_run / "manifest.json").read_text())
        assert manifest["n_points"] == 61
        assert manifest["config"]["m"] == 4
        assert manifest["fit"]["rmse_denominator"] == "n"
        assert sum(b["n"] for b in manifest["residual_spread"]) == 61
        assert not (smoke_run / "scatter.csv.partial").exists()
        assert (smoke_run / "scatter.svg").read_text().count("<circle") == 61

    def test_rerun_is_byte_identical(self, smoke_run, tmp_path):
        assert main([*SMOKE, "--out", str(tmp_path)]) == 0
        assert (tmp_path / "scatter.csv").read_bytes() == (smoke_run / "scatter.csv").read_bytes()

    def test_resume_after_interruption(self, smoke_run, tmp_path):
        full = (smoke_run / "scatter.csv").read_text()
        lines = full.splitlines(keepends=True)
        # simulate a crash with 20 rows written and a torn 21st
        main([*SMOKE, "--out", str(tmp_path)])
        (tmp_path / "scatter.csv").unlink()
        (tmp_path / "scatter.csv.partial").write_text("".join(lines[:21]) + lines[21][:7])
        fp = json.loads((smoke_run / "manifest.json").read_text())["config"]
        from discordlab.cli import _fingerprint
        from discordlab.experiment import ExperimentConfig

        fingerprint = _fingerprint(ExperimentConfig(**fp))
        (tmp_path / "checkpoint.json").write_text(json.dumps({"fingerprint": fingerprint}))
        assert main([*SMOKE, "--out", str(tmp_path)]) == 0
        assert (tmp_path / "scatter.csv").read_text() == full

    def test_stale_checkpoint_is_ignored(self, smoke_run, tmp_path):
        (tmp_path / "scatter.csv.partial").write_text("garbage\n")
        (tmp_path / "checkpoint.json").write_text(json.dumps({"fingerprint": "other"}))
        assert main([*SMOKE, "--out", str(tmp_path)]) == 0
        assert (tmp_path / "scatter.csv").read_bytes() == (smoke_run / "scatter.csv").read_bytes()

    def test_bad_arguments(self, tmp_path):
        assert main(["run", "--m", "9", "--out", str(tmp_path)]) == 1
        assert main(["run", "--states", "0", "--out", str(tmp_path)]) == 1
        assert main(["nonsense"]) == 1


class TestFit:
    def test_exact_parabola(self, tmp_path, capsys):
        x = np.linspace(0, 1, 12)
        pts = [ScatterPoint(i, 0.5, 1.0, 1 - 2 * v * v + 3 * v, v, 5, 0) for i, v in enumerate(x)]
        write_scatter(tmp_path / "scatter.csv", pts)
        assert main(["fit", str(tmp_path / "scatter.csv")]) == 0
        assert "t1=-2 t2=3 t3=1" in capsys.readouterr().out
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["fits"][0]["t2"] == pytest.approx(3)

    def test_empty_csv(self, tmp_path, capsys):
        (tmp_path / "empty.csv").write_text("")
        assert main(["fit", str(tmp_path / "empty.csv")]) == 1
        assert "empty" in capsys.readouterr().err

    def test_malformed_line_named(self, smoke_run, tmp_path, capsys):
        lines = (smoke_run / "scatter.csv").read_text().splitlines()
        lines[5] = "4,0.1,abc,0,0,10,0"
        (tmp_path / "bad.csv").write_text("\n".join(lines) + "\n")
        assert main(["fit", str(tmp_path / "bad.csv")]) == 1
        assert "line 6" in capsys.readouterr().err

    def test_degenerate(self, tmp_path):
        pts = [ScatterPoint(i, 0.5, 1.0, 0.1, 0.2, 5, 0) for i in range(5)]
        write_scatter(tmp_path / "flat.csv", pts)
        assert main(["fit", str(tmp_path / "flat.csv")]) == 1


class TestPlot:
    def test_smoke(self, smoke_run, tmp_path):
        svg_path = tmp_path / "out.svg"
        assert main(["plot", str(smoke_run / "scatter.csv"), str(svg_path)]) == 0
        svg = svg_path.read_text()
        assert svg.count("<circle") == 61
        assert svg.count("<path") == 1

    def test_identity_only(self, tmp_path):
        write_scatter(tmp_path / "one.csv", [ScatterPoint(0, float("nan"), 0.0, 0.0, 0.0, 3, 0)])
        assert main(["plot", str(tmp_path / "one.csv"), str(tmp_path / "one.svg"), "--m", "3"]) == 0
        svg = (tmp_path / "one.svg").read_text()
        assert svg.count("<circle") == 1 and "<path" not in svg

    def test_max_entropy_color(self, tmp_path):
        from discordlab.plot import max_channel_entropy

        h = max_channel_entropy(3)
        pts = [ScatterPoint(0, 1.0, h, 0.3, 0.4, 3, 0), ScatterPoint(1, float("nan"), 0.0, 0.0, 0.0, 3, 0)]
        write_scatter(tmp_path / "c.csv", pts)
        assert main(["plot", str(tmp_path / "c.csv"), str(tmp_path / "c.svg"), "--m", "3"]) == 0
        assert 'fill="#fde725"' in (tmp_path / "c.svg").read_text()


class TestTwobit:
    ARGS = ["twobit", "--states", "200", "--mu-points", "21"]

    def test_pass(self, tmp_path, capsys):
        assert main([*self.ARGS, "--out", str(tmp_path)]) == 0
        assert "PASS" in capsys.readouterr().out
        report = json.loads((tmp_path / "twobit_report.json").read_text())
        assert report["passed"] and report["violations"] == 0
        rows = (tmp_path / "twobit_curves.csv").read_text().splitlines()
        assert len(rows) == 1 + 10 * 21

    def test_injected_sign_flip(self, tmp_path, capsys):
        assert main([*self.ARGS, "--out", str(tmp_path), "--inject-sign-flip"]) == 2
        assert "violation" in capsys.readouterr().err

    def test_half_rejected(self, tmp_path):
        assert main(["twobit", "--mu", "0.1,0.5,0.9", "--out", str(tmp_path)]) == 1


class TestCsv:
    def test_round_trip(self, tmp_path):
        pts = [
            ScatterPoint(0, 0.25, 1.2345678901234567, 0.1 + 0.2, 1 / 3, 100, 17),
            ScatterPoint(1, float("nan"), 0.0, -2.5e-16, 0.0, 100, 0),
        ]
        write_scatter(tmp_path / "s.csv", pts)
        back = read_scatter(tmp_path / "s.csv")
        assert back[0] == pts[0]
        assert np.isnan(back[1].a) and back[1].avg_discord == pts[1].avg_discord

    def test_wrong_header(self, tmp_path):
        (tmp_path / "s.csv").write_text("x,y\n1,2\n")
        with pytest.raises(CsvFormatError):
            read_scatter(tmp_path / "s.csv")
