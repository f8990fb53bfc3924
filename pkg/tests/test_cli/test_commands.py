import json

import pytest
from click.testing import CliRunner

from genfunc.cli import main
from genfunc.models.run_config import RunConfig


def write_config(directory) -> str:
    config = {
        "box": {"n": 2**14},
        "ladder": {"k_min": 5.0, "k_max": 7.5, "step": 0.5},
        "output_dir": str(directory / "run"),
    }
    path = directory / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return str(path)


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.delenv("GENFUNC_CONFIG_FILE", raising=False)
    monkeypatch.delenv("GENFUNC_JOBS", raising=False)
    return CliRunner()


@pytest.fixture
def config(tmp_path):
    return write_config(tmp_path)


class TestInit:
    def test_writes_defaults(self, runner, tmp_path):
        result = runner.invoke(main, ["--out", str(tmp_path), "init"])
        assert result.exit_code == 0
        written = json.loads((tmp_path / "config.json").read_text(encoding="utf-8"))
        assert RunConfig.model_validate(written) == RunConfig()

    def test_output_dir_from_environment(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("GENFUNC_OUTPUT_DIR", str(tmp_path / "env_runs"))
        result = runner.invoke(main, ["init"])
        assert result.exit_code == 0
        assert (tmp_path / "env_runs" / "config.json").exists()

    def test_planar(self, runner, tmp_path):
        result = runner.invoke(main, ["--out", str(tmp_path), "init", "--planar"])
        assert result.exit_code == 0
        written = json.loads((tmp_path / "config.json").read_text(encoding="utf-8"))
        assert written["box"]["dim"] == 2


class TestScales:
    @pytest.mark.parametrize(
        "family, code", [("bounded", 0), ("log1", 0), ("r1", 0), ("log", 2)]
    )
    def test_exit_codes(self, runner, config, family, code):
        result = runner.invoke(main, ["--config", config, "scales", "--family", family])
        assert result.exit_code == code, result.output

    def test_reports_do_not_depend_on_jobs(self, runner, config, tmp_path):
        path = tmp_path / "run" / "reports" / "scales_R1.json"
        runner.invoke(main, ["--config", config, "--jobs", "1", "scales", "--family", "r1"])
        serial = path.read_bytes()
        runner.invoke(main, ["--config", config, "--jobs", "4", "scales", "--family", "r1"])
        assert path.read_bytes() == serial

    def test_unknown_family(self, runner, config):
        result = runner.invoke(main, ["--config", config, "scales", "--family", "tiny"])
        assert result.exit_code == 2
        assert "Invalid value" in result.output


class TestErrors:
    def test_missing_config(self, runner, tmp_path):
        result = runner.invoke(main, ["--config", str(tmp_path / "nope.json"), "scales"])
        assert result.exit_code == 4
        assert "ConfigError" in result.output

    def test_unresolvable_ladder(self, runner, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"box": {"n": 1024}}), encoding="utf-8")
        result = runner.invoke(main, ["--config", str(path), "scales"])
        assert result.exit_code == 4

    def test_unknown_spec(self, runner, config):
        result = runner.invoke(main, ["--config", config, "embed", "--spec", "no_such_thing"])
        assert result.exit_code == 4


class TestStages:
    def test_embed_then_classify(self, runner, config, tmp_path):
        result = runner.invoke(
            main, ["--config", config, "embed", "--spec", "delta", "--then", "classify",
                   "--family", "r1"]
        )
        assert result.exit_code == 0, result.output
        run = tmp_path / "run"
        assert (run / "nets" / "iota_delta" / "meta.json").exists()
        stored = json.loads((run / "nets" / "iota_delta" / "embedding.json").read_text())
        assert stored["spec"]["tag"] == "delta_deriv"
        assert (run / "mollifier" / "mollifier.json").exists()
        document = json.loads((run / "reports" / "classify_iota_delta.json").read_text())
        assert document["summary"]["family"] == "R1"
        assert document["config_digest"] == RunConfig.model_validate(
            json.loads((run / "config.json").read_text())
        ).digest()

    def test_classify_outside_the_family(self, runner, config):
        result = runner.invoke(
            main, ["--config", config, "classify", "--spec", "delta", "--family", "bounded"]
        )
        assert result.exit_code == 2

    def test_emit_plots(self, runner, config, tmp_path):
        result = runner.invoke(
            main, ["--config", config, "--emit-plots", "classify", "--spec", "delta"]
        )
        assert result.exit_code == 0, result.output
        script = tmp_path / "run" / "profiles" / "classify_iota_delta.gp"
        assert 'plot "classify_iota_delta.csv"' in script.read_text(encoding="utf-8")

    @pytest.mark.parametrize("command", ["fourier", "exchange"])
    def test_fourier_stages(self, runner, config, command):
        result = runner.invoke(main, ["--config", config, command, "--spec", "delta"])
        assert result.exit_code == 0, result.output

    def test_global(self, runner, config):
        result = runner.invoke(
            main, ["--config", config, "global", "--spec", "delta", "--family", "r1"]
        )
        assert result.exit_code == 0, result.output
        assert "agree" in result.output

    def test_wavefront(self, runner, config, tmp_path):
        result = runner.invoke(
            main, ["--config", config, "wavefront", "--spec", "delta", "--family", "bounded"]
        )
        assert result.exit_code == 0, result.output
        assert (tmp_path / "run" / "profiles" / "wavefront_B_iota_delta.csv").exists()
        document = json.loads(
            (tmp_path / "run" / "reports" / "wavefront_B_iota_delta.json").read_text()
        )
        flagged = document["summary"]["wavefront"]
        assert [[0.0], "+"] in flagged
        assert [[0.0], "-"] in flagged


class TestReport:
    def test_no_reports(self, runner, config):
        result = runner.invoke(main, ["--config", config, "report"])
        assert result.exit_code == 0
        assert "No reports" in result.output

    def test_failure_dominates(self, runner, config):
        runner.invoke(main, ["--config", config, "scales", "--family", "bounded"])
        assert runner.invoke(main, ["--config", config, "report"]).exit_code == 0
        runner.invoke(main, ["--config", config, "scales", "--family", "log"])
        result = runner.invoke(main, ["--config", config, "report"])
        assert result.exit_code == 2
        assert "scales_L_og" in result.output
