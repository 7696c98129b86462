"""
Tests for the command-line interface
"""

import json

import pytest

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.config.settings import ConfigManager
from src.core.rings import (
    diagonal_map, ideal_from, make_map, module_direct_sum, quotient_module, regular_module, zmod
)
from src.integration.ring_files import map_to_dict, module_to_dict, ring_to_dict, save_document
from src.ui import dispatch, effective_settings, parse_args


@pytest.fixture
def config(tmp_path):
    return ConfigManager(config_file=tmp_path / "config" / "settings.yaml")


@pytest.fixture
def files(tmp_path):
    return {
        "z6": save_document(ring_to_dict(zmod(6)), tmp_path / "z6.json"),
        "reduction": save_document(map_to_dict(make_map(zmod(4), zmod(2), [1])), tmp_path / "red.json"),
        "diagonal": save_document(map_to_dict(diagonal_map(zmod(2))), tmp_path / "diag.json"),
    }


def run(argv, config):
    return dispatch(parse_args(argv), config)


class TestParser:
    """Test argument parsing"""

    def test_subcommands(self):
        args = parse_args(["--paranoid", "suite", "th1-agreement", "--seed", "3"])
        assert args.paranoid
        assert args.seed == 3
        assert args.name == "th1-agreement"

    def test_missing_command(self):
        with pytest.raises(SystemExit):
            parse_args([])

    def test_effective_settings(self, config):
        args = parse_args(["--paranoid", "suite", "all", "--profile", "quick", "--seed", "5"])
        settings = effective_settings(args, config)
        assert settings.suite.seed == 5
        assert settings.suite.max_ring_order == 16
        assert settings.limits.paranoid
        assert config.settings.suite.seed == 7


class TestCommands:
    """Test commands and exit codes"""

    def test_check_epi_json(self, config, files, capsys):
        assert run(["check-epi", str(files["reduction"]), "--json"], config) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["epimorphism"] is True
        assert data["prop2"]["all"] is True

    def test_check_epi_diagonal(self, config, files, capsys):
        assert run(["check-epi", str(files["diagonal"]), "--json"], config) == 0
        assert json.loads(capsys.readouterr().out)["epimorphism"] is False

    def test_kaehler(self, config, files, capsys):
        assert run(["kaehler", str(files["reduction"])], config) == 0
        assert "= 0" in capsys.readouterr().out

    def test_mccoy(self, config, files, capsys):
        assert run(["mccoy", str(files["z6"]), "2x + 4"], config) == 0
        assert "zero-divisor" in capsys.readouterr().out

    def test_regular(self, config, files, capsys):
        assert run(["regular", str(files["z6"]), "3; 2x"], config) == 0
        assert "regular element" in capsys.readouterr().out

    def test_regular_not_faithful(self, config, files, capsys):
        assert run(["regular", str(files["z6"]), "2x; 4"], config) == 1
        assert "NotFaithful" in capsys.readouterr().err

    def test_rewrite_not_in_kernel(self, config, files):
        assert run(["rewrite", str(files["z6"]), "x", "--at", "1"], config) == 1

    def test_rewrite_bad_point(self, config, files):
        assert run(["rewrite", str(files["z6"]), "x - 1", "--at", "one"], config) == 2

    def test_filter(self, config, files, capsys):
        assert run(["filter", str(files["reduction"]), "--json"], config) == 0
        assert json.loads(capsys.readouterr().out)["axioms"]["t3"] is True

    def test_missing_file(self, config, tmp_path):
        assert run(["check-epi", str(tmp_path / "missing.json")], config) == 2

    def test_malformed_file(self, config, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[1, 2")
        assert run(["kaehler", str(path)], config) == 2

    def test_bad_polynomial(self, config, files):
        assert run(["mccoy", str(files["z6"]), "x +* 2"], config) == 2

    def test_suite(self, config, tmp_path, capsys):
        argv = ["suite", "mccoy-oracle", "--count", "3", "--seed", "4", "--report-dir", str(tmp_path / "r")]
        assert run(argv, config) == 0
        assert "PASS" in capsys.readouterr().out
        assert (tmp_path / "r" / "mccoy-oracle-seed4.json").exists()

    def test_unknown_suite(self, config):
        assert run(["suite", "nope"], config) == 2

    def test_config(self, config, capsys):
        assert run(["config", "--write-defaults"], config) == 0
        assert config.config_file.exists()
        assert "config_file" in capsys.readouterr().out

    def test_config_set(self, config, capsys):
        assert run(["config", "--set", "suite.seed=11", "--set", "limits.paranoid=true"], config) == 0
        reloaded = ConfigManager(config_file=config.config_file)
        assert reloaded.settings.suite.seed == 11
        assert reloaded.settings.limits.paranoid is True
        assert reloaded.settings.suite.count == config.settings.suite.count

    @pytest.mark.parametrize("assignment", ["suite.seed", "suite.nope=3", "other.seed=3",
                                            "suite.seed=many", "limits.paranoid=3"])
    def test_config_set_rejects(self, config, assignment):
        assert run(["config", "--set", assignment], config) == 2
        assert config.settings.suite.seed == 7


class TestFlatCommand:
    """Test flatness of module files"""

    def test_not_flat_with_witness(self, config, tmp_path, capsys):
        z4 = zmod(4)
        path = save_document(module_to_dict(quotient_module(z4, ideal_from(z4, [2]))), tmp_path / "m.json")
        assert run(["flat", str(path), "--json"], config) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["flat"] is False
        assert set(data["witness"]) == {"ideal", "a"}

    def test_flat_sum(self, config, tmp_path, capsys):
        z6 = zmod(6)
        module = module_direct_sum(regular_module(z6), quotient_module(z6, ideal_from(z6, [3])))
        path = save_document(module_to_dict(module), tmp_path / "m.json")
        assert run(["flat", str(path)], config) == 0
        out = capsys.readouterr().out
        assert "flat" in out and "not flat" not in out

    def test_malformed_module(self, config, tmp_path):
        path = save_document({"ring": ring_to_dict(zmod(4)), "invariant_factors": [2]}, tmp_path / "m.json")
        assert run(["flat", str(path)], config) == 2
