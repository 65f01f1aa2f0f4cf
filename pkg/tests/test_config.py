import sys
from dataclasses import replace
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parents[1] / "hopfgal"))

import presets
import verify as vf
import pytest


def test_defaults_from_shipped_params():
    cfg = vf.load_config(vf.PARAMS_PATH)
    assert cfg.preset == "super-s3"
    assert cfg.grid == "32x32"
    assert cfg.integral_coeffs[2] == ["1", "q"]
    vf.validate_config(cfg)


def test_missing_params_file_gives_dataclass_defaults(tmp_path):
    cfg = vf.load_config(tmp_path / "absent.yaml")
    assert cfg == vf.SuiteConfig()


def test_profile_then_cli_precedence(tmp_path):
    yaml_path = tmp_path / "p.yaml"
    yaml_path.write_text("degree_bound: 5\nsamples: 20\nprofiles:\n  small: {degree_bound: 3, grid: 16x16}\n")
    cfg = vf.load_config(yaml_path)
    vf.apply_profile(cfg, yaml_path, "small")
    assert cfg.degree_bound == 3 and cfg.samples == 20
    vf.apply_overrides(cfg, vf.parse_args(["chern", "--degree-bound", "4", "--range", "2"]))
    assert cfg.degree_bound == 4
    assert cfg.n_range == 2
    assert cfg.grid == "16x16"
    assert cfg.suite == "chern"


def test_shipped_profiles():
    cfg = vf.load_config(vf.PARAMS_PATH)
    vf.apply_profile(cfg, vf.PARAMS_PATH, "full")
    assert cfg.samples is None and cfg.depth == 2
    vf.validate_config(cfg)


def test_unknown_profile(tmp_path):
    cfg = vf.load_config(None)
    with pytest.raises(ValueError, match="Unknown profile"):
        vf.apply_profile(cfg, vf.PARAMS_PATH, "nope")


@pytest.mark.parametrize("field, value, message", [
    ("suite", "nope", "Unknown suite"),
    ("n_range", 9, "n_range"),
    ("degree_bound", 1, "degree_bound"),
    ("grid", "8x8", "grid must be at least"),
    ("grid", "32", "grid must look like"),
    ("format", "xml", "Unknown format"),
    ("form", "weak", "Unknown form"),
    ("depth", 0, "depth"),
    ("samples", 0, "samples"),
    ("n", 7, "n must be"),
])
def test_validation(field, value, message):
    cfg = vf.SuiteConfig()
    setattr(cfg, field, value)
    with pytest.raises(ValueError, match=message):
        vf.validate_config(cfg)


def test_parse_grid():
    assert vf.parse_grid("48X32") == (48, 32)


def test_shift_coinvariant_without_listed_coinvariants():
    preset = presets.load_preset("classical-sl2")
    assert vf.shift_coinvariant(preset, 4) == preset.parse("a*b")
    bare = replace(preset, coinvariants=[preset.pres.one()])
    assert vf.shift_coinvariant(bare, 4) == preset.parse("b*c")
    assert vf.shift_coinvariant(bare, 1) is None
