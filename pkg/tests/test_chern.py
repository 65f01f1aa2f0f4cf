import sys
from math import pi
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parents[1] / "hopfgal"))

import chern as ch
import presets
import scalars as sc
import numpy as np
import pytest


GRID = (24, 24)


@pytest.mark.parametrize("name, mu", [
    ("classical-sl2", -1),
    ("classical-sl2", 1),
    ("classical-sl2", -2),
    ("classical-sl2", 2),
    ("super-s3", -1),
    ("super-s3", 2),
])
def test_chern_numbers(name, mu):
    preset = presets.load_preset(name)
    report = ch.chern_number(preset, mu, GRID)
    assert report.chern == mu
    assert report.residual < ch.RESIDUAL_LIMIT
    assert report.normalization_residual < 1e-9
    assert not report.shifted


def test_trivial_bundle_has_zero_flux():
    report = ch.lattice_chern(ch.constant_field(2), 16, 16)
    assert report.chern == 0
    assert np.abs(report.flux).max() == 0


def test_orientation_against_oracle():
    preset = presets.load_preset("classical-sl2")
    checks = ch.orientation_checks(preset, GRID)
    assert all(c.passed for c in checks), [c.witness for c in checks]
    assert abs(abs(ch.berry_phase_oracle(pi / 2)) - pi) < 1e-12
    assert abs(ch.berry_phase_oracle(0.0)) < 1e-12


def test_grid_too_small():
    with pytest.raises(ValueError):
        ch.lattice_chern(ch.constant_field(), 8, 32)


def test_persistent_singularity(capsys):
    def vanishing(theta, phi):
        shape = np.broadcast(np.asarray(theta), np.asarray(phi)).shape
        return np.zeros(shape + (2,), dtype=complex)

    with pytest.raises(ch.ChernError):
        ch.lattice_chern(vanishing, 16, 16)
    assert "[warn]" in capsys.readouterr().err


def test_body_sets_q_to_one_and_drops_odd_letters():
    sup = presets.load_preset("super-s3")
    p = ch.body(sup, sup.parse("a*d + lp*lm"))
    theta = np.linspace(0.1, 3.0, 7)
    values = ch.eval_su2(p, theta, np.zeros_like(theta))
    assert np.allclose(values, np.cos(theta / 2) ** 2)
    slq = presets.load_preset("slq2")
    assert ch.body(slq, slq.parse("q**3*alpha*beta")).terms == {(1, 1, 0, 0): 1 + 0j}


def test_body_pole_at_q1():
    slq = presets.load_preset("slq2")
    with pytest.raises(sc.ScalarError):
        ch.body(slq, slq.parse("1/(q - 1)*alpha"))


def test_su2_point_is_unitary():
    point = ch.su2_point(np.array([0.3, 1.2]), np.array([0.5, 4.0]), 0.7)
    det = point["a"] * point["d"] - point["b"] * point["c"]
    assert np.allclose(det, 1)


def test_pairing_report(tmp_path):
    preset = presets.load_preset("classical-sl2")
    csv_path = tmp_path / "flux.csv"
    rows, checks = ch.pairing_report(preset, [0, 1], (16, 16), refine=True, csv_path=csv_path)
    assert all(c.passed for c in checks), [(c.check, c.witness) for c in checks if not c.passed]
    assert [r["n"] for r in rows] == [0, 1]
    assert rows[1]["minus"]["chern"] == -1 and rows[1]["nontrivial"]
    assert not rows[0]["nontrivial"]
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "mu,grid,j,k,flux"
    assert len(lines) == 1 + 3 * 15 * 16
