import sys
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parents[1] / "hopfgal"))

import bundles as bd
import connection as conn
import presets
import pytest


def _failed(checks):
    return [(c.check, c.parameters, c.witness) for c in checks if not c.passed]


@pytest.mark.parametrize("name, mu, size", [
    ("super-s3", -1, 3),
    ("super-s3", 2, 5),
    ("super-s3", 0, 1),
    ("classical-sl2", -3, 4),
    ("slq2", 2, 3),
    ("podles-eq", 1, 3),
    ("podles-eq", 2, 1),
])
def test_line_bundle_generators(name, mu, size):
    preset = presets.load_preset(name)
    module = bd.line_bundle_generators(preset, mu)
    assert module.size == size


def test_super_generators_carry_the_odd_letter():
    preset = presets.load_preset("super-s3")
    gens = bd.line_bundle_generators(preset, -2).generators
    assert gens == [preset.parse(t) for t in ["a*a", "a*c", "c*c", "a*lp", "c*lp"]]


def test_mu_out_of_range():
    preset = presets.load_preset("classical-sl2")
    with pytest.raises(ValueError):
        bd.line_bundle_generators(preset, bd.MAX_MU + 1)


@pytest.mark.parametrize("name", ["super-s3", "slq2", "classical-sl2", "podles-eq"])
def test_independence(name):
    preset = presets.load_preset(name)
    assert not _failed(bd.independence_report(preset, 2))


@pytest.mark.parametrize("name", ["classical-sl2", "podles-eq"])
def test_grading_and_coinvariants(name):
    preset = presets.load_preset(name)
    assert not _failed(bd.grading_partition_check(preset, 4))
    assert not _failed(bd.coinvariant_generation_check(preset, 4))


def test_coinvariant_bound():
    preset = presets.load_preset("classical-sl2")
    with pytest.raises(ValueError):
        bd.coinvariant_generation_check(preset, bd.MAX_COINVARIANT_BOUND + 1)


@pytest.mark.parametrize("name, mu", [
    ("super-s3", -1),
    ("super-s3", 2),
    ("super-s3", -3),
    ("super-s3", 3),
    ("super-s3", -4),
    ("super-s3", 4),
    ("slq2", 1),
    ("classical-sl2", -2),
])
def test_projector_from_splitting(name, mu):
    preset = presets.load_preset(name)
    cert = bd.projector_from_splitting(conn.default_splitting(preset), bd.line_bundle_generators(preset, mu))
    assert not _failed(cert.checks)
    assert len(cert.E) == cert.size


def test_classical_projector_entries():
    preset = presets.load_preset("classical-sl2")
    cert = bd.projector_from_splitting(conn.default_splitting(preset), bd.line_bundle_generators(preset, 1))
    expected = [["b*c + 1", "-d*c"], ["a*b", "-b*c"]]
    assert cert.E == [[preset.parse(t) for t in r] for r in expected]
    assert bd.export_matrix(cert.E)["size"] == [2, 2]
    trace = cert.E[0][0] + cert.E[1][1]
    assert trace == preset.pres.one()


@pytest.mark.parametrize("name, mu", [
    ("super-s3", -1),
    ("super-s3", 1),
    ("super-s3", -2),
    ("super-s3", 2),
    ("super-s3", -3),
    ("super-s3", 3),
    ("super-s3", -4),
    ("super-s3", 4),
    ("classical-sl2", 2),
    ("slq2", -1),
])
def test_hermitian_projector(name, mu):
    preset = presets.load_preset(name)
    cert = bd.hermitian_projector(preset, mu)
    assert not _failed(cert.checks)
    assert len(cert.F) == len(cert.column) == len(cert.row)


def test_hermitian_frame_matches_checked_projector():
    preset = presets.load_preset("super-s3")
    frame = bd.hermitian_frame(preset, 3)
    assert frame.checks == []
    assert frame.F == bd.hermitian_projector(preset, 3).F


def test_hermitian_needs_data():
    preset = presets.load_preset("slq2")
    with pytest.raises(bd.ProjectorError):
        bd.hermitian_projector(preset, 2)


@pytest.mark.parametrize("name, mu", [
    ("super-s3", -1),
    ("super-s3", 1),
    ("super-s3", 2),
    ("super-s3", -3),
    ("super-s3", 3),
    ("classical-sl2", -1),
    ("slq2", 1),
])
def test_module_iso(name, mu):
    preset = presets.load_preset(name)
    cert = bd.projector_pair(preset, mu)
    assert not _failed(cert.checks)
    assert sum(c.check.startswith("iso") for c in cert.checks) == 4


def test_corrupted_witness_is_caught():
    preset = presets.load_preset("classical-sl2")
    cert = bd.projector_pair(preset, 1)
    zero = preset.pres.zero()
    bad_L = [[zero for _ in r] for r in cert.L]
    checks = bd.verify_module_iso(preset, cert.E, cert.F, bad_L, cert.L_tilde)
    assert [c.check for c in checks if not c.passed] == ["iso E L L~ = E", "iso F L~ L = F"]
    swapped = [cert.L[1], cert.L[0]]
    assert _failed(bd.verify_module_iso(preset, cert.E, cert.F, swapped, cert.L_tilde))


@pytest.mark.parametrize("name", ["super-s3", "slq2", "classical-sl2"])
def test_freeness(name):
    preset = presets.load_preset(name)
    assert not _failed(bd.freeness_certificate(preset))


def test_podles_idempotents_and_nonstrong_witness():
    preset = presets.load_preset("podles-eq")
    assert not _failed(bd.auxiliary_idempotents(preset))
    witness = bd.nonstrong_witness(preset)
    assert not _failed(witness)
    assert witness[1].parameters["odd_left_factors"]


def test_matrix_helpers():
    preset = presets.load_preset("classical-sl2")
    I2 = bd.identity(preset, 2)
    M = bd.permutation(preset, [1, 0])
    assert bd.mat_mul(preset, M, M) == I2
    A = bd.outer(preset, [preset.gen("a"), preset.gen("c")], [preset.gen("d"), preset.parse("-b")])
    assert bd.dagger(preset, bd.dagger(preset, A)) == A
    assert bd.block_diag(preset, I2, [[preset.gen("a")]])[2][2] == preset.gen("a")
    with pytest.raises(ValueError):
        bd.mat_mul(preset, A, [[preset.gen("a")]])
