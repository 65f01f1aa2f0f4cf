import sys
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parents[1] / "hopfgal"))

import connection as conn
import presets
import tensor as tn
import pytest


PRESETS = ["super-s3", "slq2", "classical-sl2", "podles-eq"]


def _failed(checks):
    return [(c.check, c.parameters, c.witness) for c in checks if not c.passed]


def _setup(name):
    preset = presets.load_preset(name)
    tau = conn.translation_lift(preset)
    return preset, tau, conn.connection_form(preset, tau=tau)


@pytest.mark.parametrize("name", PRESETS)
def test_galois_certificate(name):
    preset, tau, _ = _setup(name)
    checks = conn.galois_certificate(preset, tau, preset.group.elements(3))
    assert checks and not _failed(checks)


@pytest.mark.parametrize("name", PRESETS)
def test_translation_properties(name):
    preset, tau, _ = _setup(name)
    checks = conn.translation_property_suite(preset, tau, 2)
    assert not _failed(checks)
    assert any(c.check == "translation antimultiplicative" for c in checks)


@pytest.mark.parametrize("name", PRESETS)
def test_strong_connection(name):
    preset, _, omega = _setup(name)
    checks = conn.verify_connection_form(preset, omega, True, preset.group.elements(2))
    assert [c.check for c in checks] == list(conn.CONDITIONS)
    assert not _failed(checks)


def test_monopole_translation_values():
    preset, tau, _ = _setup("super-s3")
    expected = tn.TensorElem.parse(preset.pres, "(1 + lp*lm)*d (x) a - (1 + lp*lm)*b (x) c")
    assert tau(1) == expected
    assert tau(0) == tn.TensorElem.parse(preset.pres, "1 (x) 1")


def test_nonstrong_fails_only_strongness():
    preset, tau, _ = _setup("podles-eq")
    omega = conn.connection_form(preset, "nonstrong", tau)
    checks = conn.verify_connection_form(preset, omega, True, [0, 1])
    assert [c.check for c in checks if not c.passed] == ["(v) strong"]
    weak = conn.verify_connection_form(preset, omega, False, [0, 1])
    assert len(weak) == 4 and not _failed(weak)


def test_nonstrong_needs_preset_data():
    preset = presets.load_preset("super-s3")
    with pytest.raises(ValueError, match="no non-strong"):
        conn.connection_form(preset, "nonstrong")
    with pytest.raises(ValueError, match="Unknown form"):
        conn.connection_form(preset, "weak")


@pytest.mark.parametrize("name", ["super-s3", "slq2"])
def test_roundtrips(name):
    preset, tau, omega = _setup(name)
    elements = [g for g in preset.group.elements(2) if g]
    checks = conn.roundtrip_check(preset, omega, tau, preset.pres.generators(), elements)
    assert not _failed(checks)


def test_roundtrip_cyclic():
    preset, tau, omega = _setup("podles-eq")
    checks = conn.roundtrip_check(preset, omega, tau, preset.pres.generators(), [1])
    assert not _failed(checks)


@pytest.mark.parametrize("name", ["super-s3", "classical-sl2", "podles-eq"])
def test_splitting_and_covariant_derivative(name):
    preset, _, omega = _setup(name)
    s = conn.J4(omega)
    gens = preset.pres.generators()
    assert not _failed(conn.verify_splitting(preset, s, gens))
    assert not _failed(conn.covariant_derivative_checks(preset, s, gens + [preset.pres.one()]))


def test_covariant_derivative_needs_homogeneous_section():
    preset, _, omega = _setup("classical-sl2")
    s = conn.J4(omega)
    assert tn.membership(conn.covariant_derivative(s, preset.parse("a*b")), "Omega1B_P")
    with pytest.raises(ValueError):
        conn.covariant_derivative(s, preset.parse("a + d"))


def test_psi_and_xi():
    preset, tau, omega = _setup("classical-sl2")
    gens = preset.pres.generators()
    checks = conn.psi_xi_checks(preset, omega, tau, gens, preset.group.elements(2), depth=1)
    assert not _failed(checks)
    rhat, descent = conn.psi_lift(preset, omega, depth=1, samples=10, seed=3)
    assert descent.passed and descent.parameters["triples"] == 10


def test_unitalize_recovers_splitting():
    preset, _, omega = _setup("super-s3")
    s = conn.J4(omega)
    pres = preset.pres
    db = tn.d_universal(pres, preset.parse("b*c"))

    def sbar(p):
        return s(p) + db.left_mul(pres.normal_form(p))

    gens = pres.generators()
    unital = conn.unitalize(preset, sbar, gens, 6, reference=s)
    assert unital(pres.one()) == tn.TensorElem.parse(pres, "1 (x) 1")
    for p in gens:
        assert unital(p) == s(p)


def test_unitalize_rejects_bad_candidate():
    preset, _, omega = _setup("classical-sl2")
    pres = preset.pres

    def sbar(p):
        return tn.TensorElem.pure(pres, [p, pres.one()])

    with pytest.raises(conn.SplittingError):
        conn.unitalize(preset, sbar, pres.generators(), 4)


@pytest.mark.parametrize("name", ["slq2", "classical-sl2"])
def test_integrals(name):
    preset, _, omega = _setup(name)
    nonzero = [1, -1, 2, -2]
    i0 = conn.integral_family(preset)
    i1 = conn.integral_family(preset, {2: ["1", "q"], -1: ["2"]})
    assert not _failed(conn.verify_integral(preset, i0, nonzero))
    assert not _failed(conn.verify_integral(preset, i1, nonzero))
    back = conn.integral_from_connection(preset, omega)
    for g in nonzero:
        assert back(g) == i0(g)
    omega1 = conn.connection_from_integral(preset, i1)
    assert not _failed(conn.verify_connection_form(preset, omega1, True, [0, *nonzero]))
    assert omega1(2) != omega(2)
    assert omega1(1) == omega(1)


def test_integral_needs_hopf():
    preset = presets.load_preset("super-s3")
    with pytest.raises(ValueError, match="no Hopf structure"):
        conn.integral_family(preset)


@pytest.mark.parametrize("name", ["super-s3", "classical-sl2", "podles-eq"])
def test_gauge(name):
    preset, tau, omega = _setup(name)
    f = conn.GaugeTransform.parse(preset, preset.block("gauge")["value"])
    gens = preset.pres.generators()
    elements = preset.group.elements(2)
    assert not _failed(conn.gauge_compatibility(preset, f, omega, tau, gens, elements))
    assert not _failed(conn.gauge_automorphism(preset, f, gens))
    gauged = conn.gauge_connection(f, omega)
    assert not _failed(conn.verify_connection_form(preset, gauged, True, elements))


def test_gauge_values():
    preset, _, omega = _setup("super-s3")
    f = conn.GaugeTransform.parse(preset, "1 + lp*lm")
    assert f.inverse_value == preset.parse("1 - lp*lm")
    assert f(2) == preset.parse("1 + 2*lp*lm")
    assert f(-1) == f.inverse(1)
    assert conn.gauge_connection(f, omega)(1) != omega(1)
    classical, _, omega_c = _setup("classical-sl2")
    scalar = conn.GaugeTransform.parse(classical, "3")
    assert conn.gauge_connection(scalar, omega_c)(1) == omega_c(1)
    assert isinstance(conn.gauge_action(scalar, conn.J4(omega_c)), conn.SplittingS)
    with pytest.raises(TypeError):
        conn.gauge_action(scalar, 3)


@pytest.mark.parametrize("name, value", [
    ("super-s3", "a"),
    ("super-s3", "a*b"),
    ("classical-sl2", "1 + b*c"),
    ("podles-eq", "2"),
])
def test_gauge_rejects(name, value):
    preset = presets.load_preset(name)
    with pytest.raises(conn.GaugeError):
        conn.GaugeTransform.parse(preset, value)
