import sys
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parents[1] / "hopfgal"))

import hopf
import ncpoly as nc
import presets
import scalars as sc
import tensor as tn
import pytest


def test_group_elements():
    z = hopf.GroupHopf(nc.Grading())
    assert z.elements(2) == [0, 1, -1, 2, -2]
    assert z.generators() == [1, -1]
    assert z.augmentation(3) == {3: 1, 0: -1}
    assert z.augmentation(0) == {}
    z2 = hopf.GroupHopf(nc.Grading(2, "gamma"))
    assert z2.is_cyclic2
    assert z2.elements(5) == [0, 1]
    assert z2.inv(1) == 1
    assert z2.coproduct(3) == (1, 1)


@pytest.mark.parametrize("name", ["slq2", "classical-sl2"])
def test_hopf_axioms_and_relations(name):
    preset = presets.load_preset(name)
    checks = preset.hopf.check_axioms(name, preset.relations)
    failed = [(c.check, c.parameters) for c in checks if not c.passed]
    assert not failed
    assert len(checks) == 4 * len(preset.table.names) + 2 * len(preset.relations)


def test_slq2_values():
    preset = presets.load_preset("slq2")
    h = preset.hopf
    assert h.antipode(preset.gen("alpha")) == preset.gen("delta")
    assert h.antipode(preset.parse("alpha*beta")) == preset.parse("-delta*beta")
    assert h.counit(preset.parse("delta*alpha")) == 1
    assert h.counit(preset.gen("beta")) == 0
    delta = h.coproduct(preset.gen("alpha"))
    assert delta == tn.TensorElem.parse(preset.pres, "alpha (x) alpha + beta (x) gamma")


def test_pi_I():
    preset = presets.load_preset("slq2")
    h = preset.hopf
    assert h.pi_I(preset.parse("alpha*delta")) == {0: sc.ONE}
    assert h.pi_I(preset.gen("beta")) == {}
    assert h.pi_I(preset.parse("alpha*alpha + q*alpha*beta")) == {2: sc.ONE}
    for rel in preset.relations:
        assert h.pi_I(rel) == {}


def test_ad_coaction_is_trivial_on_abelian_group():
    pres = presets.load_preset("classical-sl2").pres
    assert dict(hopf.ad_R(pres, 2).items()) == {(2, 0): sc.ONE}


def test_missing_hopf_data():
    pres = presets.load_preset("classical-sl2").pres
    with pytest.raises(hopf.HopfError):
        hopf.HopfStructure(pres, {}, {}, {})


def test_no_quotient():
    preset = presets.load_preset("classical-sl2")
    block = preset.data["hopf"]
    pres = preset.pres
    h = hopf.HopfStructure(
        pres,
        {n: tn.TensorElem.parse(pres, t) for n, t in block["coproduct"].items()},
        {n: sc.Scalar.parse(str(v)) for n, v in block["counit"].items()},
        {n: nc.NcPoly.parse(pres.table, str(v)) for n, v in block["antipode"].items()},
    )
    with pytest.raises(hopf.HopfError):
        h.pi_I(pres.gen("a"))
