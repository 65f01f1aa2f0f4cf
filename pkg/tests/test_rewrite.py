import sys
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parents[1] / "hopfgal"))

import ncpoly as nc
import presets
import rewrite as rw
import scalars as sc
import tensor
import pytest


PRESETS = ["super-s3", "slq2", "classical-sl2", "podles-eq"]


@pytest.mark.parametrize("name", PRESETS)
def test_presets_are_confluent(name):
    preset = presets.load_preset(name)
    report = rw.check_confluence(preset.pres, 4)
    assert report.passed, report.failures[:3]
    assert report.pairs_checked > 0


@pytest.mark.parametrize("name", PRESETS)
def test_relations_reduce_to_zero(name):
    preset = presets.load_preset(name)
    for rel in preset.relations:
        assert not preset.pres.normal_form(rel), rel.to_text()


def test_non_confluent_system_is_reported():
    table = nc.GeneratorTable(("a", "b"), (0, 0))
    pres = rw.Presentation.from_text(table, ["b*b -> a", "b*a -> 2*a*b"])
    report = rw.check_confluence(pres, 3)
    assert not report.passed
    assert report.failures[0]["word"] == "b*b*a"


def test_normal_forms():
    sup = presets.load_preset("super-s3").pres
    assert sup.parse("d*a") == sup.parse("b*c + 1 - lp*lm")
    assert sup.parse("lm*lp*lm") == 0
    slq = presets.load_preset("slq2").pres
    assert slq.parse("delta*alpha") == slq.parse("1 + q*beta*gamma")
    assert slq.parse("beta*alpha") == slq.parse("q*alpha*beta")
    assert slq.mul(slq.gen("alpha"), slq.gen("delta")) == slq.parse("1 + q**-1*beta*gamma")


def test_normal_words():
    pres = presets.load_preset("classical-sl2").pres
    assert len(pres.normal_words(2)) == 14
    degree_zero = pres.normal_words(2, 0)
    assert len(degree_zero) == 4
    assert all(pres.is_normal(w) for w in degree_zero)


@pytest.mark.parametrize("rules", [
    ["y*x -> x"],
    ["x*y -> y*x"],
    ["x*y"],
    ["2*y*x -> x*y"],
    ["y*x -> x*y", "y*x -> 0"],
])
def test_bad_rules(rules):
    table = nc.GeneratorTable(("x", "y"), (1, -1))
    with pytest.raises(rw.PresentationError):
        rw.Presentation.from_text(table, rules)


def test_weights_must_be_positive():
    table = nc.GeneratorTable(("x", "y"), (1, -1))
    with pytest.raises(rw.PresentationError):
        rw.Presentation(table, [], weights=[1, 0])


def test_confluence_bound_below_rule_length():
    pres = presets.load_preset("super-s3").pres
    with pytest.raises(rw.PresentationError):
        rw.check_confluence(pres, 1)


def test_linear_dependency_witness():
    pres = presets.load_preset("classical-sl2").pres
    a = pres.gen("a")
    ok, witness = rw.linear_independent(pres, [a, a.scale(2)])
    assert not ok
    assert witness == [sc.Scalar(2), sc.Scalar(-1)]
    ok, witness = rw.linear_independent(pres, [pres.parse("a*d"), pres.parse("b*c"), pres.one()])
    assert not ok
    assert witness == [sc.ONE, -sc.ONE, -sc.ONE]
    assert rw.linear_independent(pres, pres.generators()) == (True, None)


def test_eliminator_span():
    elim = rw.Eliminator()
    assert elim.add({"u": sc.ONE, "v": sc.ONE}, "first") is None
    assert elim.add({"v": sc.Scalar(2)}, "second") is None
    member, rest, combo = elim.in_span({"u": sc.Scalar(3)})
    assert member and not rest
    assert combo == {"first": sc.Scalar(3), "second": sc.Scalar(-3) / 2}
    member, rest, _ = elim.in_span({"w": sc.ONE})
    assert not member and rest == {"w": sc.ONE}


def test_subspace_membership():
    preset = presets.load_preset("super-s3")
    pres = preset.pres
    one, a, ab = pres.one(), pres.gen("a"), pres.parse("a*b")
    assert rw.subspace_membership(pres, tensor.d_universal(pres, ab), "ker-m-over-B", 3)
    assert not rw.subspace_membership(pres, tensor.d_universal(pres, a), "ker-m-over-B", 3)
    t = tensor.TensorElem.pure(pres, [a, ab]) - tensor.TensorElem.pure(pres, [pres.mul(a, ab), one])
    assert rw.subspace_membership(pres, t, "P-ker-m-over-B-P", 3, coinvariants=preset.coinvariants)
    assert not rw.subspace_membership(pres, tensor.d_universal(pres, a), "P-ker-m-over-B-P", 3, coinvariants=preset.coinvariants)
    with pytest.raises(ValueError):
        rw.subspace_membership(pres, t, "Omega2", 3)
    with pytest.raises(ValueError):
        rw.subspace_membership(pres, t, "ker-m-over-B", 2)
