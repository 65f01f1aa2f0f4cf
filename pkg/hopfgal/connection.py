"""Strong connections as forms, splittings, covariant derivatives and projections.

Everything is evaluated at lift level in P (x) P. Group elements are ints in
the preset's grading group; maps on P are linear and evaluated word by word on
normal forms, with per-word memoization.
"""

from math import comb
import random
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from hopf import ad_R
from ncpoly import NcPoly, Word, degree_of
from presets import Preset
from report import Check, check_equal, check_true
from rewrite import subspace_membership
from scalars import ONE, Scalar
from tensor import (
    TensorElem,
    chi_bar,
    d_universal,
    lifted_splitting,
    m,
    membership,
    twisted_product,
)


class SplittingError(ValueError):
    """A candidate splitting fails the unitalization precondition."""


class GaugeError(ValueError):
    """A gauge value that is not an invertible degree-0 element."""


# ---------------------------------------------------------------- carriers

class _GroupMap:
    """Memoized family g -> TensorElem."""

    def __init__(self, preset: Preset, rule: Callable[[int], TensorElem], name: str):
        self.preset = preset
        self.rule = rule
        self.name = name
        self._memo: Dict[int, TensorElem] = {}

    def __call__(self, g: int) -> TensorElem:
        g = self.preset.group.norm(g)
        value = self._memo.get(g)
        if value is None:
            value = self.rule(g)
            self._memo[g] = value
        return value


class TranslationLift(_GroupMap):
    """Lift tau'(g) in P (x) P of the translation map at g."""


class ConnForm(_GroupMap):
    """Connection form g -> omega(g) in Omega^1 P."""


class _WordMap:
    """Linear map P -> P (x) P given on homogeneous monomials."""

    def __init__(self, preset: Preset, rule: Callable[[NcPoly, int], TensorElem], name: str):
        self.preset = preset
        self.rule = rule
        self.name = name
        self._memo: Dict[Word, TensorElem] = {}

    def on_word(self, word: Word) -> TensorElem:
        value = self._memo.get(word)
        if value is None:
            table = self.preset.table
            value = self.rule(NcPoly.monomial(table, word), table.word_degree(word))
            self._memo[word] = value
        return value

    def __call__(self, p: NcPoly) -> TensorElem:
        out = TensorElem.zero(self.preset.pres)
        for w, c in self.preset.pres.normal_form(p).items():
            out = out + self.on_word(w).scale(c)
        return out


class SplittingS(_WordMap):
    """Splitting s: P -> B (x) P of the multiplication."""


class CovariantD(_WordMap):
    """Covariant derivative D: P -> (Omega^1 B) P."""


class ProjectionPi:
    """Projection Pi on Omega^1 P, given on pure tensors u (x) v."""

    def __init__(self, preset: Preset, rule: Callable[[Word, Word], TensorElem], name: str = "Pi"):
        self.preset = preset
        self.rule = rule
        self.name = name
        self._memo: Dict[Tuple[Word, Word], TensorElem] = {}

    def __call__(self, t: TensorElem) -> TensorElem:
        out = TensorElem.zero(self.preset.pres)
        for key, c in t.items():
            value = self._memo.get(key)
            if value is None:
                value = self.rule(*key)
                self._memo[key] = value
            out = out + value.scale(c)
        return out


def _one(preset: Preset) -> NcPoly:
    return NcPoly.one(preset.table)


def _unit_tensor(preset: Preset) -> TensorElem:
    one = _one(preset)
    return TensorElem.pure(preset.pres, [one, one])


def _mono(preset: Preset, word: Word) -> NcPoly:
    return NcPoly.monomial(preset.table, word)


# ---------------------------------------------------------------- preset families

def _power(preset: Preset, letter: str, n: int) -> NcPoly:
    return NcPoly.monomial(preset.table, [preset.table.index(letter)] * n)


def _monopole_lift(preset: Preset) -> TranslationLift:
    block = preset.block("connection")
    x1, x2 = block["positive"]
    y1, y2 = block["negative"]
    nil = preset.parse(block["nilpotent"]) if block.get("nilpotent") else NcPoly.zero(preset.table)
    pres = preset.pres

    def rule(g: int) -> TensorElem:
        if g == 0:
            return _unit_tensor(preset)
        n = abs(g)
        left = (y1, y2) if g > 0 else (x1, x2)
        right = (x1, x2) if g > 0 else (y1, y2)
        out = TensorElem.zero(pres)
        for k in range(n + 1):
            u = pres.mul(_power(preset, left[0], n - k), _power(preset, left[1], k))
            v = pres.mul(_power(preset, right[0], n - k), _power(preset, right[1], k))
            out = out + TensorElem.pure(pres, [u, v], comb(n, k) * (-1) ** k)
        return out.left_mul(_one(preset) + nil.scale(n))

    return TranslationLift(preset, rule, "tau")


def _sphere_lift(preset: Preset) -> TranslationLift:
    coords = [preset.gen(x) for x in preset.block("connection")["coordinates"]]

    def rule(g: int) -> TensorElem:
        if g == 0:
            return _unit_tensor(preset)
        out = TensorElem.zero(preset.pres)
        for x in coords:
            out = out + TensorElem.pure(preset.pres, [x, x])
        return out

    return TranslationLift(preset, rule, "tau")


def translation_lift(preset: Preset) -> TranslationLift:
    family = preset.block("connection").get("family")
    if family == "monopole":
        return _monopole_lift(preset)
    if family == "sphere":
        return _sphere_lift(preset)
    if family == "canonical":
        return translation_from_integral(preset, integral_family(preset))
    raise ValueError(f"Unknown connection family: {family}")


def form_from_translation(tau: TranslationLift) -> ConnForm:
    """omega(g) = tau'(g) - 1 (x) 1 off the identity, 0 at it."""
    preset = tau.preset

    def rule(g: int) -> TensorElem:
        if g == 0:
            return TensorElem.zero(preset.pres)
        return tau(g) - _unit_tensor(preset)

    return ConnForm(preset, rule, "omega")


def connection_form(preset: Preset, form: str = "strong", tau: Optional[TranslationLift] = None) -> ConnForm:
    """The preset's strong connection, or its non-strong shift omega + c d(w)."""
    omega = form_from_translation(tau or translation_lift(preset))
    if form == "strong":
        return omega
    if form != "nonstrong":
        raise ValueError(f"Unknown form: {form}")
    shift = preset.block("connection").get("nonstrong")
    if not shift:
        raise ValueError(f"Preset {preset.name} has no non-strong connection")
    dw = d_universal(preset.pres, preset.parse(shift["element"])).scale(Scalar.parse(str(shift["coefficient"])))

    def rule(g: int) -> TensorElem:
        if g == 0:
            return TensorElem.zero(preset.pres)
        return omega(g) + dw

    return ConnForm(preset, rule, "omega_nonstrong")


def default_splitting(preset: Preset) -> SplittingS:
    return J4(connection_form(preset))


# ---------------------------------------------------------------- J maps

def J4(omega: ConnForm) -> SplittingS:
    """s(p) = p (x) 1 + p omega(deg p)."""
    preset = omega.preset

    def rule(p: NcPoly, g: int) -> TensorElem:
        return TensorElem.pure(preset.pres, [p, _one(preset)]) + omega(g).left_mul(p)

    return SplittingS(preset, rule, "s")


def J1(s: SplittingS) -> CovariantD:
    """D(p) = 1 (x) p - s(p)."""
    preset = s.preset

    def rule(p: NcPoly, g: int) -> TensorElem:
        return TensorElem.pure(preset.pres, [_one(preset), p]) - s(p)

    return CovariantD(preset, rule, "D")


def J2(D: CovariantD) -> ProjectionPi:
    """Pi(u (x) v) = u (dv - D(v))."""
    preset = D.preset

    def rule(u: Word, v: Word) -> TensorElem:
        vp = _mono(preset, v)
        return (d_universal(preset.pres, vp) - D(vp)).left_mul(_mono(preset, u))

    return ProjectionPi(preset, rule, "Pi")


def J3(Pi: ProjectionPi, tau: TranslationLift) -> ConnForm:
    """omega(g) = sum tau'(g)^[1] Pi(d tau'(g)^[2])."""
    preset = Pi.preset

    def rule(g: int) -> TensorElem:
        out = TensorElem.zero(preset.pres)
        for (u, v), c in tau(g).items():
            out = out + Pi(d_universal(preset.pres, _mono(preset, v))).left_mul(_mono(preset, u)).scale(c)
        return out

    return ConnForm(preset, rule, "omega")


# ---------------------------------------------------------------- certificates

def _group_label(preset: Preset, g: int) -> str:
    return preset.group.label(g)


def galois_certificate(preset: Preset, tau: TranslationLift, elements: Iterable[int]) -> List[Check]:
    """m(tau'(g)) = 1 and chi_bar(tau'(g)) = 1 (x) g for every listed g."""
    checks = []
    one = _one(preset)
    for g in elements:
        params = {"g": _group_label(preset, g)}
        t = tau(g)
        checks.append(check_equal("galois m(tau) = 1", preset.name, m(t), one, params))
        target = TensorElem.pure(preset.pres, [one, int(g)])
        checks.append(check_equal("galois chi_bar(tau) = 1 (x) g", preset.name, chi_bar(t), target, params))
    return checks


def _pairs(preset: Preset, n_range: int) -> List[Tuple[int, int]]:
    if preset.group.is_cyclic2:
        return [(g, h) for g in (0, 1) for h in (0, 1)]
    elems = preset.group.elements(n_range)
    return [(g, h) for g in elems for h in elems if abs(g) + abs(h) <= n_range]


def translation_property_suite(
    preset: Preset,
    tau: TranslationLift,
    n_range: int,
    splitting: Optional[SplittingS] = None,
) -> List[Check]:
    """Degree, counit and antimultiplicativity properties of tau' at lift level.

    Antimultiplicativity is tried as an exact equality first; otherwise the
    difference must lie in P(Omega^1 B)P, decided through the splitting.
    """
    group = preset.group
    name = preset.name
    one = _one(preset)
    checks: List[Check] = []
    for g in group.elements(n_range):
        t = tau(g)
        params = {"g": _group_label(preset, g)}
        checks.append(check_true("translation right slot degree", name, t.right_degrees() == {group.norm(g)}, str(sorted(t.right_degrees())), params))
        checks.append(check_true("translation left slot degree", name, t.left_degrees() == {group.inv(g)}, str(sorted(t.left_degrees())), params))
        ad = ad_R(preset.pres, g)
        ad_ok = dict(ad.items()) == {(group.norm(g), 0): ONE}
        checks.append(check_true("translation total degree", name, t.total_degrees() == {0} and ad_ok, str(sorted(t.total_degrees())), params))
        checks.append(check_equal("translation m(tau) = counit", name, m(t), one, params))
    s = splitting or J4(form_from_translation(tau))
    for g, h in _pairs(preset, n_range):
        params = {"g": _group_label(preset, g), "h": _group_label(preset, h)}
        lhs = tau(group.mul(g, h))
        rhs = twisted_product(tau(g), tau(h))
        if lhs == rhs:
            checks.append(Check("translation antimultiplicative", name, params, True, "exact at lift level"))
            continue
        diff = lhs - rhs
        ok = subspace_membership(preset.pres, diff, "P-ker-m-over-B-P", diff.max_length(), splitting=s)
        witness = "equal modulo P(Omega1B)P" if ok else diff.to_text()[:400]
        checks.append(Check("translation antimultiplicative", name, params, ok, witness))
    return checks


def roundtrip_check(
    preset: Preset,
    omega: ConnForm,
    tau: TranslationLift,
    generators: Sequence[NcPoly],
    elements: Sequence[int],
) -> List[Check]:
    """The four cyclic identities J4J3J2J1 = id and its rotations."""
    name = preset.name
    s = J4(omega)
    D = J1(s)
    Pi = J2(D)
    s_back = J4(J3(J2(J1(s)), tau))
    omega_back = J3(J2(J1(J4(omega))), tau)
    Pi_back = J2(J1(J4(J3(Pi, tau))))
    D_back = J1(J4(J3(J2(D), tau)))
    checks: List[Check] = []
    for p in generators:
        params = {"p": p.to_text()}
        dp = d_universal(preset.pres, p)
        checks.append(check_equal("roundtrip J4 J3 J2 J1 (s)", name, s_back(p), s(p), params))
        checks.append(check_equal("roundtrip J2 J1 J4 J3 (Pi)", name, Pi_back(dp), Pi(dp), params))
        checks.append(check_equal("roundtrip J1 J4 J3 J2 (D)", name, D_back(p), D(p), params))
    for g in elements:
        params = {"g": _group_label(preset, g)}
        checks.append(check_equal("roundtrip J3 J2 J1 J4 (omega)", name, omega_back(g), omega(g), params))
    return checks


CONDITIONS = (
    "(i) omega(e) = 0",
    "(ii) omega(g) in Omega1P",
    "(iii) Ad-colinear",
    "(iv) fundamental vector field",
    "(v) strong",
)


def verify_connection_form(
    preset: Preset,
    omega: ConnForm,
    strong: bool,
    elements: Sequence[int],
    generators: Optional[Sequence[NcPoly]] = None,
) -> List[Check]:
    name = preset.name
    one = _one(preset)
    failures: Dict[str, List[str]] = {c: [] for c in CONDITIONS}
    zero = TensorElem.zero(preset.pres)
    if omega(0) != zero:
        failures[CONDITIONS[0]].append(omega(0).to_text()[:200])
    for g in elements:
        label = _group_label(preset, g)
        w = omega(g)
        if not membership(w, "Omega1P"):
            failures[CONDITIONS[1]].append(label)
        if w and w.total_degrees() != {0}:
            failures[CONDITIONS[2]].append(label)
        target = TensorElem.pure(preset.pres, [one, int(g)]) - TensorElem.pure(preset.pres, [one, 0])
        if chi_bar(w) != target:
            failures[CONDITIONS[3]].append(label)
    if strong:
        for p in (generators if generators is not None else preset.pres.generators()):
            g = degree_of(p)
            t = d_universal(preset.pres, p) - omega(g).left_mul(p)
            if not membership(t, "BotP"):
                failures[CONDITIONS[4]].append(p.to_text())
    params = {"elements": [_group_label(preset, g) for g in elements]}
    checks = []
    for cond in CONDITIONS:
        if cond == CONDITIONS[4] and not strong:
            continue
        bad = failures[cond]
        checks.append(Check(cond, name, dict(params), not bad, ", ".join(bad)))
    return checks


def verify_splitting(preset: Preset, s: SplittingS, generators: Sequence[NcPoly]) -> List[Check]:
    """Unital, splits m, lands in B (x) P, colinear, left B-linear on samples."""
    name = preset.name
    one = _one(preset)
    checks = [check_equal("splitting unital", name, s(one), _unit_tensor(preset))]
    for p in generators:
        params = {"p": p.to_text()}
        value = s(p)
        checks.append(check_equal("splitting m s = id", name, m(value), preset.pres.normal_form(p), params))
        checks.append(check_true("splitting image in B (x) P", name, membership(value, "BotP"), value.to_text()[:200], params))
        checks.append(check_true("splitting colinear", name, value.total_degrees() <= {degree_of(p)}, str(value.total_degrees()), params))
        for b in preset.coinvariants:
            if not b.max_length():
                continue
            lhs = s(preset.pres.mul(b, p))
            rhs = value.left_mul(b)
            checks.append(check_equal("splitting left B-linear", name, lhs, rhs, {"p": p.to_text(), "b": b.to_text()}))
    return checks


def covariant_derivative(s: SplittingS, xi: NcPoly) -> TensorElem:
    """nabla xi = 1 (x) xi - s(xi) for homogeneous xi."""
    xi = s.preset.pres.normal_form(xi)
    if degree_of(xi) is None:
        raise ValueError(f"covariant derivative needs a homogeneous section: {xi.to_text()}")
    return TensorElem.pure(s.preset.pres, [_one(s.preset), xi]) - s(xi)


def covariant_derivative_checks(preset: Preset, s: SplittingS, sections: Sequence[NcPoly]) -> List[Check]:
    checks = []
    for xi in sections:
        t = covariant_derivative(s, xi)
        params = {"xi": xi.to_text()}
        g = degree_of(preset.pres.normal_form(xi))
        ok = membership(t, "Omega1B_P") and (not t or t.right_degrees() == {g})
        checks.append(check_true("covariant derivative in (Omega1B)P", preset.name, ok, t.to_text()[:200], params))
    return checks


def unitalize(
    preset: Preset,
    sbar: Callable[[NcPoly], TensorElem],
    generators: Sequence[NcPoly],
    degree_bound: int,
    reference: Optional[SplittingS] = None,
) -> SplittingS:
    """T(sbar)(p) = sbar(p) + p (1 (x) 1 - sbar(1)).

    The precondition sbar(p) - 1 (x) p in P(Omega^1 B)P is checked on the
    generators and on 1.
    """
    one = _one(preset)
    reference = reference or default_splitting(preset)
    for p in [one, *generators]:
        diff = sbar(p) - TensorElem.pure(preset.pres, [one, p])
        try:
            ok = subspace_membership(preset.pres, diff, "P-ker-m-over-B-P", degree_bound, splitting=reference)
        except ValueError as e:
            raise SplittingError(str(e)) from e
        if not ok:
            raise SplittingError(f"sbar({p.to_text()}) - 1 (x) p is not in P(Omega1B)P")
    correction = _unit_tensor(preset) - sbar(one)

    def rule(p: NcPoly, g: int) -> TensorElem:
        return sbar(p) + correction.left_mul(p)

    return SplittingS(preset, rule, "s_unital")


# ---------------------------------------------------------------- Psi and Xi

def xi_tilde(s: SplittingS) -> Callable[[TensorElem], TensorElem]:
    """r(u (x) v) = u s(v) on representatives in P (x) P."""
    return lambda t: lifted_splitting(t, s)


def xi(preset: Preset, rhat: Callable[[TensorElem], TensorElem]) -> SplittingS:
    """s(p) = r(1 (x) p)."""

    def rule(p: NcPoly, g: int) -> TensorElem:
        return rhat(TensorElem.pure(preset.pres, [_one(preset), p]))

    return SplittingS(preset, rule, "s_from_r")


def psi_tilde(preset: Preset, rhat: Callable[[TensorElem], TensorElem], tau: TranslationLift) -> ConnForm:
    """omega(g) = r(tau'(g)) - r(tau'(e))."""

    def rule(g: int) -> TensorElem:
        if g == 0:
            return TensorElem.zero(preset.pres)
        return rhat(tau(g)) - rhat(tau(0))

    return ConnForm(preset, rule, "omega_from_r")


def psi_lift(
    preset: Preset,
    omega: ConnForm,
    depth: int = 1,
    samples: Optional[int] = None,
    seed: int = 0,
) -> Tuple[Callable[[TensorElem], TensorElem], Check]:
    """r(p (x) p') = p p' (x) 1 + p p' omega(deg p') on representatives.

    Descent over (x)_B is sampled: r(p b (x) p') = r(p (x) b p') for normal
    words p, p' of length <= depth and b a coinvariant generator.
    """
    rhat = xi_tilde(J4(omega))
    pres = preset.pres
    words = pres.normal_words(depth)
    bs = [b for b in preset.coinvariants if b.max_length()]
    triples = [(p, b, p2) for p in words for b in bs for p2 in words]
    if samples is not None and len(triples) > samples:
        triples = random.Random(seed).sample(triples, samples)
    bad = []
    for p, b, p2 in triples:
        pp, pp2 = _mono(preset, p), _mono(preset, p2)
        lhs = rhat(TensorElem.pure(pres, [pres.mul(pp, b), pp2]))
        rhs = rhat(TensorElem.pure(pres, [pp, pres.mul(b, pp2)]))
        if lhs != rhs:
            bad.append(f"({pp.to_text()}, {b.to_text()}, {pp2.to_text()})")
    check = Check("psi descends over B", preset.name, {"depth": depth, "triples": len(triples)}, not bad, "; ".join(bad[:5]))
    return rhat, check


def psi_xi_checks(
    preset: Preset,
    omega: ConnForm,
    tau: TranslationLift,
    generators: Sequence[NcPoly],
    elements: Sequence[int],
    depth: int = 1,
    samples: Optional[int] = None,
    seed: int = 0,
) -> List[Check]:
    rhat, descent = psi_lift(preset, omega, depth, samples, seed)
    checks = [descent]
    back = psi_tilde(preset, rhat, tau)
    for g in elements:
        checks.append(check_equal("psi_tilde psi = id", preset.name, back(g), omega(g), {"g": _group_label(preset, g)}))
    s = J4(omega)
    s_r = xi(preset, rhat)
    one = _one(preset)
    checks.append(check_equal("xi(r)(1) = 1 (x) 1", preset.name, s_r(one), _unit_tensor(preset)))
    for p in generators:
        checks.append(check_equal("xi psi = J4", preset.name, s_r(p), s(p), {"p": p.to_text()}))
    return checks


# ---------------------------------------------------------------- integrals

class IntegralMap:
    """Colinear unital map i: group -> P."""

    def __init__(self, preset: Preset, rule: Callable[[int], NcPoly], name: str = "i"):
        self.preset = preset
        self.rule = rule
        self.name = name
        self._memo: Dict[int, NcPoly] = {}

    def __call__(self, g: int) -> NcPoly:
        g = self.preset.group.norm(g)
        if g not in self._memo:
            self._memo[g] = self.preset.pres.normal_form(self.rule(g))
        return self._memo[g]


def _require_hopf(preset: Preset):
    if preset.hopf is None:
        raise ValueError(f"Preset {preset.name} carries no Hopf structure")
    return preset.hopf


def representative(preset: Preset, g: int) -> NcPoly:
    """rep(z^n) = positive^n, rep(z^-n) = negative^n."""
    _require_hopf(preset)
    reps = preset.block("hopf")["representatives"]
    letter = reps["positive"] if g >= 0 else reps["negative"]
    return _power(preset, letter, abs(g))


def integral_family(preset: Preset, coeffs: Optional[Dict[int, Sequence]] = None) -> IntegralMap:
    """i(g) = (1 + zeta p_g(zeta)) rep(g) with p_g given by its coefficients."""
    _require_hopf(preset)
    coeffs = coeffs or {}
    zeta_text = preset.block("hopf").get("zeta")
    zeta = preset.parse(zeta_text) if zeta_text else NcPoly.zero(preset.table)
    pres = preset.pres

    def rule(g: int) -> NcPoly:
        poly = NcPoly.zero(preset.table)
        power = _one(preset)
        for c in coeffs.get(g, ()):
            poly = poly + power.scale(Scalar.parse(str(c)))
            power = pres.mul(power, zeta)
        return pres.mul(_one(preset) + pres.mul(zeta, poly), representative(preset, g))

    return IntegralMap(preset, rule, "i")


def translation_from_integral(preset: Preset, i: IntegralMap) -> TranslationLift:
    """tau'(g) = S(i(g)_(1)) (x) i(g)_(2)."""
    hopf = _require_hopf(preset)

    def rule(g: int) -> TensorElem:
        out = TensorElem.zero(preset.pres)
        for (u, v), c in hopf.coproduct(i(g)).items():
            out = out + TensorElem.pure(preset.pres, [hopf.antipode(_mono(preset, u)), _mono(preset, v)], c)
        return out

    return TranslationLift(preset, rule, "tau")


def connection_from_integral(preset: Preset, i: IntegralMap) -> ConnForm:
    """omega(g) = S(i(g)_(1)) d(i(g)_(2))."""
    hopf = _require_hopf(preset)

    def rule(g: int) -> TensorElem:
        out = TensorElem.zero(preset.pres)
        for (u, v), c in hopf.coproduct(i(g)).items():
            out = out + d_universal(preset.pres, _mono(preset, v)).left_mul(hopf.antipode(_mono(preset, u))).scale(c)
        return out

    return ConnForm(preset, rule, "omega")


def integral_from_connection(preset: Preset, omega: ConnForm) -> IntegralMap:
    """i(g) = (eps (x) id)(J4(omega)(rep(g)))."""
    hopf = _require_hopf(preset)
    s = J4(omega)
    return IntegralMap(preset, lambda g: hopf.counit_slot(s(representative(preset, g)), 0), "i")


def verify_integral(preset: Preset, i: IntegralMap, elements: Sequence[int]) -> List[Check]:
    hopf = _require_hopf(preset)
    name = preset.name
    back = integral_from_connection(preset, connection_from_integral(preset, i))
    checks = [check_equal("integral unital", name, i(0), _one(preset))]
    for g in elements:
        params = {"g": _group_label(preset, g)}
        value = i(g)
        checks.append(check_true("integral colinear", name, degree_of(value) == preset.group.norm(g), value.to_text(), params))
        projected = hopf.pi_I(value)
        checks.append(check_true("integral pi_I(i(g)) = g", name, projected == {g: ONE}, str({k: v.to_text() for k, v in projected.items()}), params))
        checks.append(check_equal("integral round trip", name, back(g), value, params))
    return checks


# ---------------------------------------------------------------- gauge

class GaugeTransform:
    """Gauge transformation fixed by its value on the group generator.

    Values must be degree 0 and of the form c (1 + N) with c a nonzero scalar
    and N nilpotent; the inverse is the truncated geometric series.
    """

    def __init__(self, preset: Preset, value: NcPoly, inverse_value: Optional[NcPoly] = None, nil_bound: int = 16):
        pres = preset.pres
        self.preset = preset
        value = pres.normal_form(value)
        if degree_of(value) != 0:
            raise GaugeError(f"gauge value must have degree 0: {value.to_text()}")
        c = value.constant_term()
        if not c:
            raise GaugeError(f"gauge value has no invertible constant part: {value.to_text()}")
        nil = value.scale(ONE / c) - _one(preset)
        inverse = _one(preset)
        term = _one(preset)
        for _ in range(nil_bound):
            term = pres.mul(term, -nil)
            if not term:
                break
            inverse = inverse + term
        else:
            raise GaugeError(f"gauge value is not a scalar times 1 + nilpotent: {value.to_text()}")
        inverse = inverse.scale(ONE / c)
        if inverse_value is not None and pres.normal_form(inverse_value) != inverse:
            raise GaugeError("supplied inverse does not invert the gauge value")
        if preset.group.is_cyclic2 and value != inverse:
            raise GaugeError("on Z/2 the gauge value must square to 1")
        self.value = value
        self.inverse_value = inverse
        self._memo: Dict[int, NcPoly] = {0: _one(preset)}

    @classmethod
    def parse(cls, preset: Preset, text: str) -> "GaugeTransform":
        return cls(preset, preset.parse(text))

    def __call__(self, g: int) -> NcPoly:
        g = self.preset.group.norm(g)
        if g not in self._memo:
            base = self.value if g > 0 else self.inverse_value
            out = _one(self.preset)
            for _ in range(abs(g)):
                out = self.preset.pres.mul(out, base)
            self._memo[g] = out
        return self._memo[g]

    def inverse(self, g: int) -> NcPoly:
        return self(self.preset.group.inv(g))


def gauge_connection(f: GaugeTransform, omega: ConnForm) -> ConnForm:
    """(f.omega)(g) = f(g) omega(g) f(g)^-1 + f(g) d(f(g)^-1)."""
    preset = omega.preset

    def rule(g: int) -> TensorElem:
        fg, fi = f(g), f.inverse(g)
        return omega(g).left_mul(fg).right_mul(fi) + d_universal(preset.pres, fi).left_mul(fg)

    return ConnForm(preset, rule, "f.omega")


def gauge_splitting(f: GaugeTransform, s: SplittingS) -> SplittingS:
    """(f.s)(p) = s(p f(g)) f(g)^-1."""
    preset = s.preset

    def rule(p: NcPoly, g: int) -> TensorElem:
        return s(preset.pres.mul(p, f(g))).right_mul(f.inverse(g))

    return SplittingS(preset, rule, "f.s")


def gauge_covariant(f: GaugeTransform, D: CovariantD) -> CovariantD:
    """(f.D)(p) = D(p f(g)) f(g)^-1."""
    preset = D.preset

    def rule(p: NcPoly, g: int) -> TensorElem:
        return D(preset.pres.mul(p, f(g))).right_mul(f.inverse(g))

    return CovariantD(preset, rule, "f.D")


def gauge_projection(f: GaugeTransform, Pi: ProjectionPi) -> ProjectionPi:
    """(f.Pi)(u dv) = u Pi(d(v f(g))) f(g)^-1 + u v f(g) d(f(g)^-1)."""
    preset = Pi.preset
    pres = preset.pres

    def rule(u: Word, v: Word) -> TensorElem:
        g = preset.table.word_degree(v)
        up, vf = _mono(preset, u), pres.mul(_mono(preset, v), f(g))
        first = Pi(d_universal(pres, vf)).right_mul(f.inverse(g))
        second = d_universal(pres, f.inverse(g)).left_mul(vf)
        return (first + second).left_mul(up)

    return ProjectionPi(preset, rule, "f.Pi")


def gauge_action(f: GaugeTransform, x):
    if isinstance(x, ConnForm):
        return gauge_connection(f, x)
    if isinstance(x, SplittingS):
        return gauge_splitting(f, x)
    if isinstance(x, CovariantD):
        return gauge_covariant(f, x)
    if isinstance(x, ProjectionPi):
        return gauge_projection(f, x)
    raise TypeError(f"gauge transformations do not act on {type(x).__name__}")


def gauge_compatibility(
    preset: Preset,
    f: GaugeTransform,
    omega: ConnForm,
    tau: TranslationLift,
    generators: Sequence[NcPoly],
    elements: Sequence[int],
) -> List[Check]:
    """The actions on s, D and Pi are the action on omega transported by the J maps."""
    name = preset.name
    f_omega = gauge_connection(f, omega)
    s, s_f = J4(omega), J4(f_omega)
    D, D_f = J1(s), J1(s_f)
    Pi, Pi_f = J2(D), J2(D_f)
    act_s, act_D, act_Pi = gauge_splitting(f, s), gauge_covariant(f, D), gauge_projection(f, Pi)
    omega_from_Pi = J3(act_Pi, tau)
    checks = []
    for p in generators:
        params = {"p": p.to_text()}
        checks.append(check_equal("gauge splitting = J4(f.omega)", name, act_s(p), s_f(p), params))
        checks.append(check_equal("gauge covariant = J1 J4(f.omega)", name, act_D(p), D_f(p), params))
        dp = d_universal(preset.pres, p)
        checks.append(check_equal("gauge projection = J2 J1 J4(f.omega)", name, act_Pi(dp), Pi_f(dp), params))
    for g in elements:
        checks.append(check_equal("gauge J3(f.Pi) = f.omega", name, omega_from_Pi(g), f_omega(g), {"g": _group_label(preset, g)}))
    return checks


def gauge_automorphism(preset: Preset, f: GaugeTransform, generators: Sequence[NcPoly]) -> List[Check]:
    """F(p) = p f(deg p) is a unital colinear B-linear algebra automorphism."""
    pres = preset.pres
    name = preset.name

    def F(p: NcPoly) -> NcPoly:
        out = NcPoly.zero(preset.table)
        for w, c in pres.normal_form(p).items():
            out = out + pres.mul(_mono(preset, w), f(preset.table.word_degree(w))).scale(c)
        return out

    def F_inv(p: NcPoly) -> NcPoly:
        out = NcPoly.zero(preset.table)
        for w, c in pres.normal_form(p).items():
            out = out + pres.mul(_mono(preset, w), f.inverse(preset.table.word_degree(w))).scale(c)
        return out

    one = _one(preset)
    checks = [check_equal("gauge automorphism unital", name, F(one), one)]
    for p in generators:
        params = {"p": p.to_text()}
        image = F(p)
        checks.append(check_true("gauge automorphism colinear", name, degree_of(image) == degree_of(p), image.to_text(), params))
        checks.append(check_equal("gauge automorphism invertible", name, F(F_inv(p)), pres.normal_form(p), params))
        for b in preset.coinvariants:
            if b.max_length():
                checks.append(check_equal("gauge automorphism B-linear", name, F(pres.mul(b, p)), pres.mul(b, image), {"p": p.to_text(), "b": b.to_text()}))
        for p2 in generators:
            checks.append(check_equal("gauge automorphism multiplicative", name, F(pres.mul(p, p2)), pres.mul(image, F(p2)), {"p": p.to_text(), "p2": p2.to_text()}))
    return checks
