"""Line-bundle modules, projector matrices and module isomorphism certificates."""

from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence

from connection import (
    SplittingS,
    TranslationLift,
    J4,
    connection_form,
    translation_lift,
)
from ncpoly import NcPoly, Word, degree_of, star
from presets import Preset
from report import Check, check_equal, check_true
from rewrite import Eliminator, linear_independent, subspace_membership
from scalars import ONE, Scalar
from tensor import TensorElem, coaction_tensor, membership, specialize_q1

MAX_MU = 6
MAX_COINVARIANT_BOUND = 8

Matrix = List[List[NcPoly]]


class ProjectorError(ValueError):
    """A splitting value whose right factor is outside the generator span."""


@dataclass
class LineBundleModule:
    preset: Preset
    mu: int
    generators: List[NcPoly]

    @property
    def size(self) -> int:
        return len(self.generators)


@dataclass
class ProjectorCert:
    """Projector matrix with its generator column and optional hermitian data.

    ``column`` and ``row`` hold U and U^dagger D, so that F = column * row.
    """

    preset: Preset
    mu: int
    generators: List[NcPoly]
    E: Optional[Matrix] = None
    F: Optional[Matrix] = None
    column: Optional[List[NcPoly]] = None
    row: Optional[List[NcPoly]] = None
    weights: Optional[List[int]] = None
    L: Optional[Matrix] = None
    L_tilde: Optional[Matrix] = None
    checks: List[Check] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.generators)


# ---------------------------------------------------------------- matrices

def mat_mul(preset: Preset, A: Matrix, B: Matrix) -> Matrix:
    pres = preset.pres
    if A and B and len(A[0]) != len(B):
        raise ValueError(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
    zero = NcPoly.zero(preset.table)
    out = []
    for i in range(len(A)):
        line = []
        for j in range(len(B[0]) if B else 0):
            # free products first, one reduction per entry
            entry = zero
            for k in range(len(B)):
                if A[i][k] and B[k][j]:
                    entry = entry + A[i][k] * B[k][j]
            line.append(pres.normal_form(entry))
        out.append(line)
    return out


def identity(preset: Preset, n: int) -> Matrix:
    one, zero = NcPoly.one(preset.table), NcPoly.zero(preset.table)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def dagger(preset: Preset, A: Matrix) -> Matrix:
    pres = preset.pres
    return [[pres.normal_form(star(A[i][j])) for i in range(len(A))] for j in range(len(A[0]))]


def sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def outer(preset: Preset, column: Sequence[NcPoly], row: Sequence[NcPoly]) -> Matrix:
    return [[preset.pres.mul(c, r) for r in row] for c in column]


def block_diag(preset: Preset, A: Matrix, B: Matrix) -> Matrix:
    zero = NcPoly.zero(preset.table)
    out = [list(r) + [zero] * len(B[0]) for r in A]
    out += [[zero] * len(A[0]) + list(r) for r in B]
    return out


def permutation(preset: Preset, perm: Sequence[int]) -> Matrix:
    one, zero = NcPoly.one(preset.table), NcPoly.zero(preset.table)
    return [[one if j == perm[i] else zero for j in range(len(perm))] for i in range(len(perm))]


def _check_matrix(check: str, preset: Preset, left: Matrix, right: Matrix, params: Optional[dict] = None) -> Check:
    for i, (ra, rb) in enumerate(zip(left, right)):
        for j, (a, b) in enumerate(zip(ra, rb)):
            if a != b:
                return Check(check, preset.name, dict(params or {}), False, f"entry ({i},{j}): {a.to_text()} != {b.to_text()}"[:400])
    same_shape = len(left) == len(right) and all(len(a) == len(b) for a, b in zip(left, right))
    return check_true(check, preset.name, same_shape, "shape mismatch", params)


def export_matrix(A: Matrix) -> dict:
    """{size, entries} with entries as polynomial text."""
    return {"size": [len(A), len(A[0]) if A else 0], "entries": [[e.to_text() for e in r] for r in A]}


# ---------------------------------------------------------------- line bundles

def _power_word(preset: Preset, x: str, y: str, i: int, j: int, odd: Optional[str] = None) -> NcPoly:
    table = preset.table
    word = [table.index(x)] * i + [table.index(y)] * j
    if odd:
        word.append(table.index(odd))
    return preset.pres.normal_form(NcPoly.monomial(table, word))


def line_bundle_generators(preset: Preset, mu: int) -> LineBundleModule:
    """Generators of the degree -mu component over the coinvariants."""
    if abs(mu) > MAX_MU:
        raise ValueError(f"|mu| must be at most {MAX_MU}, got {mu}")
    block = preset.block("line_bundles")
    one = NcPoly.one(preset.table)
    if preset.group.is_cyclic2:
        if preset.group.norm(mu) == 0:
            return LineBundleModule(preset, 0, [one])
        return LineBundleModule(preset, 1, [preset.gen(x) for x in block["parity"]])
    if mu == 0:
        return LineBundleModule(preset, 0, [one])
    side = block["minus"] if mu < 0 else block["plus"]
    x, y = side["letters"]
    n = abs(mu)
    gens = [_power_word(preset, x, y, n - k, k) for k in range(n + 1)]
    if side.get("odd"):
        gens += [_power_word(preset, x, y, n - 1 - k, k, side["odd"]) for k in range(n)]
    return LineBundleModule(preset, mu, gens)


def independence_report(preset: Preset, n_range: int) -> List[Check]:
    checks = []
    mus = [1] if preset.group.is_cyclic2 else [m for n in range(1, n_range + 1) for m in (-n, n)]
    for mu in mus:
        module = line_bundle_generators(preset, mu)
        ok, witness = linear_independent(preset.pres, module.generators)
        text = "" if ok else ", ".join(c.to_text() for c in witness)
        checks.append(check_true("line bundle generators independent", preset.name, ok, text, {"mu": mu, "size": module.size}))
        degrees = {degree_of(g) for g in module.generators}
        checks.append(check_true("line bundle generator degree", preset.name, degrees == {preset.group.norm(-mu)}, str(degrees), {"mu": mu}))
    return checks


def grading_partition_check(preset: Preset, degree_bound: int) -> List[Check]:
    """Each normal word up to the bound lies in exactly one degree component."""
    words = preset.pres.normal_words(degree_bound)
    counts: Dict[int, int] = {}
    bad = []
    for w in words:
        p = NcPoly.monomial(preset.table, w)
        co = coaction_tensor(preset.pres, p)
        classes = {key[1] for key, _ in co.items()}
        if len(classes) != 1:
            bad.append(preset.table.word_text(w))
            continue
        g = classes.pop()
        counts[g] = counts.get(g, 0) + 1
    params = {"degree_bound": degree_bound, "words": len(words), "components": {preset.group.label(g): c for g, c in sorted(counts.items())}}
    ok = not bad and sum(counts.values()) == len(words)
    return [check_true("grading partition", preset.name, ok, ", ".join(bad[:10]), params)]


def coinvariant_generation_check(preset: Preset, degree_bound: int) -> List[Check]:
    """Degree-0 normal words up to the bound lie in the span of products of the listed coinvariants."""
    if degree_bound > MAX_COINVARIANT_BOUND:
        raise ValueError(f"degree bound must be at most {MAX_COINVARIANT_BOUND}")
    pres = preset.pres
    gens = [b for b in preset.coinvariants if b.max_length()]
    one = NcPoly.one(preset.table)
    elim = Eliminator()
    elim.add(dict(one.items()))
    seen = {one}
    frontier = [(one, 0)]
    while frontier:
        grown = []
        for p, length in frontier:
            for b in gens:
                total = length + b.max_length()
                if total > degree_bound:
                    continue
                prod = pres.mul(p, b)
                if prod in seen:
                    continue
                seen.add(prod)
                elim.add(dict(prod.items()))
                grown.append((prod, total))
        frontier = grown
    missing = []
    words = pres.normal_words(degree_bound, 0)
    for w in words:
        member, _, _ = elim.in_span({w: ONE})
        if not member:
            missing.append(preset.table.word_text(w) or "1")
    params = {"degree_bound": degree_bound, "words": len(words), "products": len(seen)}
    return [check_true("coinvariants generated", preset.name, not missing, ", ".join(missing[:10]), params)]


# ---------------------------------------------------------------- projectors

def _span(preset: Preset, generators: Sequence[NcPoly]) -> Eliminator:
    elim = Eliminator()
    for k, g in enumerate(generators):
        if elim.add(dict(preset.pres.normal_form(g).items()), k) is not None:
            raise ProjectorError(f"generators are dependent at {g.to_text()}")
    return elim


def _expand_left(preset: Preset, t: TensorElem, generators: Sequence[NcPoly], elim: Eliminator, ctable: Optional[Dict[Word, Dict[int, NcPoly]]] = None) -> List[NcPoly]:
    """Coefficients (c_l) in P with sum u (x) v = sum_l c_l (x) g_l."""
    table = preset.table
    out = [NcPoly.zero(table) for _ in generators]
    for (u, v), c in t.items():
        up = NcPoly.monomial(table, u, c)
        if ctable and v in ctable:
            for l, coeff in ctable[v].items():
                out[l] = out[l] + preset.pres.mul(up, coeff)
            continue
        member, _, combo = elim.in_span({v: ONE})
        if not member:
            raise ProjectorError(f"right factor {table.word_text(v) or '1'} is outside the generator span")
        for l, x in combo.items():
            out[l] = out[l] + up.scale(x)
    return out


def projector_from_splitting(s: SplittingS, module: LineBundleModule, ctable: Optional[Dict[Word, Dict[int, NcPoly]]] = None) -> ProjectorCert:
    """E_kl = sum_i b_i c_il from s(g_k) = sum_i b_i (x) p_i, p_i = sum_l c_il g_l."""
    preset = module.preset
    gens = [preset.pres.normal_form(g) for g in module.generators]
    elim = _span(preset, gens)
    E = [_expand_left(preset, s(g), gens, elim, ctable) for g in gens]
    cert = ProjectorCert(preset, module.mu, gens, E=E)
    params = {"mu": module.mu, "size": len(gens)}
    cert.checks.append(_check_matrix("projector E^2 = E", preset, mat_mul(preset, E, E), E, params))
    column = [[g] for g in gens]
    cert.checks.append(_check_matrix("projector E g = g", preset, mat_mul(preset, E, column), column, params))
    degrees = {degree_of(e) for r in E for e in r if e}
    cert.checks.append(check_true("projector entries in B", preset.name, degrees <= {0}, str(degrees), params))
    return cert


def _nilpotent(preset: Preset) -> NcPoly:
    block = preset.data.get("hermitian") or {}
    return preset.parse(block["nilpotent"]) if block.get("nilpotent") else NcPoly.zero(preset.table)


def hermitian_frame(preset: Preset, mu: int) -> ProjectorCert:
    """U, U^dagger D and F = U U^dagger D for mu, without the symbolic checks.

    Presets without a star carry the unit spin projectors for |mu| = 1 instead.
    """
    pres = preset.pres
    if preset.table.star is None:
        if abs(mu) != 1 or not preset.has("spin"):
            raise ProjectorError(f"preset {preset.name} has no hermitian projector for mu = {mu}")
        side = preset.block("spin")["minus" if mu < 0 else "plus"]
        column = [preset.parse(x) for x in side["column"]]
        row = [preset.parse(x) for x in side["row"]]
        return ProjectorCert(preset, mu, column, F=outer(preset, column, row), column=column, row=row, weights=[1] * len(column))
    module = line_bundle_generators(preset, mu)
    n = abs(mu)
    weights = [comb(n, k) for k in range(n + 1)]
    if module.size > n + 1:
        weights += [comb(n - 1, k) for k in range(n)]
    shift = Scalar(n - 1 if mu < 0 else n + 1) / 2
    pref = NcPoly.one(preset.table) + _nilpotent(preset).scale(shift)
    column = [pres.mul(pref, g) for g in module.generators]
    row = [pres.normal_form(star(u)).scale(w) for u, w in zip(column, weights)]
    return ProjectorCert(preset, mu, module.generators, F=outer(preset, column, row), column=column, row=row, weights=weights)


def hermitian_projector(preset: Preset, mu: int) -> ProjectorCert:
    """F = U U^dagger D with rational U and binomial weights D, checked exactly."""
    pres = preset.pres
    params = {"mu": mu}
    cert = hermitian_frame(preset, mu)
    F = cert.F
    norm = sum((pres.mul(r, c) for r, c in zip(cert.row, cert.column)), NcPoly.zero(preset.table))
    if preset.table.star is None:
        cert.checks.append(check_equal("hermitian row * column = 1", preset.name, norm, NcPoly.one(preset.table), params))
        cert.checks.append(_check_matrix("hermitian F^2 = F", preset, mat_mul(preset, F, F), F, params))
        return cert
    cert.checks.append(check_equal("hermitian U^dagger D U = 1", preset.name, norm, NcPoly.one(preset.table), params))
    cert.checks.append(_check_matrix("hermitian F^2 = F", preset, mat_mul(preset, F, F), F, params))
    DF = [[f.scale(w) for f in r] for r, w in zip(F, cert.weights)]
    cert.checks.append(_check_matrix("hermitian (DF)^dagger = DF", preset, dagger(preset, DF), DF, params))
    return cert


def translation_row(preset: Preset, tau: TranslationLift, module: LineBundleModule) -> List[NcPoly]:
    """Q^T with tau'(g) = sum_l Q_l (x) g_l, g the degree of the generators."""
    gens = [preset.pres.normal_form(g) for g in module.generators]
    return _expand_left(preset, tau(preset.group.inv(module.mu)), gens, _span(preset, gens))


def iso_witnesses(E_cert: ProjectorCert, F_cert: ProjectorCert, q_row: Sequence[NcPoly]) -> ProjectorCert:
    """L = P U^dagger D and L~ = U Q^T, attached to the E certificate."""
    preset = E_cert.preset
    E_cert.F = F_cert.F
    E_cert.column, E_cert.row, E_cert.weights = F_cert.column, F_cert.row, F_cert.weights
    E_cert.L = outer(preset, E_cert.generators, F_cert.row)
    E_cert.L_tilde = outer(preset, F_cert.column, q_row)
    return E_cert


def verify_module_iso(preset: Preset, E: Matrix, F: Matrix, L: Matrix, L_tilde: Matrix, params: Optional[dict] = None) -> List[Check]:
    """E L F = L F, F L~ E = L~ E, E L L~ = E, F L~ L = F."""
    LF = mat_mul(preset, L, F)
    LtE = mat_mul(preset, L_tilde, E)
    return [
        _check_matrix("iso E L F = L F", preset, mat_mul(preset, E, LF), LF, params),
        _check_matrix("iso F L~ E = L~ E", preset, mat_mul(preset, F, LtE), LtE, params),
        _check_matrix("iso E L L~ = E", preset, mat_mul(preset, E, mat_mul(preset, L, L_tilde)), E, params),
        _check_matrix("iso F L~ L = F", preset, mat_mul(preset, F, mat_mul(preset, L_tilde, L)), F, params),
    ]


def projector_pair(preset: Preset, mu: int, s: Optional[SplittingS] = None, tau: Optional[TranslationLift] = None) -> ProjectorCert:
    """E from the strong splitting, F hermitian, and the iso witnesses between them."""
    tau = tau or translation_lift(preset)
    s = s or J4(connection_form(preset, tau=tau))
    module = line_bundle_generators(preset, mu)
    cert = projector_from_splitting(s, module)
    F_cert = hermitian_projector(preset, mu)
    cert.checks += F_cert.checks
    iso_witnesses(cert, F_cert, translation_row(preset, tau, module))
    cert.checks += verify_module_iso(preset, cert.E, cert.F, cert.L, cert.L_tilde, {"mu": mu})
    return cert


def _block_matrix(preset: Preset, block: dict) -> Matrix:
    return outer(preset, [preset.parse(x) for x in block["column"]], [preset.parse(x) for x in block["row"]])


def _hstack(A: Matrix, B: Matrix) -> Matrix:
    return [list(ra) + list(rb) for ra, rb in zip(A, B)]


def freeness_certificate(preset: Preset) -> List[Check]:
    """A_{-1} + A_1 is free of rank 2: diag(F_-1, M F_1 M) against E = I_2."""
    block = preset.block("freeness")
    F_minus = hermitian_projector(preset, -1)
    F_plus = hermitian_projector(preset, 1)
    M = permutation(preset, block["permutation"])
    F = block_diag(preset, F_minus.F, mat_mul(preset, mat_mul(preset, M, F_plus.F), M))
    L = _hstack(_block_matrix(preset, block["g_minus"]), _block_matrix(preset, block["g_plus"]))
    L_tilde = _block_matrix(preset, block["f_minus"]) + _block_matrix(preset, block["f_plus"])
    E = identity(preset, len(L))
    checks = F_minus.checks + F_plus.checks
    checks.append(_check_matrix("freeness F^2 = F", preset, mat_mul(preset, F, F), F))
    params = {"rank": len(L), "size": len(F)}
    return checks + verify_module_iso(preset, E, F, L, L_tilde, params)


# ---------------------------------------------------------------- idempotents and witnesses

def auxiliary_idempotents(preset: Preset) -> List[Check]:
    """F = x x^T on the sphere coordinates and I - F are idempotent."""
    coords = [preset.gen(x) for x in preset.block("connection")["coordinates"]]
    F = outer(preset, coords, coords)
    I = identity(preset, len(coords))
    G = sub(I, F)
    trace = sum((F[i][i] for i in range(len(F))), NcPoly.zero(preset.table))
    checks = [
        _check_matrix("tangent F^2 = F", preset, mat_mul(preset, F, F), F),
        _check_matrix("tangent (I - F)^2 = I - F", preset, mat_mul(preset, G, G), G),
        check_equal("tangent trace F = 1", preset.name, trace, NcPoly.one(preset.table)),
    ]
    cert = projector_from_splitting(J4(connection_form(preset)), line_bundle_generators(preset, 1))
    checks += cert.checks
    checks.append(_check_matrix("odd class projector = F", preset, cert.E, F))
    return checks


def nonstrong_witness(preset: Preset, degree_bound: int = 6) -> List[Check]:
    """The shifted splitting leaves B (x) P at the first coordinate, also at q = 1."""
    x = preset.gen(preset.block("connection")["coordinates"][0])
    s = J4(connection_form(preset, "strong"))
    s_shift = J4(connection_form(preset, "nonstrong"))
    name = preset.name
    strong_value = s(x)
    shifted = s_shift(x)
    odd = sorted({preset.table.word_text(u) for (u, _), _ in shifted.items() if preset.table.word_degree(u) != 0})
    diff = shifted - strong_value
    classical = specialize_q1(shifted)
    checks = [
        check_true("strong s(x) in B (x) P", name, membership(strong_value, "BotP"), strong_value.to_text()[:400]),
        Check("shifted s(x) leaves B (x) P", name, {"odd_left_factors": odd}, not membership(shifted, "BotP"), shifted.to_text()[:400]),
        Check("x d(x^2) outside (Omega1B)P", name, {}, not subspace_membership(preset.pres, diff, "ker-m-over-B", degree_bound), diff.to_text()[:400]),
        Check("shifted s(x) leaves B (x) P at q = 1", name, {}, bool(classical) and not membership(classical, "BotP"), classical.to_text()[:400]),
    ]
    return checks
