"""Group algebras of Z and Z/2, coactions as gradings, and Hopf structures on presets."""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from ncpoly import Grading, NcPoly, Word
from report import Check, check_equal
from rewrite import Presentation
from scalars import ONE, ZERO, Scalar
from tensor import H_SLOT, TensorElem, coaction_tensor


class HopfError(ValueError):
    """Operation needs Hopf data the preset does not carry."""


@dataclass(frozen=True)
class GroupHopf:
    """Group algebra k[Z] or k[Z/2] on its group-like basis; elements are ints."""

    grading: Grading

    @property
    def identity(self) -> int:
        return 0

    @property
    def is_cyclic2(self) -> bool:
        return self.grading.modulus == 2

    def norm(self, g: int) -> int:
        return self.grading.norm(g)

    def mul(self, g: int, h: int) -> int:
        return self.grading.mul(g, h)

    def inv(self, g: int) -> int:
        return self.grading.inv(g)

    def coproduct(self, g: int) -> Tuple[int, int]:
        return (self.norm(g), self.norm(g))

    def counit(self, g: int) -> int:
        return 1

    def antipode(self, g: int) -> int:
        return self.inv(g)

    def label(self, g: int) -> str:
        return self.grading.label(g)

    def generators(self) -> List[int]:
        return [1] if self.is_cyclic2 else [1, -1]

    def elements(self, n_range: int) -> List[int]:
        """e first, then the nontrivial elements with |g| <= n_range."""
        if self.is_cyclic2:
            return [0, 1]
        out = [0]
        for n in range(1, n_range + 1):
            out += [n, -n]
        return out

    def augmentation(self, g: int) -> Dict[int, int]:
        """g - e as a vector in H+."""
        g = self.norm(g)
        return {} if g == 0 else {g: 1, 0: -1}


def coaction(pres: Presentation, p: NcPoly) -> TensorElem:
    return coaction_tensor(pres, p)


def ad_R(pres: Presentation, g: int) -> TensorElem:
    """Right adjoint coaction of a group-like; the group is abelian, so g (x) e."""
    grading = pres.table.grading
    return TensorElem(pres, (H_SLOT, H_SLOT), {(grading.norm(g), 0): ONE})


class HopfStructure:
    """Coproduct, counit and antipode on generators, extended to the algebra.

    The coproduct is an algebra map into P (x) P, the antipode an
    antihomomorphism, the counit a character.
    """

    def __init__(
        self,
        pres: Presentation,
        coproduct: Mapping[str, TensorElem],
        counit: Mapping[str, Scalar],
        antipode: Mapping[str, NcPoly],
        quotient: Optional[Mapping[str, int]] = None,
    ):
        table = pres.table
        missing = [n for n in table.names if n not in coproduct or n not in counit or n not in antipode]
        if missing:
            raise HopfError(f"Hopf data missing for {missing}")
        self.pres = pres
        self._delta = [coproduct[n] for n in table.names]
        self._eps = [Scalar(counit[n]) for n in table.names]
        self._s = [pres.normal_form(antipode[n]) for n in table.names]
        self.quotient = {table.index(n): int(e) for n, e in (quotient or {}).items()}
        self._delta_cache: Dict[Word, TensorElem] = {}

    def _delta_word(self, word: Word) -> TensorElem:
        cached = self._delta_cache.get(word)
        if cached is not None:
            return cached
        if not word:
            one = NcPoly.one(self.pres.table)
            result = TensorElem.pure(self.pres, [one, one])
        else:
            result = self._delta_word(word[:-1]).slot_product(self._delta[word[-1]])
        self._delta_cache[word] = result
        return result

    def coproduct(self, p: NcPoly) -> TensorElem:
        out = TensorElem.zero(self.pres)
        for w, c in self.pres.normal_form(p).items():
            out = out + self._delta_word(w).scale(c)
        return out

    def counit(self, p: NcPoly) -> Scalar:
        total = ZERO
        for w, c in p.items():
            value = c
            for k in w:
                value = value * self._eps[k]
            total = total + value
        return total

    def antipode(self, p: NcPoly) -> NcPoly:
        out = NcPoly.zero(self.pres.table)
        for w, c in p.items():
            value = NcPoly.scalar(self.pres.table, c)
            for k in reversed(w):
                value = self.pres.mul(value, self._s[k])
            out = out + value
        return out

    def counit_slot(self, t: TensorElem, slot: int = 0) -> NcPoly:
        """(eps (x) id) or (id (x) eps) on a two-slot tensor."""
        table = self.pres.table
        keep = 1 - slot
        terms: Dict[Word, Scalar] = {}
        for key, c in t.items():
            value = c * self.counit(NcPoly.monomial(table, key[slot]))
            if value:
                terms[key[keep]] = terms.get(key[keep], ZERO) + value
        return NcPoly(table, terms)

    def convolve_antipode(self, t: TensorElem, left: bool = True) -> NcPoly:
        """m (S (x) id) or m (id (x) S) on a two-slot tensor."""
        table = self.pres.table
        out = NcPoly.zero(table)
        for (u, v), c in t.items():
            up, vp = NcPoly.monomial(table, u), NcPoly.monomial(table, v)
            if left:
                out = out + self.pres.mul(self.antipode(up), vp).scale(c)
            else:
                out = out + self.pres.mul(up, self.antipode(vp)).scale(c)
        return out

    def check_axioms(self, preset: str = "", relations: Optional[List[NcPoly]] = None) -> List[Check]:
        checks: List[Check] = []
        table = self.pres.table
        for name in table.names:
            x = self.pres.gen(name)
            dx = self.coproduct(x)
            eps = NcPoly.scalar(table, self.counit(x))
            params = {"generator": name}
            checks.append(check_equal("hopf counit left", preset, self.counit_slot(dx, 0), x, params))
            checks.append(check_equal("hopf counit right", preset, self.counit_slot(dx, 1), x, params))
            checks.append(check_equal("hopf antipode left", preset, self.convolve_antipode(dx, True), eps, params))
            checks.append(check_equal("hopf antipode right", preset, self.convolve_antipode(dx, False), eps, params))
        for k, rel in enumerate(relations or []):
            zero2 = TensorElem.zero(self.pres)
            params = {"relation": rel.to_text()}
            checks.append(check_equal("coproduct kills relation", preset, self._raw_coproduct(rel), zero2, params))
            checks.append(check_equal("counit kills relation", preset, self.counit(rel), ZERO, params))
        return checks

    def _raw_coproduct(self, p: NcPoly) -> TensorElem:
        """Coproduct applied letter by letter, without reducing p first."""
        out = TensorElem.zero(self.pres)
        for w, c in p.items():
            out = out + self._delta_word(w).scale(c)
        return out

    def pi_I(self, p: NcPoly) -> Dict[int, Scalar]:
        """Algebra map onto Laurent polynomials in z given by the quotient exponents.

        Letters without an exponent map to 0. Returns {exponent: coefficient}.
        """
        if not self.quotient:
            raise HopfError("preset has no quotient map onto the structure group")
        out: Dict[int, Scalar] = {}
        for w, c in p.items():
            if any(k not in self.quotient for k in w):
                continue
            e = sum(self.quotient[k] for k in w)
            out[e] = out.get(e, ZERO) + c
        return {e: c for e, c in sorted(out.items()) if c}
