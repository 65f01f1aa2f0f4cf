"""Tensor powers of a presented algebra, optionally with group-like slots."""

from typing import Dict, Iterable, List, Sequence, Tuple, Union

from ncpoly import GeneratorTable, NcPoly, Word, parse_terms
from rewrite import Presentation
from scalars import ONE, ZERO, Scalar

P_SLOT = "P"
H_SLOT = "H"
_SEP = "TENSOR_SEP"

Key = Tuple[Union[Word, int], ...]
Factor = Union[NcPoly, int]


class TensorError(ValueError):
    """Bad slot index or mismatched signatures."""


def key_degree(table: GeneratorTable, key: Key) -> int:
    total = 0
    for part in key:
        total += part if isinstance(part, int) else table.word_degree(part)
    return table.grading.norm(total)


class TensorElem:
    """Sparse sum of pure tensors of normal words (P slots) and group elements (H slots).

    Keys are normal, so equality is coefficient equality.
    """

    __slots__ = ("pres", "signature", "_terms")

    def __init__(self, pres: Presentation, signature: Sequence[str] = (P_SLOT, P_SLOT), terms: Dict[Key, Scalar] = None):
        self.pres = pres
        self.signature = tuple(signature)
        self._terms: Dict[Key, Scalar] = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def zero(cls, pres: Presentation, signature: Sequence[str] = (P_SLOT, P_SLOT)) -> "TensorElem":
        return cls(pres, signature)

    @classmethod
    def pure(cls, pres: Presentation, factors: Sequence[Factor], coeff=1) -> "TensorElem":
        """Multilinear expansion of f1 (x) f2 (x) ...; ints stand for group elements."""
        grading = pres.table.grading
        signature = tuple(H_SLOT if isinstance(f, int) else P_SLOT for f in factors)
        partial: Dict[Key, Scalar] = {(): Scalar(coeff)}
        for f in factors:
            grown: Dict[Key, Scalar] = {}
            if isinstance(f, int):
                for key, c in partial.items():
                    grown[key + (grading.norm(f),)] = c
            else:
                nf = pres.normal_form(f)
                for key, c in partial.items():
                    for w, v in nf.items():
                        k2 = key + (w,)
                        grown[k2] = grown.get(k2, ZERO) + c * v
            partial = grown
        return cls(pres, signature, partial)

    # access
    def items(self) -> Iterable[Tuple[Key, Scalar]]:
        return self._terms.items()

    def terms(self) -> List[Tuple[Key, Scalar]]:
        return sorted(self._terms.items(), key=lambda kv: tuple((p if isinstance(p, tuple) else (p,)) for p in kv[0]))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def max_length(self) -> int:
        return max((sum(len(p) for p in key if isinstance(p, tuple)) for key in self._terms), default=0)

    def slot_poly(self, key_part: Word) -> NcPoly:
        return NcPoly.monomial(self.pres.table, key_part)

    # arithmetic
    def _check(self, other: "TensorElem") -> None:
        if other.signature != self.signature or other.pres is not self.pres:
            raise TensorError(f"signature mismatch: {self.signature} vs {other.signature}")

    def _new(self, terms: Dict[Key, Scalar], signature=None) -> "TensorElem":
        return TensorElem(self.pres, signature or self.signature, terms)

    def __add__(self, other):
        if not isinstance(other, TensorElem):
            return NotImplemented
        self._check(other)
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms.get(k, ZERO) + v
        return self._new(terms)

    def __sub__(self, other):
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "TensorElem":
        return self._new({k: -v for k, v in self._terms.items()})

    def scale(self, c) -> "TensorElem":
        c = Scalar(c)
        return self._new({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        if isinstance(other, NcPoly):
            return self.right_mul(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        if isinstance(other, NcPoly):
            return self.left_mul(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self.signature == other.signature and self._terms == other._terms

    __hash__ = None

    def _mul_slot(self, slot: int, p: NcPoly, left: bool) -> "TensorElem":
        if self.signature[slot] != P_SLOT:
            raise TensorError(f"slot {slot} is not an algebra slot")
        reduce_word = self.pres.reduce_word
        terms: Dict[Key, Scalar] = {}
        for key, c in self._terms.items():
            for w, v in p.items():
                word = w + key[slot] if left else key[slot] + w
                for w2, v2 in reduce_word(word).items():
                    k2 = key[:slot] + (w2,) + key[slot + 1:]
                    terms[k2] = terms.get(k2, ZERO) + c * v * v2
        return self._new(terms)

    def left_mul(self, p: NcPoly) -> "TensorElem":
        """p * t: multiplies the first slot on the left."""
        return self._mul_slot(0, p, left=True)

    def right_mul(self, p: NcPoly) -> "TensorElem":
        """t * p: multiplies the last algebra slot on the right."""
        slot = max(i for i, s in enumerate(self.signature) if s == P_SLOT)
        return self._mul_slot(slot, p, left=False)

    def slot_product(self, other: "TensorElem") -> "TensorElem":
        """Factor-wise product (u (x) v)(u' (x) v') = uu' (x) vv'."""
        self._check(other)
        grading = self.pres.table.grading
        terms: Dict[Key, Scalar] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                parts: List[Dict] = [{(): c1 * c2}]
                for slot, kind in enumerate(self.signature):
                    if kind == H_SLOT:
                        choices = {grading.mul(k1[slot], k2[slot]): ONE}
                    else:
                        choices = self.pres.reduce_word(k1[slot] + k2[slot])
                    parts = [{key + (x,): c * v for key, c in part.items()} for part in parts for x, v in choices.items()]
                for part in parts:
                    for key, c in part.items():
                        terms[key] = terms.get(key, ZERO) + c
        return self._new(terms)

    def map_coefficients(self, fn) -> "TensorElem":
        return self._new({k: Scalar(fn(v)) for k, v in self._terms.items()})

    def left_degrees(self) -> set:
        return {self.pres.table.word_degree(k[0]) for k in self._terms}

    def right_degrees(self, slot: int = -1) -> set:
        return {self.pres.table.word_degree(k[slot]) for k in self._terms}

    def total_degrees(self) -> set:
        return {key_degree(self.pres.table, k) for k in self._terms}

    # text
    def _part_text(self, kind: str, part) -> str:
        if kind == H_SLOT:
            return self.pres.table.grading.label(part)
        return self.pres.table.word_text(part) or "1"

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for key, c in self.terms():
            body = " (x) ".join(self._part_text(kind, part) for kind, part in zip(self.signature, key))
            out.append(f"({c.to_text()})*{body}")
        return " + ".join(out)

    @classmethod
    def parse(cls, pres: Presentation, text: str, signature: Sequence[str] = (P_SLOT, P_SLOT)) -> "TensorElem":
        """Parse ``p1 (x) p2 (x) h`` sums; slot contents may be polynomials."""
        table = pres.table
        symbol = table.grading.symbol
        text = str(text).replace("(x)", f"*{_SEP}*")
        out = TensorElem.zero(pres, signature)
        for coeff, factors in parse_terms(text, table.names, extra=(_SEP, symbol)):
            slots: List[list] = [[]]
            for name, power in factors:
                if name == _SEP:
                    for _ in range(power):
                        slots.append([])
                else:
                    slots[-1].append((name, power))
            if len(slots) != len(signature):
                raise TensorError(f"expected {len(signature)} slots in {text!r}")
            pure: List[Factor] = []
            for kind, slot in zip(signature, slots):
                if kind == H_SLOT:
                    if any(name != symbol for name, _ in slot):
                        raise TensorError(f"group slot may only hold {symbol}")
                    pure.append(sum(power for _, power in slot))
                else:
                    if any(name == symbol for name, _ in slot):
                        raise TensorError(f"{symbol} in an algebra slot")
                    word = tuple(table.index(name) for name, power in slot for _ in range(power))
                    pure.append(NcPoly.monomial(table, word))
            out = out + TensorElem.pure(pres, pure, coeff)
        return out

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"TensorElem({self.to_text()!r})"


def d_universal(pres: Presentation, p: NcPoly) -> TensorElem:
    """dp = 1 (x) p - p (x) 1."""
    one = NcPoly.one(pres.table)
    return TensorElem.pure(pres, [one, p]) - TensorElem.pure(pres, [p, one])


def contract_m(t: TensorElem, slot: int = 0) -> TensorElem:
    """Multiply slots ``slot`` and ``slot + 1``; the arity drops by one."""
    sig = t.signature
    if slot < 0 or slot + 1 >= len(sig) or sig[slot] != P_SLOT or sig[slot + 1] != P_SLOT:
        raise TensorError(f"cannot contract slots {slot}, {slot + 1} of {sig}")
    new_sig = sig[:slot] + (P_SLOT,) + sig[slot + 2:]
    terms: Dict[Key, Scalar] = {}
    for key, c in t.items():
        for w, v in t.pres.reduce_word(key[slot] + key[slot + 1]).items():
            k2 = key[:slot] + (w,) + key[slot + 2:]
            terms[k2] = terms.get(k2, ZERO) + c * v
    return TensorElem(t.pres, new_sig, terms)


def m(t: TensorElem) -> NcPoly:
    """Multiplication P (x) P -> P as a polynomial."""
    if t.signature != (P_SLOT, P_SLOT):
        raise TensorError("multiplication needs a two-slot algebra tensor")
    return NcPoly(t.pres.table, {key[0]: c for key, c in contract_m(t).items()})


def chi_bar(t: TensorElem) -> TensorElem:
    """sum (u v) (x) deg(v) over pure tensors u (x) v."""
    if t.signature != (P_SLOT, P_SLOT):
        raise TensorError("chi_bar needs a two-slot algebra tensor")
    table = t.pres.table
    terms: Dict[Key, Scalar] = {}
    for (u, v), c in t.items():
        g = table.word_degree(v)
        for w, x in t.pres.reduce_word(u + v).items():
            terms[(w, g)] = terms.get((w, g), ZERO) + c * x
    return TensorElem(t.pres, (P_SLOT, H_SLOT), terms)


def coaction_tensor(pres: Presentation, p: NcPoly) -> TensorElem:
    """p (x) deg p summed over homogeneous components."""
    table = pres.table
    terms: Dict[Key, Scalar] = {}
    for w, c in pres.normal_form(p).items():
        key = (w, table.word_degree(w))
        terms[key] = terms.get(key, ZERO) + c
    return TensorElem(pres, (P_SLOT, H_SLOT), terms)


SPACES = ("Omega1P", "BotP", "Omega1B_P")


def membership(t: TensorElem, space: str) -> bool:
    """Omega1P: m(t) = 0. BotP: every left slot has degree 0. Omega1B_P: both."""
    if space not in SPACES:
        raise ValueError(f"Unknown space: {space}")
    in_kernel = not contract_m(t)
    in_bot = all(d == 0 for d in t.left_degrees())
    if space == "Omega1P":
        return in_kernel
    if space == "BotP":
        return in_bot
    return in_kernel and in_bot


def twisted_product(t: TensorElem, t2: TensorElem) -> TensorElem:
    """(u (x) v) * (u' (x) v') = u'u (x) v v', the product of translation values."""
    t._check(t2)
    terms: Dict[Key, Scalar] = {}
    reduce_word = t.pres.reduce_word
    for (u, v), c in t.items():
        for (u2, v2), c2 in t2.items():
            for a, x in reduce_word(u2 + u).items():
                for b, y in reduce_word(v + v2).items():
                    terms[(a, b)] = terms.get((a, b), ZERO) + c * c2 * x * y
    return TensorElem(t.pres, t.signature, terms)


def lifted_splitting(t: TensorElem, splitting) -> TensorElem:
    """sum u * s(v) over pure tensors u (x) v; s maps polynomials to two-slot tensors."""
    table = t.pres.table
    out = TensorElem.zero(t.pres)
    for (u, v), c in t.items():
        value = splitting(NcPoly.monomial(table, v))
        out = out + value.left_mul(NcPoly.monomial(table, u)).scale(c)
    return out


def specialize_q1(t: TensorElem) -> TensorElem:
    return t.map_coefficients(lambda c: c.specialize_q1())
