"""Free-algebra words and graded noncommutative polynomials over Scalar."""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.parsing.sympy_parser import parse_expr

from scalars import ONE, ZERO, Scalar, TEXT_NAMES

Word = Tuple[int, ...]


class TableError(ValueError):
    """Polynomials from different generator tables, or text naming unknown letters."""


@dataclass(frozen=True)
class Grading:
    """The grading group: Z when modulus is 0, Z/modulus otherwise."""

    modulus: int = 0
    symbol: str = "z"

    def norm(self, g: int) -> int:
        return g % self.modulus if self.modulus else g

    def mul(self, g: int, h: int) -> int:
        return self.norm(g + h)

    def inv(self, g: int) -> int:
        return self.norm(-g)

    def label(self, g: int) -> str:
        g = self.norm(g)
        if g == 0:
            return "1"
        if g == 1:
            return self.symbol
        return f"{self.symbol}**{g}"


@dataclass(frozen=True)
class GeneratorTable:
    """Generators in rank order, their degrees and an optional signed star map.

    ``star[k] = (sign, j)`` means ``x_k* = sign * x_j``.
    """

    names: Tuple[str, ...]
    degrees: Tuple[int, ...]
    grading: Grading = field(default_factory=Grading)
    star: Optional[Tuple[Tuple[int, int], ...]] = None

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise TableError("every generator needs a degree")
        if len(set(self.names)) != len(self.names):
            raise TableError("duplicate generator names")
        reserved = set(TEXT_NAMES) | {self.grading.symbol}
        clash = reserved.intersection(self.names)
        if clash:
            raise TableError(f"reserved generator names: {sorted(clash)}")
        object.__setattr__(self, "degrees", tuple(self.grading.norm(d) for d in self.degrees))
        if self.star is not None:
            for k, (sign, j) in enumerate(self.star):
                if sign not in (1, -1):
                    raise TableError("star signs must be +1 or -1")
                back_sign, back = self.star[j]
                if back != k or sign * back_sign != 1:
                    raise TableError(f"star is not an involution on {self.names[k]}")
                if self.degrees[j] != self.grading.inv(self.degrees[k]):
                    raise TableError(f"star does not negate the degree of {self.names[k]}")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise TableError(f"Unknown generator: {name}") from None

    def word_degree(self, word: Word) -> int:
        return self.grading.norm(sum(self.degrees[k] for k in word))

    def word_text(self, word: Word) -> str:
        return "*".join(self.names[k] for k in word)


class NcPoly:
    """Sparse sum of Scalar-weighted words; zero coefficients are never stored."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: GeneratorTable, terms: Optional[Mapping[Word, Scalar]] = None):
        self.table = table
        self._terms: Dict[Word, Scalar] = {}
        self._hash = None
        for word, coeff in (terms or {}).items():
            coeff = Scalar(coeff)
            if coeff:
                self._terms[tuple(word)] = coeff

    @classmethod
    def _raw(cls, table: GeneratorTable, terms: Dict[Word, Scalar]) -> "NcPoly":
        out = cls.__new__(cls)
        out.table = table
        out._terms = terms
        out._hash = None
        return out

    @classmethod
    def zero(cls, table: GeneratorTable) -> "NcPoly":
        return cls._raw(table, {})

    @classmethod
    def one(cls, table: GeneratorTable) -> "NcPoly":
        return cls._raw(table, {(): ONE})

    @classmethod
    def scalar(cls, table: GeneratorTable, c) -> "NcPoly":
        return cls(table, {(): Scalar(c)})

    @classmethod
    def gen(cls, table: GeneratorTable, name: str) -> "NcPoly":
        return cls._raw(table, {(table.index(name),): ONE})

    @classmethod
    def monomial(cls, table: GeneratorTable, word: Sequence[int], coeff=1) -> "NcPoly":
        return cls(table, {tuple(word): Scalar(coeff)})

    # access
    def terms(self) -> List[Tuple[Word, Scalar]]:
        return sorted(self._terms.items(), key=lambda item: (len(item[0]), item[0]))

    def items(self) -> Iterable[Tuple[Word, Scalar]]:
        return self._terms.items()

    def words(self) -> List[Word]:
        return [w for w, _ in self.terms()]

    def coeff(self, word: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(word), ZERO)

    def constant_term(self) -> Scalar:
        return self._terms.get((), ZERO)

    def max_length(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def __iter__(self) -> Iterator[Tuple[Word, Scalar]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # arithmetic
    def _check(self, other: "NcPoly") -> None:
        if other.table != self.table:
            raise TableError("polynomials over different generator tables")

    def _combine(self, other: "NcPoly", sign: int) -> "NcPoly":
        self._check(other)
        terms = dict(self._terms)
        for word, coeff in other._terms.items():
            value = terms.get(word, ZERO) + (coeff if sign > 0 else -coeff)
            if value:
                terms[word] = value
            else:
                terms.pop(word, None)
        return NcPoly._raw(self.table, terms)

    def __add__(self, other):
        if isinstance(other, (Scalar, int)):
            other = NcPoly.scalar(self.table, other)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (Scalar, int)):
            other = NcPoly.scalar(self.table, other)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> "NcPoly":
        return NcPoly._raw(self.table, {w: -c for w, c in self._terms.items()})

    def scale(self, c) -> "NcPoly":
        c = Scalar(c)
        if not c:
            return NcPoly.zero(self.table)
        return NcPoly._raw(self.table, {w: v * c for w, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (Scalar, int)):
            other = NcPoly.scalar(self.table, other)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.table == other.table and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def map_coefficients(self, fn) -> "NcPoly":
        return NcPoly(self.table, {w: fn(c) for w, c in self._terms.items()})

    # text
    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for word, coeff in self.terms():
            if not word:
                parts.append(f"({coeff.to_text()})")
            elif coeff == ONE:
                parts.append(self.table.word_text(word))
            else:
                parts.append(f"({coeff.to_text()})*{self.table.word_text(word)}")
        return " + ".join(parts)

    @classmethod
    def parse(cls, table: GeneratorTable, text: str) -> "NcPoly":
        """Parse text such as ``3/2*a*b*lp + (1 - I)*c``."""
        out: Dict[Word, Scalar] = {}
        for coeff, factors in parse_terms(text, table.names):
            word = tuple(table.index(name) for name, power in factors for _ in range(power))
            out[word] = out.get(word, ZERO) + coeff
        return cls(table, out)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"NcPoly({self.to_text()!r})"


def multiply(p: NcPoly, p2: NcPoly) -> NcPoly:
    """Free-algebra product; no reduction."""
    p._check(p2)
    terms: Dict[Word, Scalar] = {}
    for w1, c1 in p._terms.items():
        for w2, c2 in p2._terms.items():
            word = w1 + w2
            terms[word] = terms.get(word, ZERO) + c1 * c2
    return NcPoly(p.table, terms)


def degree_of(p: NcPoly) -> Optional[int]:
    """Common degree of every monomial of p, or None when p is inhomogeneous.

    The zero polynomial has degree 0.
    """
    degrees = {p.table.word_degree(w) for w in p._terms}
    if not degrees:
        return 0
    if len(degrees) > 1:
        return None
    return degrees.pop()


def homogeneous_components(p: NcPoly) -> Dict[int, NcPoly]:
    parts: Dict[int, Dict[Word, Scalar]] = {}
    for word, coeff in p._terms.items():
        parts.setdefault(p.table.word_degree(word), {})[word] = coeff
    return {g: NcPoly._raw(p.table, terms) for g, terms in sorted(parts.items())}


def star(p: NcPoly) -> NcPoly:
    """Antilinear antihomomorphism extending the table's star map."""
    table = p.table
    if table.star is None:
        raise TableError("generator table has no star map")
    terms: Dict[Word, Scalar] = {}
    for word, coeff in p._terms.items():
        sign = 1
        image = []
        for k in reversed(word):
            s, j = table.star[k]
            sign *= s
            image.append(j)
        image = tuple(image)
        value = coeff.conj() if sign > 0 else -coeff.conj()
        terms[image] = terms.get(image, ZERO) + value
    return NcPoly(table, terms)


def parse_terms(text: str, names: Sequence[str], extra: Sequence[str] = ()) -> List[Tuple[Scalar, List[Tuple[str, int]]]]:
    """Expand text over noncommutative symbols into (coefficient, factors) pairs.

    Each factor is ``(name, power)``. Generators only take positive powers; the
    ``extra`` symbols may carry any integer power. Anything commutative must be
    a scalar in q and I.
    """
    symbols = {name: sympy.Symbol(name, commutative=False) for name in (*names, *extra)}
    local = dict(TEXT_NAMES)
    local.update(symbols)
    try:
        expr = sympy.expand(parse_expr(str(text), local_dict=local))
    except (SyntaxError, TypeError) as e:
        raise TableError(f"Cannot parse polynomial: {text!r}") from e
    out = []
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        commutative, noncommutative = term.args_cnc()
        try:
            coeff = Scalar(sympy.Mul(*commutative))
        except ValueError as e:
            raise TableError(f"Unknown symbol in {text!r}") from e
        factors: List[Tuple[str, int]] = []
        for factor in noncommutative:
            base, exp = factor.as_base_exp()
            if not isinstance(base, sympy.Symbol) or base.name not in symbols:
                raise TableError(f"Unknown letter {base} in {text!r}")
            if not exp.is_Integer or (base.name in names and exp < 1):
                raise TableError(f"Bad power of {base} in {text!r}")
            factors.append((base.name, int(exp)))
        out.append((coeff, factors))
    return out
