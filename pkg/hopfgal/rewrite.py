"""Finitely presented algebras by rewriting: normal forms, critical pairs and exact linear algebra."""

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from ncpoly import GeneratorTable, NcPoly, TableError, Word, degree_of
from scalars import ONE, ZERO, Scalar


class PresentationError(ValueError):
    """A rule that is inhomogeneous, does not decrease, or clashes with another."""


@dataclass(frozen=True)
class Rule:
    lead: Word
    tail: NcPoly


class Presentation:
    """Generator table plus rewriting rules lead -> tail.

    The order compares weighted length, then length, then the words letter by
    letter by generator rank (the table's order).
    """

    def __init__(self, table: GeneratorTable, rules: Sequence[Rule], weights: Optional[Sequence[int]] = None, name: str = ""):
        self.table = table
        self.name = name
        self.weights = tuple(weights) if weights is not None else (1,) * len(table.names)
        if len(self.weights) != len(table.names) or min(self.weights, default=1) < 1:
            raise PresentationError("weights must be positive, one per generator")
        self.rules: Dict[Word, NcPoly] = {}
        for rule in rules:
            self._add_rule(rule)
        self._lengths = sorted({len(w) for w in self.rules})
        self._cache: Dict[Word, Dict[Word, Scalar]] = {}

    def _add_rule(self, rule: Rule) -> None:
        lead, tail = tuple(rule.lead), rule.tail
        if not lead:
            raise PresentationError("a rule needs a nonempty leading word")
        if tail.table != self.table:
            raise PresentationError("rule tail over a different table")
        if lead in self.rules:
            raise PresentationError(f"two rules for {self.table.word_text(lead)}")
        lead_deg = self.table.word_degree(lead)
        if tail and degree_of(tail) != lead_deg:
            raise PresentationError(f"rule for {self.table.word_text(lead)} is not homogeneous")
        key = self.order_key(lead)
        for word in tail.words():
            if self.order_key(word) >= key:
                raise PresentationError(
                    f"rule for {self.table.word_text(lead)} does not decrease: {self.table.word_text(word) or '1'}"
                )
        self.rules[lead] = tail

    @classmethod
    def from_text(cls, table: GeneratorTable, rules: Sequence[str], weights=None, name: str = "") -> "Presentation":
        parsed = []
        for text in rules:
            if "->" not in text:
                raise PresentationError(f"rule needs '->': {text!r}")
            lhs, rhs = text.split("->", 1)
            lead = NcPoly.parse(table, lhs)
            if len(lead) != 1 or lead.terms()[0][1] != ONE:
                raise PresentationError(f"rule lead must be a single monic word: {lhs.strip()!r}")
            parsed.append(Rule(lead.words()[0], NcPoly.parse(table, rhs)))
        return cls(table, parsed, weights, name)

    # order
    def order_key(self, word: Word) -> Tuple[int, int, Word]:
        return (sum(self.weights[k] for k in word), len(word), tuple(word))

    def max_rule_length(self) -> int:
        return max(self._lengths, default=0)

    # reduction
    def _find_redex(self, word: Word) -> Optional[Tuple[int, int]]:
        for i in range(len(word)):
            for length in self._lengths:
                if i + length <= len(word) and word[i:i + length] in self.rules:
                    return i, length
        return None

    def is_normal(self, word: Word) -> bool:
        return self._find_redex(tuple(word)) is None

    def reduce_word(self, word: Word) -> Dict[Word, Scalar]:
        """Normal form of a single word as a term dict; memoized."""
        word = tuple(word)
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        hit = self._find_redex(word)
        if hit is None:
            result = {word: ONE}
        else:
            i, length = hit
            prefix, suffix = word[:i], word[i + length:]
            acc: Dict[Word, Scalar] = {}
            for w, c in self.rules[word[i:i + length]].items():
                for w2, c2 in self.reduce_word(prefix + w + suffix).items():
                    acc[w2] = acc.get(w2, ZERO) + c * c2
            result = {w: c for w, c in acc.items() if c}
        self._cache[word] = result
        return result

    def normal_form(self, p: NcPoly) -> NcPoly:
        if p.table != self.table:
            raise TableError("polynomial over a different generator table")
        acc: Dict[Word, Scalar] = {}
        for word, coeff in p.items():
            for w, c in self.reduce_word(word).items():
                acc[w] = acc.get(w, ZERO) + coeff * c
        return NcPoly(self.table, acc)

    def mul(self, p: NcPoly, p2: NcPoly) -> NcPoly:
        """Product in the presented algebra."""
        return self.normal_form(p * p2)

    def parse(self, text: str) -> NcPoly:
        return self.normal_form(NcPoly.parse(self.table, text))

    def gen(self, name: str) -> NcPoly:
        return self.normal_form(NcPoly.gen(self.table, name))

    def one(self) -> NcPoly:
        return NcPoly.one(self.table)

    def zero(self) -> NcPoly:
        return NcPoly.zero(self.table)

    def generators(self) -> List[NcPoly]:
        return [self.gen(name) for name in self.table.names]

    def normal_words(self, max_length: int, degree: Optional[int] = None) -> List[Word]:
        """Irreducible words up to ``max_length``, optionally of one degree."""
        out: List[Word] = [()]
        frontier: List[Word] = [()]
        for _ in range(max_length):
            grown = []
            for word in frontier:
                for k in range(len(self.table.names)):
                    cand = word + (k,)
                    if not any(cand[len(cand) - n:] in self.rules for n in self._lengths if n <= len(cand)):
                        grown.append(cand)
            out.extend(grown)
            frontier = grown
        if degree is not None:
            degree = self.table.grading.norm(degree)
            out = [w for w in out if self.table.word_degree(w) == degree]
        return sorted(out, key=self.order_key)


@dataclass
class ConfluenceReport:
    degree_bound: int
    pairs_checked: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _rewrite_at(pres: Presentation, word: Word, pos: int, lead: Word) -> NcPoly:
    acc: Dict[Word, Scalar] = {}
    prefix, suffix = word[:pos], word[pos + len(lead):]
    for w, c in pres.rules[lead].items():
        for w2, c2 in pres.reduce_word(prefix + w + suffix).items():
            acc[w2] = acc.get(w2, ZERO) + c * c2
    return NcPoly(pres.table, acc)


def check_confluence(pres: Presentation, degree_bound: int) -> ConfluenceReport:
    """Resolve every overlap and inclusion ambiguity of length <= degree_bound."""
    if degree_bound < pres.max_rule_length():
        raise PresentationError(f"degree bound {degree_bound} below the longest rule ({pres.max_rule_length()})")
    report = ConfluenceReport(degree_bound)
    leads = sorted(pres.rules, key=pres.order_key)
    for u in leads:
        for v in leads:
            ambiguities = []
            # overlaps: a proper suffix of u is a proper prefix of v
            for k in range(1, min(len(u), len(v))):
                if u[len(u) - k:] == v[:k] and len(u) + len(v) - k <= degree_bound:
                    ambiguities.append((u + v[k:], len(u) - k))
            # inclusions: v sits strictly inside u
            if v != u and len(v) < len(u):
                for pos in range(len(u) - len(v) + 1):
                    if u[pos:pos + len(v)] == v:
                        ambiguities.append((u, pos))
            for word, pos in ambiguities:
                report.pairs_checked += 1
                left = _rewrite_at(pres, word, 0, u)
                right = _rewrite_at(pres, word, pos, v)
                if left != right:
                    report.failures.append({
                        "word": pres.table.word_text(word),
                        "left": left.to_text(),
                        "right": right.to_text(),
                    })
    return report


class Eliminator:
    """Incremental exact row reduction over Scalar with combination tracking.

    Each stored row has a pivot key (its largest key) with coefficient 1; rows
    are reduced in decreasing key order so a pivot never reappears.
    """

    def __init__(self):
        self._rows: Dict[Hashable, Tuple[Dict, Dict]] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Mapping, combo: Optional[Mapping] = None) -> Tuple[Dict, Dict]:
        vec = {k: v for k, v in vec.items() if v}
        combo = dict(combo or {})
        while True:
            pivots = [k for k in vec if k in self._rows]
            if not pivots:
                return vec, combo
            key = max(pivots)
            factor = vec[key]
            row, row_combo = self._rows[key]
            for k, v in row.items():
                value = vec.get(k, ZERO) - factor * v
                if value:
                    vec[k] = value
                else:
                    vec.pop(k, None)
            for k, v in row_combo.items():
                value = combo.get(k, ZERO) - factor * v
                if value:
                    combo[k] = value
                else:
                    combo.pop(k, None)

    def add(self, vec: Mapping, label: Hashable = None) -> Optional[Dict]:
        """Insert vec; returns None if independent, else the vanishing combination."""
        combo = {} if label is None else {label: ONE}
        vec, combo = self.reduce(vec, combo)
        if not vec:
            return combo
        key = max(vec)
        inv = ONE / vec[key]
        self._rows[key] = ({k: v * inv for k, v in vec.items()}, {k: v * inv for k, v in combo.items()})
        return None

    def in_span(self, vec: Mapping) -> Tuple[bool, Dict, Dict]:
        """Membership test; returns (member, remainder, combination expressing vec)."""
        rest, combo = self.reduce(vec)
        return not rest, rest, {k: -v for k, v in combo.items()}


def linear_independent(pres: Presentation, polys: Sequence[NcPoly]) -> Tuple[bool, Optional[List[Scalar]]]:
    """Independence of normal forms; a dependency is scaled so its last nonzero weight is -1."""
    elim = Eliminator()
    for k, p in enumerate(polys):
        nf = pres.normal_form(p)
        combo = elim.add(dict(nf.items()), k)
        if combo is not None:
            scale = -ONE / combo[k]
            witness = [combo.get(j, ZERO) * scale for j in range(len(polys))]
            return False, witness
    return True, None


FAMILIES = ("ker-m-over-B", "P-ker-m-over-B-P")


def subspace_membership(pres: Presentation, t, family: str, degree_bound: int, splitting=None, coinvariants: Optional[Sequence[NcPoly]] = None) -> bool:
    """Decide t in (Omega^1 B)P or P(Omega^1 B)P up to degree_bound.

    ``ker-m-over-B`` is decided structurally: degree-0 left slots and m(t) = 0.
    For ``P-ker-m-over-B-P`` a splitting s gives an exact test, t lies in the
    subspace iff sum u*s(v) vanishes. Without one the bounded span of
    p (x) b p' - p b (x) p' is searched by elimination.
    """
    import tensor

    if family not in FAMILIES:
        raise ValueError(f"Unknown family: {family}")
    if t.max_length() > degree_bound:
        raise ValueError(f"degree bound {degree_bound} too small for an element of length {t.max_length()}")
    if family == "ker-m-over-B":
        return tensor.membership(t, "Omega1B_P")
    if not tensor.membership(t, "Omega1P"):
        return False
    if splitting is not None:
        return not tensor.lifted_splitting(t, splitting)
    gens = [g for g in (coinvariants or _degree_zero_basis(pres, degree_bound)) if g.max_length() > 0]
    total = {tensor.key_degree(pres.table, key) for key, _ in t.items()}
    elim = Eliminator()
    words = pres.normal_words(degree_bound)
    for b in gens:
        blen = b.max_length()
        for p in words:
            for p2 in words:
                if len(p) + len(p2) + blen > degree_bound:
                    continue
                if pres.table.grading.mul(pres.table.word_degree(p), pres.table.word_degree(p2)) not in total:
                    continue
                pm = NcPoly.monomial(pres.table, p)
                pm2 = NcPoly.monomial(pres.table, p2)
                vec = tensor.TensorElem.pure(pres, [pm, pres.mul(b, pm2)]) - tensor.TensorElem.pure(pres, [pres.mul(pm, b), pm2])
                if vec:
                    elim.add(dict(vec.items()))
    member, _, _ = elim.in_span(dict(t.items()))
    return member


def _degree_zero_basis(pres: Presentation, degree_bound: int) -> List[NcPoly]:
    return [NcPoly.monomial(pres.table, w) for w in pres.normal_words(degree_bound, 0)]
