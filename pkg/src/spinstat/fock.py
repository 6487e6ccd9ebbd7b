"""Symbolic second quantization on operator words.

A relation table declares annihilator/creator pairs and the value of their
elementary bracket; every other bracket is zero.  Words of operators are
normal ordered by exact rewriting, which is enough machinery to compute
vacuum expectation values and Gram matrices of multi-quantum states, and
in particular to exhibit a negative-norm state when a pairing carries the
wrong sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra import ExactMatrix, Scalar, hermitian_signature

__all__ = [
    "UnknownSymbolError",
    "OperatorWord",
    "RelationTable",
    "parse_relation_table",
    "normal_order",
    "vacuum_expectation",
    "adjoint_word",
    "GramResult",
    "gram_matrix",
    "ModeTerm",
    "ModeExpansion",
]

_ZERO = Scalar(0)
_ONE = Scalar(1)


class UnknownSymbolError(ValueError):
    """A word used a symbol the relation table does not declare."""


@dataclass(frozen=True)
class OperatorWord:
    symbols: tuple[str, ...]
    coefficient: Scalar = _ONE


class RelationTable:
    """Elementary brackets between annihilators and creators.

    Same-kind brackets are identically zero, which keeps normal ordering
    terminating.  Adjoints are resolved by name (``x`` versus ``xdag``)
    when both symbols are declared, falling back to the pair partner: a
    table that declares only ``pair c ddag`` is the hermitian-identified
    presentation where d = c.
    """

    def __init__(self, bracket: str, pairs) -> None:
        if bracket not in ("commutator", "anticommutator"):
            raise ValueError(
                f"bracket must be commutator or anticommutator, got {bracket!r}")
        self.bracket = bracket
        self.pairs: tuple[tuple[str, str, Scalar], ...] = tuple(
            (a, c, Scalar.coerce(v)) for a, c, v in pairs)

        self.annihilators: frozenset[str] = frozenset(a for a, _, _ in self.pairs)
        self.creators: frozenset[str] = frozenset(c for _, c, _ in self.pairs)
        overlap = self.annihilators & self.creators
        if overlap:
            raise ValueError(
                f"symbol declared as both annihilator and creator: {sorted(overlap)[0]}")

        self._values: dict[tuple[str, str], Scalar] = {}
        for a, c, v in self.pairs:
            if (a, c) in self._values:
                raise ValueError(f"duplicate pair declaration {a} {c}")
            self._values[a, c] = v

        self._partners: dict[str, list[str]] = {}
        for a, c, _ in self.pairs:
            self._partners.setdefault(a, []).append(c)
            self._partners.setdefault(c, []).append(a)

    @property
    def symbols(self) -> frozenset[str]:
        return self.annihilators | self.creators

    def kind(self, symbol: str) -> str:
        if symbol in self.annihilators:
            return "annihilator"
        if symbol in self.creators:
            return "creator"
        raise UnknownSymbolError(f"unknown operator symbol {symbol!r}")

    def value(self, annihilator: str, creator: str) -> Scalar:
        return self._values.get((annihilator, creator), _ZERO)

    def adjoint_of(self, symbol: str) -> str:
        self.kind(symbol)
        if symbol in self.creators and symbol.endswith("dag"):
            stripped = symbol[:-3]
            if stripped in self.annihilators:
                return stripped
        if symbol in self.annihilators and symbol + "dag" in self.creators:
            return symbol + "dag"
        partners = self._partners.get(symbol, [])
        if len(set(partners)) == 1:
            return partners[0]
        raise ValueError(
            f"adjoint of {symbol!r} is ambiguous: no name match and "
            f"{len(set(partners))} distinct pair partners")


def parse_relation_table(text: str) -> RelationTable:
    """Parse the line format: ``bracket = <kind>`` and ``pair <a> <cdag> = <value>``."""
    bracket = None
    pairs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "bracket":
            if len(tokens) != 3 or tokens[1] != "=":
                raise ValueError(f"line {line_no}: expected 'bracket = <kind>'")
            if bracket is not None:
                raise ValueError(f"line {line_no}: duplicate bracket line")
            bracket = tokens[2]
        elif tokens[0] == "pair":
            if len(tokens) < 5 or tokens[3] != "=":
                raise ValueError(
                    f"line {line_no}: expected 'pair <a> <cdag> = <value>'")
            a, c = tokens[1], tokens[2]
            if a.endswith("dag"):
                raise ValueError(
                    f"line {line_no}: first pair symbol is the annihilator "
                    f"and must not end in 'dag'")
            if not c.endswith("dag"):
                raise ValueError(
                    f"line {line_no}: second pair symbol is the creator "
                    f"and must end in 'dag'")
            value = Scalar.parse("".join(tokens[4:]))
            pairs.append((a, c, value))
        else:
            raise ValueError(f"line {line_no}: unknown directive {tokens[0]!r}")
    if bracket is None:
        raise ValueError("relation table needs a 'bracket = ...' line")
    if not pairs:
        raise ValueError("relation table declares no pairs")
    return RelationTable(bracket, pairs)


def _check_word(word, table: RelationTable) -> tuple[str, ...]:
    symbols = tuple(word)
    for s in symbols:
        table.kind(s)
    return symbols


def _sorted_with_parity(block, fermi: bool):
    """Sort a block of same-kind symbols; return (sorted, sign) or None.

    Same-kind brackets vanish, so the symbols commute (bose) or anticommute
    (fermi) freely; for fermi a repeated symbol squares to zero.
    """
    items = list(block)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    if fermi:
        if any(a == b for a, b in zip(items, items[1:])):
            return None
        return tuple(items), sign
    return tuple(items), 1


def _canonical(word, table: RelationTable):
    """Canonical form of an already creator-left word: (word, sign) or None."""
    split = len(word)
    for i, s in enumerate(word):
        if s in table.annihilators:
            split = i
            break
    fermi = table.bracket == "anticommutator"
    creators = _sorted_with_parity(word[:split], fermi)
    annihilators = _sorted_with_parity(word[split:], fermi)
    if creators is None or annihilators is None:
        return None
    return creators[0] + annihilators[0], creators[1] * annihilators[1]


def _normal_order_map(symbols, table: RelationTable) -> dict[tuple[str, ...], Scalar]:
    sign = Scalar(-1) if table.bracket == "anticommutator" else _ONE
    memo: dict[tuple[str, ...], dict[tuple[str, ...], Scalar]] = {}

    def go(word: tuple[str, ...]) -> dict[tuple[str, ...], Scalar]:
        cached = memo.get(word)
        if cached is not None:
            return cached
        out: dict[tuple[str, ...], Scalar] = {}

        bad = None
        for i in range(len(word) - 1):
            if word[i] in table.annihilators and word[i + 1] in table.creators:
                bad = i
                break
        if bad is None:
            canonical = _canonical(word, table)
            if canonical is not None:
                ordered, parity = canonical
                out[ordered] = _ONE if parity == 1 else Scalar(-1)
        else:
            a, c = word[bad], word[bad + 1]
            swapped = word[:bad] + (c, a) + word[bad + 2:]
            for w, coeff in go(swapped).items():
                _accumulate(out, w, coeff * sign)
            bracket_value = table.value(a, c)
            if not bracket_value.is_zero:
                contracted = word[:bad] + word[bad + 2:]
                for w, coeff in go(contracted).items():
                    _accumulate(out, w, coeff * bracket_value)
        memo[word] = out
        return out

    return go(tuple(symbols))


def _accumulate(out, word, coeff) -> None:
    total = out.get(word, _ZERO) + coeff
    if total.is_zero:
        out.pop(word, None)
    else:
        out[word] = total


def normal_order(word, table: RelationTable) -> tuple[OperatorWord, ...]:
    """Rewrite a word so creators stand left of annihilators.

    Accepts a plain symbol sequence or an OperatorWord; the result is a
    canonically sorted tuple of OperatorWords with nonzero coefficients.
    """
    if isinstance(word, OperatorWord):
        symbols, scale = word.symbols, word.coefficient
    else:
        symbols, scale = word, _ONE
    symbols = _check_word(symbols, table)
    terms = _normal_order_map(symbols, table)
    ordered = sorted(terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
    result = []
    for w, coeff in ordered:
        scaled = coeff * scale
        if not scaled.is_zero:
            result.append(OperatorWord(w, scaled))
    return tuple(result)


def vacuum_expectation(word, table: RelationTable) -> Scalar:
    """Coefficient of the empty word in the normal-ordered form."""
    for term in normal_order(word, table):
        if not term.symbols:
            return term.coefficient
    return _ZERO


def adjoint_word(word, table: RelationTable) -> tuple[str, ...]:
    """Adjoint of a product: reverse the order, conjugate each symbol."""
    symbols = _check_word(word, table)
    return tuple(table.adjoint_of(s) for s in reversed(symbols))


@dataclass(frozen=True)
class GramResult:
    matrix: ExactMatrix
    signature: tuple[int, int, int]


def gram_matrix(states, table: RelationTable) -> GramResult:
    """Gram matrix G_mn = <0| adjoint(word_m) word_n |0> of creator words.

    The signature is computed exactly; a negative entry in it is the
    negative-norm witness.
    """
    words = [_check_word(w, table) for w in states]
    if not words:
        raise ValueError("gram_matrix needs at least one state")
    for w in words:
        for s in w:
            if s not in table.creators:
                raise ValueError(
                    f"gram states must be creator words; {s!r} is not a creator")
    entries = [
        [vacuum_expectation(adjoint_word(m, table) + n, table) for n in words]
        for m in words
    ]
    matrix = ExactMatrix(entries)
    if not matrix.is_hermitian():
        raise ValueError(
            "gram matrix came out non-hermitian; the relation table is not "
            "consistent with its own adjoint structure")
    return GramResult(matrix, hermitian_signature(matrix))


@dataclass(frozen=True)
class ModeTerm:
    """One term of a field's mode expansion."""

    symbol: str
    kind: str
    mode: str
    frequency: Fraction

    def __post_init__(self):
        if self.kind not in ("annihilator", "creator"):
            raise ValueError(f"kind must be annihilator or creator, got {self.kind!r}")
        freq = Fraction(self.frequency)
        object.__setattr__(self, "frequency", freq)
        if freq <= 0:
            raise ValueError(f"mode frequency must be positive, got {freq}")

    @property
    def phase(self) -> str:
        """Plane-wave tag; annihilation parts carry the negative frequency."""
        return "e^{-i(kx-wt)}" if self.kind == "annihilator" else "e^{+i(kx-wt)}"

    @property
    def normalization(self) -> str:
        return f"1/sqrt(2*{self.frequency})"


@dataclass(frozen=True)
class ModeExpansion:
    """A field written as a sum of creation and annihilation mode terms."""

    field: str
    terms: tuple[ModeTerm, ...] = dc_field(default=())

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def labels(self, kind: str) -> frozenset[str]:
        return frozenset(t.mode for t in self.terms if t.kind == kind)
