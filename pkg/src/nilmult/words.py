"""Free-group word calculus: reduction, commutators, Hall bases, and the text grammar.

Commutators are left normed throughout the package: [u, v] = u^-1 v^-1 u v and
[u, v1, ..., vk] means [...[[u, v1], v2]..., vk].  This convention is fixed here
and never mixed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple

GEN_NAME_RE = re.compile(r"[a-z][a-z0-9_]*\Z")

Letter = Tuple[str, int]


class ParseError(ValueError):
    """Syntax error in the word / presentation grammar, with position info."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


def _reduce(pairs: Iterable[Letter]) -> Tuple[Letter, ...]:
    out: list[Letter] = []
    for name, exp in pairs:
        if exp == 0:
            continue
        if out and out[-1][0] == name:
            merged = out[-1][1] + exp
            out.pop()
            if merged != 0:
                out.append((name, merged))
        else:
            out.append((name, exp))
    return tuple(out)


class Word:
    """A freely reduced word over named generators.

    Immutable; the empty word is the identity.  Exponents are plain Python
    integers, so there is no overflow anywhere.
    """

    __slots__ = ("letters",)

    def __init__(self, pairs: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", _reduce(pairs))

    def __setattr__(self, *a):
        raise AttributeError("Word is immutable")

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((name, -exp) for name, exp in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return Word()
        base = self if n > 0 else self.inverse()
        return Word(base.letters * abs(n))

    def conjugate(self, by: "Word") -> "Word":
        """self^by = by^-1 * self * by."""
        return by.inverse() * self * by

    def generators(self) -> Tuple[str, ...]:
        seen: dict[str, None] = {}
        for name, _ in self.letters:
            seen.setdefault(name)
        return tuple(seen)

    def exponent_sum(self, name: str) -> int:
        return sum(e for n, e in self.letters if n == name)

    def syllables(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for name, exp in self.letters:
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"Word({self})"


def word(name: str, exp: int = 1) -> Word:
    return Word([(name, exp)])


def free_reduce(raw: Iterable[Letter]) -> Word:
    """Reduce a raw letter sequence to its unique freely reduced form."""
    return Word(raw)


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u^-1 v^-1 u v, freely reduced."""
    return u.inverse() * v.inverse() * u * v


def left_normed(u: Word, *vs: Word) -> Word:
    """[u, v1, ..., vk] = [...[[u, v1], v2]..., vk]."""
    out = u
    for v in vs:
        out = commutator(out, v)
    return out


# ---------------------------------------------------------------------------
# Hall basic commutators.
#
# A basic commutator is a generator (weight 1) or a pair c = [a, b] of basic
# commutators with a > b in the fixed order and, when a = [a1, a2], a2 <= b.
# The order is weight first, then generators by declaration index, then
# components lexicographically; this pins down the numbering that polycyclic
# generators of free nilpotent quotients follow.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BasicCommutator:
    weight: int
    gen: Optional[str] = None
    gen_index: int = -1
    left: Optional["BasicCommutator"] = None
    right: Optional["BasicCommutator"] = None

    def key(self):
        if self.gen is not None:
            return (self.weight, 0, self.gen_index)
        return (self.weight, 1, self.left.key(), self.right.key())

    def as_word(self) -> Word:
        if self.gen is not None:
            return word(self.gen)
        return commutator(self.left.as_word(), self.right.as_word())

    def __str__(self) -> str:
        if self.gen is not None:
            return self.gen
        return f"[{self.left},{self.right}]"


def hall_basis(n_generators: int, max_weight: int,
               names: Optional[Sequence[str]] = None) -> list[list[BasicCommutator]]:
    """Complete Hall basis grouped by weight, for weights 1..max_weight.

    The count in weight k equals the Witt number (1/k) sum_{d|k} mu(d) n^{k/d}.
    """
    if n_generators < 1 or max_weight < 1:
        raise ValueError("need at least one generator and weight >= 1")
    if names is None:
        names = [f"x{i + 1}" for i in range(n_generators)]
    by_weight: list[list[BasicCommutator]] = [
        [BasicCommutator(1, gen=names[i], gen_index=i) for i in range(n_generators)]
    ]
    for w in range(2, max_weight + 1):
        level = []
        for wa in range(1, w):
            wb = w - wa
            for a in by_weight[wa - 1]:
                for b in by_weight[wb - 1]:
                    if a.key() <= b.key():
                        continue
                    if a.gen is None and a.right.key() > b.key():
                        continue
                    level.append(BasicCommutator(w, left=a, right=b))
        level.sort(key=BasicCommutator.key)
        by_weight.append(level)
    return by_weight


def witt_number(n: int, k: int) -> int:
    """Rank of the weight-k layer of a free group of rank n."""
    total = 0
    for d in range(1, k + 1):
        if k % d == 0:
            total += _mobius(d) * n ** (k // d)
    assert total % k == 0
    return total // k


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


# ---------------------------------------------------------------------------
# Text grammar.
#
#   word := term ('*' term)*
#   term := atom ('^' int)?
#   atom := generator | '(' word ')' | '[' word (',' word)+ ']' | '1'
#
# Commutator brackets are left normed.  Presentation files are lines of
#   gens: a, b, c
#   rel: <word>
# with '#' comments.  Action files add lines 'act: b : a -> <word>'.
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[a-z][a-z0-9_]*)|(?P<int>-?\d+)|(?P<sym>[*^()\[\],]))")


class _Tokens:
    def __init__(self, text: str, line: int = 1, col_offset: int = 0):
        self.text = text
        self.line = line
        self.col_offset = col_offset
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        while self.pos < len(text):
            m = _TOKEN_RE.match(text, self.pos)
            if m is None or m.end() == self.pos:
                stripped = text[self.pos:].lstrip()
                if not stripped:
                    break
                col = col_offset + len(text) - len(stripped) + 1
                raise ParseError(f"unexpected character {stripped[0]!r}", line, col)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), col_offset + m.start(kind) + 1))
            self.pos = m.end()
        self.index = 0

    def peek(self):
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return (None, "", self.col_offset + len(self.text) + 1)

    def next(self):
        tok = self.peek()
        self.index += 1
        return tok

    def expect(self, value: str):
        kind, text, col = self.next()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text!r}" if kind else
                             f"expected {value!r}, found end of input", self.line, col)


def parse_word(text: str, known_gens: Optional[Sequence[str]] = None,
               line: int = 1, col_offset: int = 0) -> Word:
    """Parse a word; round-trips with str().  Raises ParseError with position."""
    toks = _Tokens(text, line, col_offset)
    w = _parse_word(toks, known_gens)
    kind, tok, col = toks.peek()
    if kind is not None:
        raise ParseError(f"trailing input {tok!r}", line, col)
    return w


def _parse_word(toks: _Tokens, known) -> Word:
    w = _parse_term(toks, known)
    while toks.peek()[1] == "*":
        toks.next()
        w = w * _parse_term(toks, known)
    return w


def _parse_term(toks: _Tokens, known) -> Word:
    atom = _parse_atom(toks, known)
    if toks.peek()[1] == "^":
        toks.next()
        kind, text, col = toks.next()
        if kind != "int":
            raise ParseError("exponent must be an integer", toks.line, col)
        return atom ** int(text)
    return atom


def _parse_atom(toks: _Tokens, known) -> Word:
    kind, text, col = toks.next()
    if kind == "name":
        if known is not None and text not in known:
            raise ParseError(f"unknown generator {text!r}", toks.line, col)
        return word(text)
    if kind == "int" and text == "1":
        return Word()
    if text == "(":
        w = _parse_word(toks, known)
        toks.expect(")")
        return w
    if text == "[":
        parts = [_parse_word(toks, known)]
        while toks.peek()[1] == ",":
            toks.next()
            parts.append(_parse_word(toks, known))
        toks.expect("]")
        if len(parts) < 2:
            raise ParseError("commutator needs at least two arguments", toks.line, col)
        return left_normed(*parts)
    if kind is None:
        raise ParseError("unexpected end of input", toks.line, col)
    raise ParseError(f"unexpected token {text!r}", toks.line, col)


def parse_presentation(text: str):
    """Parse a presentation file (gens:/rel: lines); returns a FinitePresentation."""
    from .presentations import FinitePresentation

    gens: list[str] = []
    relators: list[Word] = []
    seen_gens = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gens:"):
            if seen_gens:
                raise ParseError("duplicate gens: line", lineno, 1)
            seen_gens = True
            for name in line[len("gens:"):].split(","):
                name = name.strip()
                if not name:
                    continue
                if not GEN_NAME_RE.match(name):
                    raise ParseError(f"bad generator name {name!r}", lineno, 1)
                gens.append(name)
        elif line.startswith("rel:"):
            if not seen_gens:
                raise ParseError("rel: before gens:", lineno, 1)
            body = line[len("rel:"):].strip()
            relators.append(parse_word(body, known_gens=gens, line=lineno))
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno, 1)
    return FinitePresentation(gens, relators)
