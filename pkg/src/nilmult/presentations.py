"""Finite presentations, product constructors, and normal-generator families.

The semidirect constructor follows the free-presentation recipe for a split
extension: one relator a^-1 * w * [b, a] per generator pair, equivalent to
a^b = w where w is the action image word.  Wreath constructors cover the two
enumerable base varieties: the free base (no commutation relators) and the
abelian base (distinct coordinate copies commute), which is the standard
wreath product.

The infinite normal-generating families attached to these constructions are
truncated here to their generator-pair subfamilies, augmented with the base
relators (and, on the semidirect side, with commutators of the top relators
against base generators); the truncation equality tests in the suite guard
that the augmented families close up to the full relator sets in every
nilpotent truncation we use.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .words import (GEN_NAME_RE, ParseError, Word, commutator, left_normed,
                    parse_word, word)


class NameClashError(ValueError):
    pass


class FinitePresentation:
    """Ordered generators plus freely reduced relator words."""

    __slots__ = ("generators", "relators")

    def __init__(self, generators: Sequence[str], relators: Iterable[Word] = ()):
        gens = tuple(generators)
        seen = set()
        for g in gens:
            if not GEN_NAME_RE.match(g):
                raise ValueError(f"bad generator name {g!r}")
            if g in seen:
                raise NameClashError(f"duplicate generator {g!r}")
            seen.add(g)
        rels = []
        for r in relators:
            if not isinstance(r, Word):
                raise TypeError("relators must be Words")
            for name in r.generators():
                if name not in seen:
                    raise ValueError(f"relator uses undeclared generator {name!r}")
            if r:
                rels.append(r)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    def __setattr__(self, *a):
        raise AttributeError("FinitePresentation is immutable")

    def __eq__(self, other):
        return (isinstance(other, FinitePresentation)
                and self.generators == other.generators
                and self.relators == other.relators)

    def __hash__(self):
        return hash((self.generators, self.relators))

    @classmethod
    def from_text(cls, text: str) -> "FinitePresentation":
        from .words import parse_presentation
        return parse_presentation(text)

    def to_text(self) -> str:
        lines = ["gens: " + ", ".join(self.generators)]
        lines.extend(f"rel: {r}" for r in self.relators)
        return "\n".join(lines) + "\n"

    def with_relators(self, extra: Iterable[Word]) -> "FinitePresentation":
        return FinitePresentation(self.generators, self.relators + tuple(extra))

    def abelianization(self):
        """Invariants of G/[G, G] straight from the relator exponent matrix."""
        from . import linalg
        rows = [[r.exponent_sum(g) for g in self.generators] for r in self.relators]
        return linalg.cokernel_invariants(rows, len(self.generators))

    def __str__(self):
        rels = ", ".join(str(r) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"

    def __repr__(self):
        return f"FinitePresentation({self})"


@dataclass(frozen=True)
class ActionSpec:
    """For each generator b of B, the image word over A's generators of each
    generator a of A under the automorphism attached to b."""

    maps: Tuple[Tuple[str, Tuple[Tuple[str, Word], ...]], ...]

    @classmethod
    def build(cls, mapping: Dict[str, Dict[str, Word]]) -> "ActionSpec":
        return cls(tuple((b, tuple(sorted(images.items())))
                         for b, images in sorted(mapping.items())))

    def image(self, b: str, a: str) -> Word:
        for bb, images in self.maps:
            if bb == b:
                for aa, w in images:
                    if aa == a:
                        return w
        raise KeyError(f"action of {b!r} on {a!r} not specified")

    def b_names(self) -> Tuple[str, ...]:
        return tuple(b for b, _ in self.maps)

    @classmethod
    def trivial(cls, pa: FinitePresentation, pb: FinitePresentation) -> "ActionSpec":
        return cls.build({b: {a: word(a) for a in pa.generators}
                          for b in pb.generators})

    @classmethod
    def inversion(cls, pa: FinitePresentation, pb: FinitePresentation) -> "ActionSpec":
        return cls.build({b: {a: word(a, -1) for a in pa.generators}
                          for b in pb.generators})

    @classmethod
    def power(cls, pa: FinitePresentation, pb: FinitePresentation, k: int) -> "ActionSpec":
        return cls.build({b: {a: word(a, k) for a in pa.generators}
                          for b in pb.generators})

    @classmethod
    def cycle(cls, pa: FinitePresentation, pb: FinitePresentation) -> "ActionSpec":
        """Each B generator cyclically shifts A's generator list."""
        gens = pa.generators
        return cls.build({b: {gens[i]: word(gens[(i + 1) % len(gens)])
                              for i in range(len(gens))}
                          for b in pb.generators})

    def validate_words(self, pa: FinitePresentation, pb: FinitePresentation):
        for b in pb.generators:
            for a in pa.generators:
                w = self.image(b, a)
                for name in w.generators():
                    if name not in pa.generators:
                        raise ValueError(
                            f"action image {w} of {a!r} leaves A's generators")


@dataclass(frozen=True)
class AmbientSubgroupSpec:
    """An ambient presentation K together with words normally generating a
    subgroup T of K."""

    ambient: FinitePresentation
    normal_generators: Tuple[Word, ...]

    def __post_init__(self):
        for w in self.normal_generators:
            for name in w.generators():
                if name not in self.ambient.generators:
                    raise ValueError(f"normal generator {w} uses unknown {name!r}")


def parse_action_file(text: str, pa: FinitePresentation,
                      pb: FinitePresentation) -> ActionSpec:
    """Lines 'act: b : a -> <word over A gens>'; '#' comments."""
    mapping: Dict[str, Dict[str, Word]] = {b: {} for b in pb.generators}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("act:"):
            raise ParseError(f"unrecognized line {line!r}", lineno, 1)
        body = line[len("act:"):]
        try:
            bpart, rest = body.split(":", 1)
            apart, wpart = rest.split("->", 1)
        except ValueError:
            raise ParseError("expected 'act: b : a -> word'", lineno, 1) from None
        b, a = bpart.strip(), apart.strip()
        if b not in pb.generators:
            raise ParseError(f"unknown B generator {b!r}", lineno, 1)
        if a not in pa.generators:
            raise ParseError(f"unknown A generator {a!r}", lineno, 1)
        mapping[b][a] = parse_word(wpart.strip(), known_gens=pa.generators, line=lineno)
    for b in pb.generators:
        for a in pa.generators:
            if a not in mapping[b]:
                raise ParseError(f"action of {b!r} on {a!r} missing", 0, 0)
    spec = ActionSpec.build(mapping)
    spec.validate_words(pa, pb)
    return spec


# ---------------------------------------------------------------------------
# Constructors.
# ---------------------------------------------------------------------------


def _check_disjoint(pa: FinitePresentation, pb: FinitePresentation):
    clash = set(pa.generators) & set(pb.generators)
    if clash:
        raise NameClashError(f"generator names shared by both factors: {sorted(clash)}")


def semidirect_relator(a: str, image_word: Word, b: str) -> Word:
    """a^-1 * w * [b, a]; killing it enforces a^b = w."""
    return word(a, -1) * image_word * commutator(word(b), word(a))


def semidirect_presentation(pa: FinitePresentation, pb: FinitePresentation,
                            action: ActionSpec) -> FinitePresentation:
    """Presentation of the split extension of A (normal) by B acting on it."""
    _check_disjoint(pa, pb)
    action.validate_words(pa, pb)
    rels = list(pa.relators) + list(pb.relators)
    for a in pa.generators:
        for b in pb.generators:
            rels.append(semidirect_relator(a, action.image(b, a), b))
    return FinitePresentation(pa.generators + pb.generators, rels)


def free_product_presentation(pa: FinitePresentation,
                              pb: FinitePresentation) -> FinitePresentation:
    _check_disjoint(pa, pb)
    return FinitePresentation(pa.generators + pb.generators,
                              pa.relators + pb.relators)


def transversal_words(b_model, gen_map: Dict[str, int]) -> Dict[int, Word]:
    """Shortest-lex word over the named generators reaching every element of
    the finite model; deterministic, so constructed presentations are too."""
    names = sorted(gen_map, key=lambda n: list(gen_map).index(n))
    reach: Dict[int, Word] = {b_model.identity: Word()}
    frontier = [b_model.identity]
    while frontier:
        new_frontier = []
        for x in frontier:
            for n in names:
                y = b_model.mult(x, gen_map[n])
                if y not in reach:
                    reach[y] = reach[x] * word(n)
                    new_frontier.append(y)
        frontier = new_frontier
    if len(reach) != b_model.order:
        raise ValueError("transversal incomplete: generators do not generate B")
    return reach


def standard_wreath_presentation(pa: FinitePresentation, pb: FinitePresentation,
                                 b_model, gen_map: Optional[Dict[str, int]] = None
                                 ) -> FinitePresentation:
    """Presentation of A wr B over gens(A) + gens(B), B given as a finite model.

    Relators: both factors' relators plus [x, y^w_b] for all generator pairs
    x, y of A and all nontrivial b, i.e. distinct coordinate copies of A in
    the direct-product base commute.
    """
    _check_disjoint(pa, pb)
    if gen_map is None:
        gen_map = {n: b_model.generators[n] for n in pb.generators}
    for rel in pb.relators:
        if not _model_satisfies(b_model, gen_map, rel):
            raise ValueError(f"finite model of B violates relator {rel}")
    trans = transversal_words(b_model, gen_map)
    rels = list(pa.relators) + list(pb.relators)
    for belem, wb in sorted(trans.items()):
        if belem == b_model.identity:
            continue
        for x in pa.generators:
            for y in pa.generators:
                rels.append(commutator(word(x), word(y).conjugate(wb)))
    return FinitePresentation(pa.generators + pb.generators, rels)


def _model_satisfies(model, gen_map: Dict[str, int], rel: Word) -> bool:
    out = model.identity
    for name, exp in rel.syllables():
        out = model.mult(out, model.power(gen_map[name], exp))
    return out == model.identity


# ---------------------------------------------------------------------------
# Normal-generator families.
# ---------------------------------------------------------------------------


def family_S(pa: FinitePresentation, pb: FinitePresentation,
             action: ActionSpec) -> Tuple[Word, ...]:
    """Normal generators (in the free product of both free groups) for the
    subgroup forcing the action relations: generator-pair action words,
    augmented by A's relators and by commutators of B's relators with A's
    generators."""
    out = [semidirect_relator(a, action.image(b, a), b)
           for a in pa.generators for b in pb.generators]
    out.extend(pa.relators)
    out.extend(commutator(r2, word(x)) for r2 in pb.relators for x in pa.generators)
    return tuple(w for w in out if w)


def family_T(pa: FinitePresentation, pb: FinitePresentation,
             action: ActionSpec) -> Tuple[Word, ...]:
    """Like family_S but in the ambient F_A * B, where B's relators already
    hold; the augmentation keeps A's relators."""
    out = [semidirect_relator(a, action.image(b, a), b)
           for a in pa.generators for b in pb.generators]
    out.extend(pa.relators)
    return tuple(w for w in out if w)


def family_U(pa: FinitePresentation, pb: FinitePresentation,
             action: ActionSpec) -> Tuple[Word, ...]:
    """Action words in the ambient free product A * B (both factors' relators
    hold there); same word family as family_T."""
    return family_T(pa, pb, action)


def family_TV(pa: FinitePresentation, variety: str = "trivial",
              pb: Optional[FinitePresentation] = None, b_model=None,
              gen_map: Optional[Dict[str, int]] = None) -> Tuple[Word, ...]:
    """Normal generators of the wreath-base subgroup in F_A * B.

    For the free base this is just A's relators; for the abelian base
    (standard wreath product) the coordinate-commutation words are added.
    Other base varieties have no finite enumeration and are rejected.
    """
    if variety == "trivial":
        return tuple(pa.relators)
    if variety == "abelian":
        if pb is None or b_model is None:
            raise ValueError("abelian base needs B's presentation and model")
        if gen_map is None:
            gen_map = {n: b_model.generators[n] for n in pb.generators}
        trans = transversal_words(b_model, gen_map)
        out = list(pa.relators)
        for belem, wb in sorted(trans.items()):
            if belem == b_model.identity:
                continue
            for x in pa.generators:
                for y in pa.generators:
                    out.append(commutator(word(x), word(y).conjugate(wb)))
        return tuple(w for w in out if w)
    raise ValueError(f"unsupported base variety {variety!r}")


def family_Dc(pa: FinitePresentation, b_gen_names: Sequence[str], c: int
              ) -> Tuple[Word, ...]:
    """All left-normed [r, g_1, ..., g_c] with r a relator of A and the g_i
    drawn from both generator sets, at least one from B's."""
    if c < 1:
        raise ValueError("c must be >= 1")
    pool = list(pa.generators) + list(b_gen_names)
    bset = set(b_gen_names)
    out = []
    for r in pa.relators:
        for tup in itertools.product(pool, repeat=c):
            if not any(t in bset for t in tup):
                continue
            w = left_normed(r, *(word(t) for t in tup))
            if w:
                out.append(w)
    return tuple(out)


def mixed_commutator_family(relators: Sequence[Word], gens_a: Sequence[str],
                            gens_b: Sequence[str], c: int,
                            require_from: Sequence[str]) -> Tuple[Word, ...]:
    """Left-normed [r, g_1..g_c] over both generator sets with at least one
    g_i in require_from; the generator-level slice of the mixed commutator
    products appearing in the decomposition identities."""
    pool = list(gens_a) + list(gens_b)
    need = set(require_from)
    out = []
    for r in relators:
        for tup in itertools.product(pool, repeat=c):
            if not any(t in need for t in tup):
                continue
            w = left_normed(r, *(word(t) for t in tup))
            if w:
                out.append(w)
    return tuple(out)


def commutator_tuple_family(relators: Sequence[Word], gens: Sequence[str],
                            c: int) -> Tuple[Word, ...]:
    """All left-normed [r, x_1, ..., x_c] with x_i ranging over gens."""
    out = []
    for r in relators:
        for tup in itertools.product(gens, repeat=c):
            w = left_normed(r, *(word(t) for t in tup))
            if w:
                out.append(w)
    return tuple(out)


def ambient_for_T(pa: FinitePresentation, pb: FinitePresentation) -> FinitePresentation:
    """K = F_A * B: both generator sets, only B's relators."""
    _check_disjoint(pa, pb)
    return FinitePresentation(pa.generators + pb.generators, pb.relators)


def ambient_for_U(pa: FinitePresentation, pb: FinitePresentation) -> FinitePresentation:
    """D = A * B: the free product of the two presented groups."""
    return free_product_presentation(pa, pb)


def cyclic_presentation(n: int, name: str = "a") -> FinitePresentation:
    if n < 1:
        raise ValueError("order must be >= 1")
    if n == 1:
        return FinitePresentation((), ())
    return FinitePresentation([name], [word(name, n)])


def abelian_presentation(invariants: Sequence[int], prefix: str = "a") -> FinitePresentation:
    names = [f"{prefix}{i+1}" for i in range(len(invariants))]
    rels = [word(n, d) for n, d in zip(names, invariants) if d]
    rels.extend(commutator(word(x), word(y))
                for i, x in enumerate(names) for y in names[i + 1:])
    return FinitePresentation(names, rels)
