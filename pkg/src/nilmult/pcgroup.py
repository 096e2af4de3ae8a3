"""Subgroups of a fixed consistent pc presentation.

Subgroups are stored as canonical induced generating sequences: echelonized by
leading generator index, leading exponents positive and dividing the ambient
relative order, entries fully reduced above later pivots.  Closure adds sifted
powers and sifted conjugates by a conjugating set until stable; for a
generating set X the subgroup <X> is obtained by conjugating with X itself,
and normal closures conjugate with the ambient generators.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from . import linalg
from .linalg import AbelianInvariants, xgcd
from .nq import PcElement, PcPresentation
from .words import Word

Vector = List[int]


# ---------------------------------------------------------------------------
# Contexts: the echelon code runs over a plain pc presentation, over residues
# modulo a normal subgroup, and over pairs of both (for kernels).
# ---------------------------------------------------------------------------


class _PcContext:
    def __init__(self, pres: PcPresentation):
        self.pres = pres
        self.n = pres.m

    def identity(self) -> Vector:
        return [0] * self.n

    def mul(self, a: Vector, b: Vector) -> Vector:
        return self.pres._mul(a[:], b)

    def inv(self, a: Vector) -> Vector:
        return self.pres._inv(a)

    def pow(self, a: Vector, k: int) -> Vector:
        return self.pres._pow(a, k)

    def order_at(self, i: int) -> int:
        return self.pres.orders[i]


class _QuotientContext:
    """Cosets modulo a normal subgroup, represented by sifted residues."""

    def __init__(self, pres: PcPresentation, nsub: "PcSubgroup"):
        self.pres = pres
        self.n = pres.m
        self.nsub = nsub
        self._pivots = {e.lead(): e for e in nsub.igs}
        self._orders = []
        for i in range(pres.m):
            piv = self._pivots.get(i)
            self._orders.append(piv.vector[i] if piv is not None else pres.orders[i])

    def reduce(self, v: Vector) -> Vector:
        for i in range(self.n):
            if v[i]:
                piv = self._pivots.get(i)
                if piv is not None:
                    q = v[i] // piv.vector[i]
                    if q:
                        v = self.pres._mul(self.pres._pow(list(piv.vector), -q), v)
        return v

    def identity(self) -> Vector:
        return [0] * self.n

    def mul(self, a: Vector, b: Vector) -> Vector:
        return self.reduce(self.pres._mul(a[:], b))

    def inv(self, a: Vector) -> Vector:
        return self.reduce(self.pres._inv(a))

    def pow(self, a: Vector, k: int) -> Vector:
        return self.reduce(self.pres._pow(a, k))

    def order_at(self, i: int) -> int:
        return self._orders[i]


class _PairContext:
    """Pairs (x mod N, x) with the residue part taking echelon priority."""

    def __init__(self, quo: _QuotientContext, pc: _PcContext):
        self.quo = quo
        self.pc = pc
        self.n = quo.n + pc.n

    def identity(self) -> Vector:
        return [0] * self.n

    def _split(self, v: Vector):
        return v[: self.quo.n], v[self.quo.n:]

    def mul(self, a: Vector, b: Vector) -> Vector:
        ra, xa = self._split(a)
        rb, xb = self._split(b)
        return self.quo.mul(ra, rb) + self.pc.mul(xa, xb)

    def inv(self, a: Vector) -> Vector:
        ra, xa = self._split(a)
        return self.quo.inv(ra) + self.pc.inv(xa)

    def pow(self, a: Vector, k: int) -> Vector:
        ra, xa = self._split(a)
        return self.quo.pow(ra, k) + self.pc.pow(xa, k)

    def order_at(self, i: int) -> int:
        if i < self.quo.n:
            return self.quo.order_at(i)
        return self.pc.order_at(i - self.quo.n)


def _lead(v: Sequence[int]) -> Optional[int]:
    for i, e in enumerate(v):
        if e:
            return i
    return None


class _Echelon:
    def __init__(self, ctx):
        self.ctx = ctx
        self.table: dict[int, Vector] = {}
        self.queue: List[Vector] = []

    def push(self, v: Vector):
        self.queue.append(v)

    def close(self, conjugators: Sequence[Vector]):
        while self.queue:
            v = self.queue.pop()
            inserted = self._sift_insert(v)
            for w in inserted:
                oi = self.ctx.order_at(_lead(w))
                if oi:
                    m = oi // gcd(oi, w[_lead(w)])
                    self.push(self.ctx.pow(w, m))
                for c in conjugators:
                    self.push(self.ctx.mul(self.ctx.inv(c), self.ctx.mul(w, c)))

    def _sift_insert(self, v: Vector) -> List[Vector]:
        """Sift v into the echelon; returns entries that are new or replaced.

        Invariant: a pivot's leading exponent divides the relative order at
        its level, so membership sifting is a plain divisibility test.
        """
        inserted: List[Vector] = []
        while True:
            lead = _lead(v)
            if lead is None:
                return inserted
            o = self.ctx.order_at(lead)
            e = v[lead]
            if o == 0 and e < 0:
                v = self.ctx.inv(v)
                e = v[lead]
            h = self.table.get(lead)
            if h is None:
                if o and o % e != 0:
                    # normalize the pivot to gcd(e, o); the remainder of v
                    # re-enters the sift below
                    g, x, _ = xgcd(e, o)
                    new = self.ctx.pow(v, x)
                    assert new[lead] == g
                    self.table[lead] = new
                    inserted.append(new)
                    self.push(v)
                    return inserted
                self.table[lead] = v
                inserted.append(v)
                return inserted
            f = h[lead]
            reducible = (e % gcd(f, o) == 0) if o else (e % f == 0)
            if reducible:
                q = self._solve_mod(f, e, o) if o else e // f
                v = self.ctx.mul(self.ctx.pow(h, -q), v)
                continue
            if o:
                g0, x0, y0 = xgcd(f, e)
                g, a, _ = xgcd(g0, o)
                x, y = a * x0, a * y0
            else:
                g, x, y = xgcd(f, e)
            new = self.ctx.mul(self.ctx.pow(h, x), self.ctx.pow(v, y))
            assert new[lead] == g
            self.table[lead] = new
            inserted.append(new)
            self.push(h)
            q = self._solve_mod(g, e, o) if o else e // g
            v = self.ctx.mul(self.ctx.pow(new, -q), v)

    @staticmethod
    def _solve_mod(f: int, e: int, o: int) -> int:
        """t with t*f == e (mod o); caller guarantees gcd(f, o) | e."""
        g, x, _ = xgcd(f, o)
        assert e % g == 0
        return (e // g) * x % (o // g) if o // g != 1 else (e // g) * x

    def sift(self, v: Vector) -> Vector:
        """Reduce v without inserting; identity result means membership."""
        while True:
            lead = _lead(v)
            if lead is None:
                return v
            h = self.table.get(lead)
            if h is None:
                return v
            o = self.ctx.order_at(lead)
            f, e = h[lead], v[lead]
            g = gcd(f, o) if o else f
            if e % g != 0:
                return v
            q = self._solve_mod(f, e, o) if o else e // f
            w = self.ctx.mul(self.ctx.pow(h, -q), v)
            if _lead(w) == lead:
                return w
            v = w

    def canonical(self) -> List[Vector]:
        leads = sorted(self.table)
        rows = [self.table[c] for c in leads]
        for idx in range(len(rows)):
            for jdx in range(idx + 1, len(rows)):
                cj = leads[jdx]
                d = rows[jdx][cj]
                a = rows[idx][cj]
                o = self.ctx.order_at(cj)
                if o:
                    a %= o
                q = a // d
                if q:
                    rows[idx] = self.ctx.mul(rows[idx], self.ctx.pow(rows[jdx], -q))
        return rows


# ---------------------------------------------------------------------------
# PcSubgroup.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PcSubgroup:
    """Canonical induced generating sequence inside an ambient presentation."""

    pres: PcPresentation
    igs: Tuple[PcElement, ...]

    def __eq__(self, other) -> bool:
        return (isinstance(other, PcSubgroup) and self.pres is other.pres
                and [e.vector for e in self.igs] == [e.vector for e in other.igs])

    def __hash__(self):
        return hash(tuple(e.vector for e in self.igs))

    @property
    def is_trivial(self) -> bool:
        return not self.igs

    def order(self) -> Optional[int]:
        out = 1
        for e in self.igs:
            lead = e.lead()
            o = self.pres.orders[lead]
            if o == 0:
                return None
            out *= o // gcd(o, e.vector[lead])
        return out

    def contains(self, el: PcElement) -> bool:
        ech = self._echelon()
        return _lead(ech.sift(list(el.vector))) is None

    def contains_subgroup(self, other: "PcSubgroup") -> bool:
        return all(self.contains(e) for e in other.igs)

    def is_abelian(self) -> bool:
        for a in self.igs:
            for b in self.igs:
                if not a.commutator(b).is_identity:
                    return False
        return True

    def random_element(self, rng: random.Random) -> PcElement:
        out = self.pres.identity()
        for e in self.igs:
            lead = e.lead()
            o = self.pres.orders[lead]
            bound = (o // gcd(o, e.vector[lead])) if o else 5
            out = out * e ** rng.randrange(-bound, bound + 1)
        return out

    def elements(self, limit: int = 10000) -> List[PcElement]:
        n = self.order()
        if n is None or n > limit:
            raise ValueError("subgroup too large to enumerate")
        out = [self.pres.identity()]
        for e in reversed(self.igs):
            lead = e.lead()
            o = self.pres.orders[lead]
            m = o // gcd(o, e.vector[lead])
            out = [e ** k * x for k in range(m) for x in out]
        return out

    def _echelon(self) -> _Echelon:
        ech = _Echelon(_PcContext(self.pres))
        for e in self.igs:
            ech.table[e.lead()] = list(e.vector)
        return ech

    def __str__(self):
        body = ", ".join(str(e) for e in self.igs)
        return f"<{body}>" if body else "<1>"


def _as_vectors(pres: PcPresentation, gens: Iterable) -> List[Vector]:
    out = []
    for g in gens:
        if isinstance(g, PcElement):
            out.append(list(g.vector))
        elif isinstance(g, Word):
            out.append(list(pres.collect(g).vector))
        else:
            out.append(list(g))
    return out


def _closure(pres: PcPresentation, gens: List[Vector],
             conjugators: List[Vector]) -> PcSubgroup:
    ech = _Echelon(_PcContext(pres))
    for v in gens:
        ech.push(v)
    ech.close(conjugators)
    rows = ech.canonical()
    return PcSubgroup(pres, tuple(PcElement(pres, tuple(r)) for r in rows))


def subgroup(pres: PcPresentation, gens: Iterable) -> PcSubgroup:
    vecs = _as_vectors(pres, gens)
    return _closure(pres, vecs, vecs)


def normal_closure(pres: PcPresentation, gens: Iterable,
                   conjugators: Optional[Iterable] = None) -> PcSubgroup:
    """Smallest subgroup containing gens closed under the conjugating set
    (ambient generators by default, giving the full normal closure)."""
    vecs = _as_vectors(pres, gens)
    if conjugators is None:
        conj = [pres._unit(i) for i in range(pres.m)]
    else:
        conj = _as_vectors(pres, conjugators)
    return _closure(pres, vecs, conj + vecs)


def trivial_subgroup(pres: PcPresentation) -> PcSubgroup:
    return PcSubgroup(pres, ())


def whole_group(pres: PcPresentation) -> PcSubgroup:
    return PcSubgroup(pres, tuple(pres.generator(i) for i in range(pres.m)))


def product_join(*subs: PcSubgroup) -> PcSubgroup:
    if not subs:
        raise ValueError("need at least one subgroup")
    pres = subs[0].pres
    gens: List[Vector] = []
    for s in subs:
        if s.pres is not pres:
            raise ValueError("subgroups of different ambients")
        gens.extend(list(e.vector) for e in s.igs)
    return _closure(pres, gens, gens)


def commutator_subgroup(h: PcSubgroup, k: PcSubgroup,
                        conjugators: Optional[Iterable] = None) -> PcSubgroup:
    """[H, K], closed under conjugation by H and K (or a supplied set)."""
    if h.pres is not k.pres:
        raise ValueError("subgroups of different ambients")
    pres = h.pres
    gens = [list(a.commutator(b).vector) for a in h.igs for b in k.igs]
    gens = [g for g in gens if any(g)]
    if conjugators is None:
        conj = [list(e.vector) for e in h.igs] + [list(e.vector) for e in k.igs]
    else:
        conj = _as_vectors(pres, conjugators)
    return _closure(pres, gens, conj)


def iterated_commutator(h: PcSubgroup, c: int) -> PcSubgroup:
    """[H, G, G, ..., G] with c copies of the whole ambient group."""
    if c < 0:
        raise ValueError("c must be >= 0")
    pres = h.pres
    allgens = [pres._unit(i) for i in range(pres.m)]
    out = h
    for _ in range(c):
        out = commutator_subgroup(out, whole_group(pres), conjugators=allgens)
    return out


def lower_central_subgroup(pres: PcPresentation, i: int) -> PcSubgroup:
    if i < 1:
        raise ValueError("lower central index starts at 1")
    return iterated_commutator(whole_group(pres), i - 1)


def weight_suffix_subgroup(pres: PcPresentation, w: int) -> PcSubgroup:
    """Subgroup generated by all pc generators of weight >= w."""
    start = pres.first_index_of_weight(w)
    return PcSubgroup(pres, tuple(pres.generator(i) for i in range(start, pres.m)))


def is_normal(pres: PcPresentation, s: PcSubgroup) -> bool:
    ech = s._echelon()
    for e in s.igs:
        for i in range(pres.m):
            conj = pres._mul(pres._mul(pres._inv(pres._unit(i)), list(e.vector)),
                             pres._unit(i))
            if _lead(ech.sift(conj)) is not None:
                return False
    return True


def intersect_with_normal(s: PcSubgroup, n: PcSubgroup) -> PcSubgroup:
    """S intersected with a normal subgroup N.

    When N is a suffix of the weighted generator sequence the intersection is
    read off the echelon directly; otherwise it is the kernel of S mapping
    into the quotient modulo N, computed by an echelon over (residue, element)
    pairs with residues taking priority.
    """
    pres = s.pres
    if pres is not n.pres:
        raise ValueError("subgroups of different ambients")
    suffix_start = _suffix_start(pres, n)
    if suffix_start is not None:
        kept = tuple(e for e in s.igs if e.lead() >= suffix_start)
        return PcSubgroup(pres, kept)
    if not is_normal(pres, n):
        raise ValueError("second argument must be normal")
    quo = _QuotientContext(pres, n)
    pair = _PairContext(quo, _PcContext(pres))
    gens = [quo.reduce(list(e.vector)) + list(e.vector) for e in s.igs]
    ech = _Echelon(pair)
    for v in gens:
        ech.push(v)
    ech.close(gens)
    carriers = [row[pres.m:] for lead, row in sorted(ech.table.items())
                if lead >= pres.m]
    return _closure(pres, carriers, carriers)


def _suffix_start(pres: PcPresentation, n: PcSubgroup) -> Optional[int]:
    """Index i0 when n is exactly <g_i : i >= i0>, else None."""
    if n.is_trivial:
        return pres.m
    leads = [e.lead() for e in n.igs]
    i0 = leads[0]
    if leads != list(range(i0, pres.m)):
        return None
    for e in n.igs:
        vec = list(e.vector)
        if vec[e.lead()] != 1:
            return None
        if any(vec[: e.lead()]) :
            return None
    return i0


def sift_coordinates(s: PcSubgroup, el: PcElement) -> Optional[List[int]]:
    """Coefficients c with el = igs[0]^c0 * igs[1]^c1 * ...; None if outside."""
    pres = s.pres
    coords = [0] * len(s.igs)
    by_lead = {e.lead(): (idx, e) for idx, e in enumerate(s.igs)}
    v = list(el.vector)
    while True:
        lead = _lead(v)
        if lead is None:
            return coords
        hit = by_lead.get(lead)
        if hit is None:
            return None
        idx, h = hit
        o = pres.orders[lead]
        f, e = h.vector[lead], v[lead]
        g = gcd(f, o) if o else f
        if e % g != 0:
            return None
        q = _Echelon._solve_mod(f, e, o) if o else e // f
        coords[idx] += q
        v = pres._mul(pres._pow(list(h.vector), -q), v)


def quotient_invariants(h: PcSubgroup, n: PcSubgroup) -> AbelianInvariants:
    """Invariants of H/N for N <= H with [H, H] <= N (verified)."""
    pres = h.pres
    if n.pres is not pres:
        raise ValueError("subgroups of different ambients")
    if not h.contains_subgroup(n):
        raise ValueError("N is not contained in H")
    rows: List[List[int]] = []
    s = len(h.igs)
    for a in h.igs:
        for b in h.igs:
            comm = a.commutator(b)
            if comm.is_identity:
                continue
            coords = sift_coordinates(h, comm)
            if coords is None or not n.contains(comm):
                raise ValueError("quotient is not abelian")
            rows.append(coords)
    for idx, e in enumerate(h.igs):
        lead = e.lead()
        o = pres.orders[lead]
        if o == 0:
            continue
        m = o // gcd(o, e.vector[lead])
        coords = sift_coordinates(h, e ** m)
        assert coords is not None
        row = [-c for c in coords]
        row[idx] += m
        rows.append(row)
    for e in n.igs:
        coords = sift_coordinates(h, e)
        assert coords is not None
        rows.append(coords)
    return linalg.cokernel_invariants(rows, s)


def abelian_invariants_of(s: PcSubgroup) -> AbelianInvariants:
    """Invariants of an abelian subgroup (raises if it is not abelian)."""
    return quotient_invariants(s, trivial_subgroup(s.pres))
