"""Class-by-class nilpotent quotient engine.

Given a finite presentation, computes consistent weighted polycyclic
presentations of the quotients G/gamma_{j+1}(G): extend the current quotient by
central tail generators on every non-defining relation (and non-defining
epimorphism image), derive integer linear equations from consistency overlaps
and relator images, solve by Hermite normal form, and eliminate.

Normal forms are exponent vectors g1^e1 ... gm^em with 0 <= e_i < o_i for
finite relative orders o_i; o_i = 0 marks an infinite generator.  Collection is
from the left: multiplying by a generator conjugates the trailing segment, with
conjugation by inverses resolved by a fixed-point iteration that terminates
inside the nilpotency class.
"""
from __future__ import annotations

import itertools
import random
import sys
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .words import Word

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

Vector = List[int]


class InconsistentPresentation(AssertionError):
    pass


class NotNilpotentWithinCap(Exception):
    """Raised when a computation requires nilpotency that was not certified."""

    def __init__(self, cap: int, detail: str = ""):
        super().__init__(f"no nilpotency certificate within class cap {cap}"
                         + (f": {detail}" if detail else ""))
        self.cap = cap


@dataclass(frozen=True)
class PcElement:
    """Normal form element of a PcPresentation: an exponent vector."""

    group: "PcPresentation"
    vector: Tuple[int, ...]

    def __mul__(self, other: "PcElement") -> "PcElement":
        self._same(other)
        return PcElement(self.group, tuple(self.group._mul(list(self.vector), list(other.vector))))

    def inverse(self) -> "PcElement":
        return PcElement(self.group, tuple(self.group._inv(list(self.vector))))

    def __pow__(self, n: int) -> "PcElement":
        return PcElement(self.group, tuple(self.group._pow(list(self.vector), n)))

    def conjugate(self, by: "PcElement") -> "PcElement":
        return by.inverse() * self * by

    def commutator(self, other: "PcElement") -> "PcElement":
        return self.inverse() * other.inverse() * self * other

    @property
    def is_identity(self) -> bool:
        return not any(self.vector)

    def lead(self) -> Optional[int]:
        for i, e in enumerate(self.vector):
            if e:
                return i
        return None

    def _same(self, other: "PcElement"):
        if self.group is not other.group:
            raise ValueError("elements of different pc presentations")

    def __str__(self) -> str:
        if self.is_identity:
            return "1"
        names = self.group.names
        return "*".join(f"{names[i]}" + (f"^{e}" if e != 1 else "")
                        for i, e in enumerate(self.vector) if e)

    def __repr__(self):
        return f"PcElement({self})"


class PcPresentation:
    """Consistent weighted polycyclic presentation.

    weights are nondecreasing; orders[i] is the relative order of g_i (0 for
    infinite); power_tails[i] is the normal word equal to g_i^orders[i];
    conj_tails[(j, i)] (j > i) is the normal word of [g_j, g_i], absent when
    the two generators commute.  definitions[i] records how g_i arose:
    ('image', t) for the image of source generator t, ('comm', j, i) for a
    commutator, ('power', i) for a power tail.  gen_images carries the
    epimorphism from the source presentation.
    """

    def __init__(self, weights: Sequence[int], orders: Sequence[int],
                 power_tails: Dict[int, Sequence[int]],
                 conj_tails: Dict[Tuple[int, int], Sequence[int]],
                 *, definitions: Optional[List] = None,
                 gen_images: Optional[List[Sequence[int]]] = None,
                 source=None, nilpotency_class: Optional[int] = None,
                 names: Optional[Sequence[str]] = None,
                 validate: bool = True):
        self.weights = list(weights)
        self.orders = list(orders)
        self.m = len(self.weights)
        self.power_tails = {i: list(v) for i, v in power_tails.items() if any(v)}
        self.conj_tails = {k: list(v) for k, v in conj_tails.items() if any(v)}
        self.definitions = list(definitions) if definitions is not None else [None] * self.m
        self.gen_images = [list(v) for v in gen_images] if gen_images is not None else None
        self.source = source
        self.nilpotency_class = nilpotency_class if nilpotency_class is not None else \
            (max(self.weights) if self.weights else 1)
        self.names = list(names) if names is not None else [f"g{i+1}" for i in range(self.m)]
        self._conj_cache: Dict[Tuple[int, int, int], Vector] = {}
        self._conjpow_cache: Dict[Tuple[int, int, int, int], Vector] = {}
        self._powtail_cache: Dict[Tuple[int, int], Vector] = {}
        if validate:
            self._validate()

    # -- basic structure ----------------------------------------------------

    def _validate(self):
        if any(b < a for a, b in zip(self.weights, self.weights[1:])):
            raise ValueError("weights must be nondecreasing")
        for i, o in enumerate(self.orders):
            if o < 0 or o == 1:
                raise ValueError(f"bad relative order {o} at generator {i}")
        for i, tail in self.power_tails.items():
            if self.orders[i] == 0:
                raise ValueError("power tail on infinite generator")
            if any(tail[: i + 1]):
                raise ValueError("power tail must involve later generators only")
        for (j, i), tail in self.conj_tails.items():
            if not (0 <= i < j < self.m):
                raise ValueError("conjugation relation indices out of order")
            wsum = self.weights[i] + self.weights[j]
            for t, e in enumerate(tail):
                if e and self.weights[t] < wsum:
                    raise ValueError("commutator tail below its weight")

    def identity(self) -> PcElement:
        return PcElement(self, (0,) * self.m)

    def generator(self, i: int) -> PcElement:
        return self.element_from_vector(self._unit(i))

    def element_from_vector(self, vec: Sequence[int]) -> PcElement:
        v = list(vec)
        for i in range(self.m):
            o = self.orders[i]
            if o and not 0 <= v[i] < o:
                return PcElement(self, tuple(self._mul([0] * self.m, v)))
        return PcElement(self, tuple(v))

    def _unit(self, i: int, e: int = 1) -> Vector:
        v = [0] * self.m
        v[i] = e
        return v

    def quotient_order(self) -> Optional[int]:
        out = 1
        for o in self.orders:
            if o == 0:
                return None
            out *= o
        return out

    def ranks_by_weight(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for w in self.weights:
            out[w] = out.get(w, 0) + 1
        return out

    def orders_by_weight(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for w, o in zip(self.weights, self.orders):
            out.setdefault(w, []).append(o)
        return out

    def first_index_of_weight(self, w: int) -> int:
        """First generator index of weight >= w (m when none)."""
        for i, wi in enumerate(self.weights):
            if wi >= w:
                return i
        return self.m

    def name_index(self) -> Dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    # -- collection ---------------------------------------------------------

    def _mul(self, u: Vector, v: Vector) -> Vector:
        out = u
        for i, e in enumerate(v):
            if e:
                out = self._mul_genpow(out, i, e)
        return out

    def _mul_genpow(self, u: Vector, i: int, e: int) -> Vector:
        if e == 0:
            return u
        tail = None
        for j in range(self.m - 1, i, -1):
            if u[j]:
                tail = [0] * self.m
                for t in range(i + 1, self.m):
                    tail[t] = u[t]
                break
        if tail is None:
            v = u[:]
            v[i] += e
            return self._normalize_at(v, i)
        head = [0] * self.m
        for t in range(i + 1):
            head[t] = u[t]
        conj = self._conj_vector(tail, i, e)
        head[i] += e
        left = self._normalize_at(head, i)
        return self._mul(left, conj)

    def _normalize_at(self, v: Vector, i: int) -> Vector:
        o = self.orders[i]
        if o == 0 or 0 <= v[i] < o:
            return v
        q, r = divmod(v[i], o)
        v[i] = r
        if q == 0:
            return v
        suffix = None
        for j in range(i + 1, self.m):
            if v[j]:
                suffix = [0] * self.m
                for t in range(i + 1, self.m):
                    suffix[t] = v[t]
                    v[t] = 0
                break
        if i in self.power_tails:
            v = self._mul(v, self._power_tail_pow(i, q))
        if suffix is not None:
            v = self._mul(v, suffix)
        return v

    def _power_tail_pow(self, i: int, q: int) -> Vector:
        key = (i, q)
        hit = self._powtail_cache.get(key)
        if hit is None:
            hit = self._pow(self.power_tails[i], q)
            self._powtail_cache[key] = hit
        return hit

    def _pow(self, v: Vector, n: int) -> Vector:
        if n == 0:
            return [0] * self.m
        base = v[:] if n > 0 else self._inv(v)
        n = abs(n)
        result = None
        while True:
            if n & 1:
                result = base[:] if result is None else self._mul(result, base)
            n >>= 1
            if not n:
                return result
            base = self._mul(base[:], base)

    def _inv(self, u: Vector) -> Vector:
        out = [0] * self.m
        for i in range(self.m - 1, -1, -1):
            if u[i]:
                out = self._mul_genpow(out, i, -u[i])
        return out

    def _conj_vector(self, t: Vector, i: int, e: int) -> Vector:
        step = 1 if e > 0 else -1
        for _ in range(abs(e)):
            t = self._conj_once(t, i, step)
        return t

    def _conj_once(self, t: Vector, i: int, sign: int) -> Vector:
        # conjugation is an automorphism: conjugate generator by generator
        out = None
        for j in range(i + 1, self.m):
            if t[j]:
                piece = self._conj_gen_pow(j, i, sign, t[j])
                out = piece[:] if out is None else self._mul(out, piece)
        return out if out is not None else [0] * self.m

    def _conj_gen_pow(self, j: int, i: int, sign: int, e: int) -> Vector:
        key = (j, i, sign, e)
        hit = self._conjpow_cache.get(key)
        if hit is None:
            hit = self._pow(self._conj_gen(j, i, sign), e)
            self._conjpow_cache[key] = hit
        return hit

    def _conj_gen(self, j: int, i: int, sign: int) -> Vector:
        key = (j, i, sign)
        cached = self._conj_cache.get(key)
        if cached is not None:
            return cached
        if sign > 0:
            cached = self._unit(j)
            tail = self.conj_tails.get((j, i))
            if tail is not None:
                cached = self._mul(cached, tail[:])
        else:
            # conjugating the stored relation g_j^{g_i} = g_j * w by g_i^-1
            # gives g_j^{g_i^-1} = g_j * (w^{g_i^-1})^-1; w involves strictly
            # higher generators, so the recursion climbs and terminates, and
            # every step is a plain relation application, valid even in the
            # tentative presentations built during extension steps
            tail = self.conj_tails.get((j, i))
            if tail is None:
                cached = self._unit(j)
            else:
                wconj = self._conj_once(tail[:], i, -1)
                cached = self._mul(self._unit(j), self._inv(wconj))
        self._conj_cache[key] = cached
        return cached

    # -- words and the epimorphism -------------------------------------------

    def collect(self, w: Word) -> PcElement:
        """Collect a word over the pc generator names into normal form."""
        index = self.name_index()
        out = [0] * self.m
        for name, exp in w.syllables():
            if name not in index:
                raise ValueError(f"unknown pc generator {name!r}")
            out = self._mul_genpow(out, index[name], exp)
        return PcElement(self, tuple(out))

    def image_of(self, w: Word) -> PcElement:
        """Image of a word over the source presentation's generators."""
        if self.gen_images is None or self.source is None:
            raise ValueError("presentation carries no epimorphism data")
        index = {n: i for i, n in enumerate(self.source.generators)}
        out = [0] * self.m
        for name, exp in w.syllables():
            out = self._mul(out, self._pow(self.gen_images[index[name]], exp))
        return PcElement(self, tuple(out))

    # -- consistency ---------------------------------------------------------

    def check_consistency(self, mode: str = "weighted",
                          sample: int = 200, seed: int = 0) -> List[str]:
        """Run overlap tests; returns a list of violation descriptions.

        'weighted' checks every overlap whose total weight can interact below
        the class bound (complete for weighted presentations), 'full' checks
        all of them, 'sampled' adds a random sample of the skipped ones.
        """
        cl = self.nilpotency_class
        failures: List[str] = []
        gv = self._unit

        def eat(desc, a, b):
            if a != b:
                failures.append(desc)

        triples = []
        skipped = []
        for k in range(self.m):
            for j in range(k):
                for i in range(j):
                    total = self.weights[i] + self.weights[j] + self.weights[k]
                    if mode == "full" or total <= cl + 1:
                        triples.append((k, j, i))
                    else:
                        skipped.append((k, j, i))
        if mode == "sampled" and skipped:
            rng = random.Random(seed)
            triples.extend(rng.sample(skipped, min(sample, len(skipped))))
        for k, j, i in triples:
            lhs = self._mul(gv(k), self._mul(gv(j), gv(i)))
            rhs = self._mul(self._mul(gv(k), gv(j)), gv(i))
            eat(f"associativity overlap g{k+1}(g{j+1} g{i+1})", lhs, rhs)

        for j in range(self.m):
            for i in range(j):
                oi, oj = self.orders[i], self.orders[j]
                if mode != "full" and self.weights[i] + self.weights[j] > cl + 1:
                    continue
                if oj:
                    lhs = self._mul(self._power_word(j), gv(i))
                    rhs = self._mul(self._unit(j, oj - 1), self._mul(gv(j), gv(i)))
                    eat(f"power overlap g{j+1}^o g{i+1}", lhs, rhs)
                if oi:
                    lhs = self._mul(gv(j), self._power_word(i))
                    rhs = self._mul(self._mul(gv(j), gv(i)), self._unit(i, oi - 1))
                    eat(f"power overlap g{j+1} g{i+1}^o", lhs, rhs)
        for i in range(self.m):
            if self.orders[i]:
                lhs = self._mul(gv(i), self._power_word(i))
                rhs = self._mul(self._power_word(i), gv(i))
                eat(f"power overlap g{i+1} g{i+1}^o", lhs, rhs)
        return failures

    def _power_word(self, i: int) -> Vector:
        tail = self.power_tails.get(i)
        return tail[:] if tail is not None else [0] * self.m

    def describe(self) -> str:
        lines = [f"pc presentation, class {self.nilpotency_class}, "
                 f"{self.m} generators, order {self.quotient_order() or 'infinite'}"]
        for i in range(self.m):
            o = self.orders[i]
            lines.append(f"  {self.names[i]}: weight {self.weights[i]}, "
                         f"order {o if o else 'infinite'}")
            if i in self.power_tails:
                lines.append(f"    {self.names[i]}^{o} = "
                             f"{PcElement(self, tuple(self.power_tails[i]))}")
        for (j, i), tail in sorted(self.conj_tails.items()):
            lines.append(f"  [{self.names[j]},{self.names[i]}] = "
                         f"{PcElement(self, tuple(tail))}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Seed: the abelian quotient over the original generator basis.
#
# Row-style Hermite form keeps every surviving pc generator equal to the image
# of a presentation generator, which the tails step relies on.
# ---------------------------------------------------------------------------


def _abelian_seed(pres) -> PcPresentation:
    n = len(pres.generators)
    rows = []
    for r in pres.relators:
        rows.append([r.exponent_sum(g) for g in pres.generators])
    H, pivots = linalg.hermite_normal_form(rows, n)
    pivot_at = {col: idx for col, idx in pivots}
    surviving = [c for c in range(n) if not (c in pivot_at and H[pivot_at[c]][c] == 1)]
    col_to_new = {c: k for k, c in enumerate(surviving)}
    m = len(surviving)

    def project(vec: Sequence[int]) -> Vector:
        red = linalg.reduce_mod_lattice(vec, H, pivots)
        out = [0] * m
        for c, x in enumerate(red):
            if x:
                out[col_to_new[c]] = x
        return out

    orders = []
    power_tails: Dict[int, Vector] = {}
    for c in surviving:
        if c in pivot_at:
            row = H[pivot_at[c]]
            d = row[c]
            orders.append(d)
            rhs = [0] * n
            for j in range(c + 1, n):
                rhs[j] = -row[j]
            tail = project(rhs)
            if any(tail):
                power_tails[col_to_new[c]] = tail
        else:
            orders.append(0)

    gen_images: List[Vector] = []
    for c in range(n):
        if c in col_to_new:
            v = [0] * m
            v[col_to_new[c]] = 1
            gen_images.append(v)
        else:
            row = H[pivot_at[c]]
            rhs = [0] * n
            for j in range(c + 1, n):
                rhs[j] = -row[j]
            gen_images.append(project(rhs))

    definitions = [("image", c) for c in surviving]
    return PcPresentation([1] * m, orders, power_tails, {},
                          definitions=definitions, gen_images=gen_images,
                          source=pres, nilpotency_class=1,
                          names=[f"g{k+1}" for k in range(m)])


# ---------------------------------------------------------------------------
# Extension by one class.
# ---------------------------------------------------------------------------


def _extend_by_one(q: PcPresentation) -> Tuple[PcPresentation, int]:
    """Largest quotient extension by a central layer of the next weight."""
    cl = q.nilpotency_class
    oldm = q.m
    defined_hosts = {d for d in q.definitions if d is not None}

    hosts: List[tuple] = []
    for j in range(oldm):
        for i in range(j):
            if q.weights[i] + q.weights[j] > cl + 1:
                continue
            if ("comm", j, i) in defined_hosts:
                continue
            hosts.append(("comm", j, i))
    hosts.sort(key=lambda h: (q.weights[h[2]] + q.weights[h[1]], h[1], h[2]))
    for i in range(oldm):
        if q.orders[i] and ("power", i) not in defined_hosts:
            hosts.append(("power", i))
    nsrc = len(q.source.generators) if q.source is not None else 0
    for t in range(nsrc):
        if ("image", t) not in defined_hosts:
            hosts.append(("image", t))

    T = len(hosts)
    total = oldm + T
    col_of = {h: oldm + idx for idx, h in enumerate(hosts)}

    def extend_vec(v: Sequence[int], bump: Optional[int] = None) -> Vector:
        out = list(v) + [0] * T
        if bump is not None:
            out[bump] += 1
        return out

    power_tails = {}
    for i in range(oldm):
        if q.orders[i]:
            base = q.power_tails.get(i, [0] * oldm)
            power_tails[i] = extend_vec(base, col_of.get(("power", i)))
    conj_tails = {}
    for (j, i), tail in q.conj_tails.items():
        conj_tails[(j, i)] = extend_vec(tail, col_of.get(("comm", j, i)))
    for h in hosts:
        if h[0] == "comm" and (h[1], h[2]) not in conj_tails:
            conj_tails[(h[1], h[2])] = extend_vec([0] * oldm, col_of[h])
    gen_images = None
    if q.gen_images is not None:
        gen_images = [extend_vec(v, col_of.get(("image", t)))
                      for t, v in enumerate(q.gen_images)]

    tentative = PcPresentation(
        q.weights + [cl + 1] * T, q.orders + [0] * T, power_tails, conj_tails,
        definitions=q.definitions + [None] * T, gen_images=gen_images,
        source=q.source, nilpotency_class=cl + 1,
        names=q.names + [f"t{k}" for k in range(T)], validate=False)

    equations: List[Vector] = []

    def record(lhs: Vector, rhs: Vector):
        assert lhs[:oldm] == rhs[:oldm], "overlap disagrees below the new layer"
        row = [a - b for a, b in zip(lhs[oldm:], rhs[oldm:])]
        if any(row):
            equations.append(row)

    gv = tentative._unit
    for k in range(oldm):
        for j in range(k):
            for i in range(j):
                if q.weights[i] + q.weights[j] + q.weights[k] > cl + 2:
                    continue
                lhs = tentative._mul(gv(k), tentative._mul(gv(j), gv(i)))
                rhs = tentative._mul(tentative._mul(gv(k), gv(j)), gv(i))
                record(lhs, rhs)
    for j in range(oldm):
        for i in range(j):
            if q.weights[i] + q.weights[j] > cl + 2:
                continue
            oi, oj = q.orders[i], q.orders[j]
            if oj:
                lhs = tentative._mul(tentative._power_word(j), gv(i))
                rhs = tentative._mul(tentative._unit(j, oj - 1),
                                     tentative._mul(gv(j), gv(i)))
                record(lhs, rhs)
            if oi:
                lhs = tentative._mul(gv(j), tentative._power_word(i))
                rhs = tentative._mul(tentative._mul(gv(j), gv(i)),
                                     tentative._unit(i, oi - 1))
                record(lhs, rhs)
    for i in range(oldm):
        if q.orders[i]:
            lhs = tentative._mul(gv(i), tentative._power_word(i))
            rhs = tentative._mul(tentative._power_word(i), gv(i))
            record(lhs, rhs)

    if q.source is not None:
        for rel in q.source.relators:
            v = list(tentative.image_of(rel).vector)
            assert not any(v[:oldm]), "relator image survives in the old layer"
            row = v[oldm:]
            if any(row):
                equations.append(row)

    H, pivots = linalg.hermite_normal_form(equations, T)
    pivot_at = {col: idx for col, idx in pivots}
    survivors = [c for c in range(T) if not (c in pivot_at and H[pivot_at[c]][c] == 1)]
    if not survivors:
        return q, 0
    new_of = {c: oldm + k for k, c in enumerate(survivors)}
    S = len(survivors)

    def shrink(v: Sequence[int]) -> Vector:
        red = linalg.reduce_mod_lattice(v[oldm:], H, pivots)
        out = list(v[:oldm]) + [0] * S
        for c, x in enumerate(red):
            if x:
                out[new_of[c]] = x
        return out

    new_orders = q.orders + [0] * S
    new_power_tails = {i: shrink(v) for i, v in power_tails.items()}
    for c in survivors:
        if c in pivot_at:
            row = H[pivot_at[c]]
            new_orders[new_of[c]] = row[c]
            rhs = [0] * (oldm + T)
            for j in range(c + 1, T):
                rhs[oldm + j] = -row[j]
            tail = shrink(rhs)
            if any(tail):
                new_power_tails[new_of[c]] = tail
    new_conj_tails = {}
    for key, v in conj_tails.items():
        w = shrink(v)
        if any(w):
            new_conj_tails[key] = w
    new_images = None
    if gen_images is not None:
        new_images = [shrink(v) for v in gen_images]
    new_defs = q.definitions + [hosts[c] for c in survivors]

    out = PcPresentation(
        q.weights + [cl + 1] * S, new_orders, new_power_tails, new_conj_tails,
        definitions=new_defs, gen_images=new_images, source=q.source,
        nilpotency_class=cl + 1,
        names=q.names + [f"g{oldm + k + 1}" for k in range(S)])
    return out, S


# ---------------------------------------------------------------------------
# Public entry points.
# ---------------------------------------------------------------------------


def nilpotent_quotient(pres, class_: int, check: bool = True) -> PcPresentation:
    """Weighted pc presentation of G/gamma_{class_+1}(G) with epimorphism data."""
    if class_ < 1:
        raise ValueError("class must be >= 1")
    q = _abelian_seed(pres)
    for _ in range(1, class_):
        q, added = _extend_by_one(q)
        if not added:
            break
    if check:
        failures = q.check_consistency("weighted")
        if failures:
            raise InconsistentPresentation("; ".join(failures[:5]))
        for rel in pres.relators:
            if not q.image_of(rel).is_identity:
                raise InconsistentPresentation(f"relator {rel} not killed")
    return q


@dataclass(frozen=True)
class ClassDetection:
    nilpotent: bool
    nilpotency_class: Optional[int]
    cap: int
    certified_by: Optional[str] = None
    quotient: Optional[PcPresentation] = None

    def __bool__(self):
        return self.nilpotent


def detect_class(pres, cap: int = 8, model=None) -> ClassDetection:
    """Nilpotency class detection for the presented group.

    Without extra information the lower central quotient tower only certifies
    where it stabilizes; a group can stall strictly above a proper quotient.
    The class is therefore certified exactly when the presentation has at most
    one generator (the group is cyclic) or a faithful finite model is supplied
    whose order matches the stable quotient.  The harness always passes a
    model; bare stabilization results are labelled as such.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if model is not None:
        from .finite_oracle import lower_central_series
        series = lower_central_series(model)
        if len(series[-1]) > 1:
            return ClassDetection(False, None, cap)
        k = len(series) - 1
        k = max(k, 1)
        if k > cap:
            return ClassDetection(False, None, cap)
        q = nilpotent_quotient(pres, k)
        q2, added = _extend_by_one(q)
        if added or q.quotient_order() != model.order:
            raise ValueError("finite model does not match the presented group")
        return ClassDetection(True, k, cap, "model", q)
    q = _abelian_seed(pres)
    for k in range(1, cap + 1):
        q2, added = _extend_by_one(q)
        if not added:
            basis = "single-generator" if len(pres.generators) <= 1 else "stabilization"
            return ClassDetection(True, k, cap, basis, q)
        q = q2
    return ClassDetection(False, None, cap)
