"""Concrete finite groups as Cayley tables, product constructors, and an
independent second-homology oracle.

The oracle computes H2 with integer coefficients from the inhomogeneous bar
complex Z[G^3] -> Z[G^2] -> Z[G]: its torsion is the torsion of the cokernel
of the degree-3 boundary and its rank is nullity(d2) - rank(d3).  Nothing here
touches presentations or the polycyclic machinery, so it can arbitrate them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .linalg import AbelianInvariants


class FiniteGroup:
    """Multiplication table group; elements are 0..n-1."""

    __slots__ = ("table", "order", "identity", "inverse", "generators", "name")

    def __init__(self, table: np.ndarray, generators: Optional[Dict[str, int]] = None,
                 name: str = "", verify: bool = True):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("table must be square")
        self.table = table
        self.order = n
        if verify:
            if table.min() < 0 or table.max() >= n:
                raise ValueError("table entries out of range")
            # each row and column a permutation
            ar = np.arange(n)
            for i in range(n):
                if sorted(table[i]) != list(ar) or sorted(table[:, i]) != list(ar):
                    raise ValueError("table rows/columns are not permutations")
        ident = None
        for e in range(n):
            if np.array_equal(self.table[e], np.arange(n)):
                ident = e
                break
        if ident is None or not np.array_equal(self.table[:, ident], np.arange(n)):
            raise ValueError("no identity element")
        self.identity = ident
        if verify:
            # associativity: table[table[i, j], k] == table[i, table[j, k]]
            left = self.table[self.table, :]      # left[i, j, k] = (ij)k
            right = self.table[:, self.table]     # right[i, j, k] = i(jk)
            if not np.array_equal(left, right):
                raise ValueError("table is not associative")
        inv = np.empty(n, dtype=np.int64)
        for i in range(n):
            js = np.nonzero(self.table[i] == ident)[0]
            if len(js) != 1:
                raise ValueError("missing or non-unique inverse")
            inv[i] = js[0]
        self.inverse = inv
        self.generators = dict(generators) if generators else {}
        self.name = name

    def mult(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        while k:
            if k & 1:
                out = self.mult(out, a)
            a = self.mult(a, a)
            k >>= 1
        return out

    def commutator(self, a: int, b: int) -> int:
        return self.mult(self.mult(self.inv(a), self.inv(b)), self.mult(a, b))

    def conjugate(self, a: int, by: int) -> int:
        return self.mult(self.mult(self.inv(by), a), by)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mult(x, a)
            k += 1
        return k

    def evaluate(self, w, gen_map: Optional[Dict[str, int]] = None) -> int:
        gmap = gen_map if gen_map is not None else self.generators
        out = self.identity
        for name, exp in w.syllables():
            out = self.mult(out, self.power(gmap[name], exp))
        return out

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def subgroup_closure(self, gens: Iterable[int]) -> FrozenSet[int]:
        els = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mult(x, g)
                    if y not in els:
                        els.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(els)

    def abelian_invariants(self) -> AbelianInvariants:
        """Invariant factors, for abelian tables only."""
        if not self.is_abelian():
            raise ValueError("abelian_invariants needs an abelian group")
        rows = []
        gens = []
        for g in range(self.order):
            gens.append(g)
            if len(self.subgroup_closure(gens)) == self.order:
                break
        # relations: g_i^order(g_i) = 1 plus the full multiplication lattice
        lattice_rows = []
        reach: Dict[int, Tuple[int, ...]] = {self.identity: tuple([0] * len(gens))}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for i, g in enumerate(gens):
                    y = self.mult(x, g)
                    vec = list(reach[x])
                    vec[i] += 1
                    if y not in reach:
                        reach[y] = tuple(vec)
                        nxt.append(y)
                    else:
                        lattice_rows.append([a - b for a, b in zip(vec, reach[y])])
            frontier = nxt
        return linalg.cokernel_invariants(lattice_rows, len(gens))

    def __repr__(self):
        return f"FiniteGroup({self.name or 'order %d' % self.order})"


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    images: Tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.source.order:
            raise ValueError("image list has wrong length")
        for a in range(self.source.order):
            for b in range(self.source.order):
                lhs = self.images[self.source.mult(a, b)]
                rhs = self.target.mult(self.images[a], self.images[b])
                if lhs != rhs:
                    raise ValueError("not multiplicative")

    def __call__(self, a: int) -> int:
        return self.images[a]

    def is_onto(self) -> bool:
        return len(set(self.images)) == self.target.order


# ---------------------------------------------------------------------------
# Constructors.
# ---------------------------------------------------------------------------


def trivial_group() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int64), name="1")


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("order must be positive")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    gens = {"a": 1 % n} if n > 1 else {}
    return FiniteGroup(table, generators=gens, name=f"Z{n}")


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    na, nb = a.order, b.order
    table = np.empty((na * nb, na * nb), dtype=np.int64)
    for x1 in range(na):
        for y1 in range(nb):
            for x2 in range(na):
                for y2 in range(nb):
                    table[x1 * nb + y1, x2 * nb + y2] = \
                        a.mult(x1, x2) * nb + b.mult(y1, y2)
    gens = {}
    for n, g in a.generators.items():
        gens[n] = g * nb + b.identity
    for n, g in b.generators.items():
        gens[f"{n}_r" if n in gens else n] = a.identity * nb + g
    return FiniteGroup(table, generators=gens, name=f"{a.name}x{b.name}")


def automorphism_from_images(g: FiniteGroup, perm: Sequence[int]) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    if sorted(perm) != list(range(g.order)):
        raise ValueError("automorphism image is not a bijection")
    for x in range(g.order):
        for y in range(g.order):
            if perm[g.mult(x, y)] != g.mult(int(perm[x]), int(perm[y])):
                raise ValueError("not an automorphism")
    return perm


def extend_action(b: FiniteGroup, gen_autos: Dict[int, np.ndarray],
                  acted: FiniteGroup) -> List[np.ndarray]:
    """Extend generator automorphisms to every element of B by factoring
    elements into generator words, then verify multiplicativity everywhere."""
    n = acted.order
    theta: Dict[int, np.ndarray] = {b.identity: np.arange(n, dtype=np.int64)}
    frontier = [b.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, auto in gen_autos.items():
                y = b.mult(x, g)
                if y not in theta:
                    # theta(x*g) = theta(x) o theta(g); as index arrays p o q = p[q]
                    theta[y] = theta[x][auto]
                    nxt.append(y)
        frontier = nxt
    if len(theta) != b.order:
        raise ValueError("action generators do not generate B")
    for x in range(b.order):
        for y in range(b.order):
            if not np.array_equal(theta[b.mult(x, y)], theta[x][theta[y]]):
                raise ValueError("action does not respect B's multiplication")
    return [theta[x] for x in range(b.order)]


def semidirect(a: FiniteGroup, b: FiniteGroup,
               theta_gens: Dict[int, Sequence[int]]) -> FiniteGroup:
    """Split extension with normal factor a; theta_gens maps B generators to
    automorphisms of a, checked and extended to all of B.

    Elements are pairs (x, y) encoded x * |B| + y with (x1,y1)(x2,y2) =
    (x1 * theta(y1)(x2), y1 y2).
    """
    autos = {g: automorphism_from_images(a, perm) for g, perm in theta_gens.items()}
    theta = extend_action(b, autos, a)
    na, nb = a.order, b.order
    table = np.empty((na * nb, na * nb), dtype=np.int64)
    for x1 in range(na):
        for y1 in range(nb):
            for x2 in range(na):
                for y2 in range(nb):
                    x = a.mult(x1, int(theta[y1][x2]))
                    y = b.mult(y1, y2)
                    table[x1 * nb + y1, x2 * nb + y2] = x * nb + y
    gens = {}
    for n, g in a.generators.items():
        gens[n] = g * nb + b.identity
    for n, g in b.generators.items():
        gens[n if n not in gens else f"{n}_r"] = a.identity * nb + g
    return FiniteGroup(table, generators=gens, name=f"{b.name}|x{a.name}")


def standard_wreath(a: FiniteGroup, b: FiniteGroup, cap: int = 20000) -> FiniteGroup:
    """A wr B on the direct-power base, B permuting coordinates by right
    translation: (f^b')(x) = f(x b')."""
    na, nb = a.order, b.order
    n_base = na ** nb
    if n_base * nb > cap:
        raise ValueError(f"wreath product order {n_base * nb} exceeds cap {cap}")
    base_elems = list(itertools.product(range(na), repeat=nb))
    base_index = {f: i for i, f in enumerate(base_elems)}

    def act(f: Tuple[int, ...], bel: int) -> Tuple[int, ...]:
        return tuple(f[b.mult(x, bel)] for x in range(nb))

    n = n_base * nb
    table = np.empty((n, n), dtype=np.int64)
    for i1, f1 in enumerate(base_elems):
        for y1 in range(nb):
            row = i1 * nb + y1
            for i2, f2 in enumerate(base_elems):
                g2 = act(f2, y1)
                f = tuple(a.mult(f1[x], g2[x]) for x in range(nb))
                prod_base = base_index[f] * nb
                for y2 in range(nb):
                    table[row, i2 * nb + y2] = prod_base + b.mult(y1, y2)
    gens = {}
    for nme, g in a.generators.items():
        coords = [a.identity] * nb
        coords[b.identity] = g
        gens[nme] = base_index[tuple(coords)] * nb + b.identity
    for nme, g in b.generators.items():
        gens[nme if nme not in gens else f"{nme}_r"] = \
            base_index[tuple([a.identity] * nb)] * nb + g
    return FiniteGroup(table, generators=gens, name=f"{a.name}wr{b.name}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: rotations Z_n with an inverting reflection."""
    if n < 1:
        raise ValueError("n must be >= 1")
    zn = cyclic(n)
    z2 = cyclic(2)
    inv_perm = [(-x) % n for x in range(n)]
    g = semidirect(zn, z2, {1: inv_perm})
    return FiniteGroup(g.table, generators={"a": zn.generators.get("a", 0) * 2,
                                            "b": 1},
                       name=f"D{n}", verify=False)


def quaternion8() -> FiniteGroup:
    """The order-8 quaternion group on {±1, ±i, ±j, ±k}."""
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    sign = {n: (-1 if n.startswith("-") else 1) for n in names}
    unit = {n: n.lstrip("-") for n in names}
    mul1 = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"),
            ("1", "k"): (1, "k"), ("i", "1"): (1, "i"), ("j", "1"): (1, "j"),
            ("k", "1"): (1, "k"), ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"),
            ("k", "k"): (-1, "1"), ("i", "j"): (1, "k"), ("j", "i"): (-1, "k"),
            ("j", "k"): (1, "i"), ("k", "j"): (-1, "i"), ("k", "i"): (1, "j"),
            ("i", "k"): (-1, "j")}
    idx = {n: i for i, n in enumerate(names)}
    table = np.empty((8, 8), dtype=np.int64)
    for x in names:
        for y in names:
            s, u = mul1[(unit[x], unit[y])]
            s *= sign[x] * sign[y]
            table[idx[x], idx[y]] = idx[u if s == 1 else "-" + u]
    return FiniteGroup(table, generators={"a": idx["i"], "b": idx["j"]}, name="Q8")


# ---------------------------------------------------------------------------
# Structure.
# ---------------------------------------------------------------------------


def commutator_closure(g: FiniteGroup, xs: FrozenSet[int], ys: FrozenSet[int]) -> FrozenSet[int]:
    gens = {g.commutator(x, y) for x in xs for y in ys}
    return g.subgroup_closure(gens)


def lower_central_series(g: FiniteGroup) -> List[FrozenSet[int]]:
    """gamma_1 = G, gamma_{i+1} = [gamma_i, G], until the series stabilizes."""
    whole = frozenset(range(g.order))
    series = [whole]
    while True:
        nxt = commutator_closure(g, series[-1], whole)
        if nxt == series[-1]:
            if len(series) == 1 and len(nxt) == 1:
                # abelian: record the terminal trivial term explicitly
                series.append(nxt)
            break
        series.append(nxt)
        if len(nxt) == 1:
            break
    return series


def is_nilpotent(g: FiniteGroup) -> Tuple[bool, Optional[int]]:
    series = lower_central_series(g)
    if len(series[-1]) != 1:
        return False, None
    return True, max(1, len(series) - 1)


def isomorphic_small(g: FiniteGroup, h: FiniteGroup, limit: int = 16) -> bool:
    """Exhaustive generator-mapping isomorphism search for tiny groups."""
    if g.order != h.order:
        return False
    if g.order > limit:
        raise ValueError("isomorphism search capped at order %d" % limit)
    gens: List[int] = []
    seen = {g.identity}
    for x in range(g.order):
        if x not in seen:
            gens.append(x)
            seen = set(g.subgroup_closure(gens))
            if len(seen) == g.order:
                break
    g_orders = sorted(g.element_order(x) for x in range(g.order))
    if g_orders != sorted(h.element_order(x) for x in range(h.order)):
        return False

    def extend(mapping: Dict[int, int], frontier: List[int]) -> Optional[Dict[int, int]]:
        # close mapping under multiplication; None on conflict
        mapping = dict(mapping)
        frontier = list(frontier)
        while frontier:
            x = frontier.pop()
            for y in list(mapping):
                for p, q in ((x, y), (y, x)):
                    s, t = g.mult(p, q), h.mult(mapping[p], mapping[q])
                    if s in mapping:
                        if mapping[s] != t:
                            return None
                    else:
                        mapping[s] = t
                        frontier.append(s)
        if len(set(mapping.values())) != len(mapping):
            return None
        return mapping

    def search(mapping: Dict[int, int], remaining: List[int]) -> bool:
        if not remaining:
            return len(mapping) == g.order
        x = remaining[0]
        ox = g.element_order(x)
        for y in range(h.order):
            if y in mapping.values() or h.element_order(y) != ox:
                continue
            nxt = extend({**mapping, x: y}, [x])
            if nxt is not None and search(nxt, [r for r in remaining[1:] if r not in nxt]):
                return True
        return False

    return search({g.identity: h.identity}, gens)


# ---------------------------------------------------------------------------
# The homology oracle.
# ---------------------------------------------------------------------------


def schur_multiplier_oracle(g: FiniteGroup, cap: int = 24) -> AbelianInvariants:
    """H2 of the group with integer coefficients, from the bar complex.

    Independent of all presentation machinery.  Row/column bookkeeping stays
    sparse; the boundary of (g, h, k) hits only four basis elements.
    """
    n = g.order
    if n > cap:
        raise ValueError(f"oracle cap {cap} exceeded by group of order {n}")
    pair = lambda x, y: x * n + y

    # rank of d2 : Z[G^2] -> Z[G], columns e_h - e_{gh} + e_g
    d2_echelon: Dict[int, Dict[int, int]] = {}
    for x in range(n):
        for y in range(n):
            col = {y: 1, x: 1}
            xy = g.mult(x, y)
            col[xy] = col.get(xy, 0) - 1
            _sparse_sift({k: v for k, v in col.items() if v}, d2_echelon)
    rank_d2 = len(d2_echelon)
    nullity_d2 = n * n - rank_d2

    # column echelon of d3 : Z[G^3] -> Z[G^2]
    d3_echelon: Dict[int, Dict[int, int]] = {}
    for x in range(n):
        xy_row = g.table[x]
        for y in range(n):
            xy = int(xy_row[y])
            yz_row = g.table[y]
            for z in range(n):
                col: Dict[int, int] = {}
                for key, s in ((pair(y, z), 1), (pair(xy, z), -1),
                               (pair(x, int(yz_row[z])), 1), (pair(x, y), -1)):
                    col[key] = col.get(key, 0) + s
                _sparse_sift({k: v for k, v in col.items() if v}, d3_echelon)
    rank_d3 = len(d3_echelon)

    free_rank = nullity_d2 - rank_d3
    assert free_rank >= 0
    # torsion of H2 = torsion of coker(d3), read from the echelon's SNF
    support = sorted({k for row in d3_echelon.values() for k in row})
    pos = {k: i for i, k in enumerate(support)}
    dense = [[0] * len(support) for _ in d3_echelon]
    for i, lead in enumerate(sorted(d3_echelon)):
        for k, v in d3_echelon[lead].items():
            dense[i][pos[k]] = v
    if dense:
        _, d, _ = linalg.smith_normal_form(linalg.IntMatrix(dense, len(support)))
        torsion = tuple(x for x in d.diagonal() if x > 1)
    else:
        torsion = ()
    inv = AbelianInvariants(free_rank, torsion)
    assert inv.is_finite, "H2 of a finite group must be finite"
    return inv


def _sparse_sift(col: Dict[int, int], echelon: Dict[int, Dict[int, int]]):
    """Integer-echelon sift of a sparse column (gcd combination at pivots)."""
    while col:
        lead = min(col)
        piv = echelon.get(lead)
        if piv is None:
            if col[lead] < 0:
                col = {k: -v for k, v in col.items()}
            echelon[lead] = col
            return
        a, b = piv[lead], col[lead]
        if b % a == 0:
            q = b // a
            col = _sparse_axpy(col, piv, -q)
        else:
            gg, x, y = linalg.xgcd(a, b)
            new = _sparse_axpy({k: x * v for k, v in piv.items()},
                               col, y)
            col = _sparse_axpy({k: (b // gg) * v for k, v in piv.items()},
                               col, -(a // gg))
            col, new = new, col
            echelon[lead] = col
            col = new
        col = {k: v for k, v in col.items() if v}


def _sparse_axpy(a: Dict[int, int], b: Dict[int, int], s: int) -> Dict[int, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + s * v
    return {k: v for k, v in out.items() if v}
