"""Exact integer matrix normal forms and finite abelian group invariants.

Everything here works over Python integers, so entries never overflow.  Set
SELF_CHECK = True (the test suite does) to verify the Smith normal form
postconditions on every call.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

SELF_CHECK = False

Row = List[int]


class IntMatrix:
    """Dense integer matrix; rows of Python ints."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[int]], cols: Optional[int] = None):
        self.data = [list(map(int, row)) for row in data]
        self.rows = len(self.data)
        if self.data:
            widths = {len(r) for r in self.data}
            if len(widths) != 1:
                raise ValueError("ragged matrix")
            self.cols = widths.pop()
            if cols is not None and cols != self.cols:
                raise ValueError("explicit column count disagrees with data")
        else:
            self.cols = cols or 0

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix) and self.cols == other.cols
                and self.data == other.data)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = [[sum(self.data[i][k] * other.data[k][j] for k in range(self.cols))
                for j in range(other.cols)] for i in range(self.rows)]
        return IntMatrix(out, other.cols)

    def diagonal(self) -> List[int]:
        return [self.data[i][i] for i in range(min(self.rows, self.cols))]

    def __repr__(self) -> str:
        return f"IntMatrix({self.data!r})"


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """g, x, y with x*a + y*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _det_unimodular(m: List[Row]) -> bool:
    # Fraction-free Gaussian elimination (Bareiss); |det| must be 1.
    n = len(m)
    a = [row[:] for row in m]
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return abs(a[n - 1][n - 1]) == 1 if n else True


def smith_normal_form(m: IntMatrix | Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """U, D, V with U*M*V = D diagonal, d1 | d2 | ..., U and V unimodular.

    Pivoting picks the minimal nonzero absolute value in the remaining block,
    which keeps entry growth under control on the sparse relation matrices
    this package produces.
    """
    if not isinstance(m, IntMatrix):
        m = IntMatrix(m)
    a = [row[:] for row in m.data]
    rows, cols = m.rows, m.cols
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(rows):
            a[r][i] -= q * a[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    n = min(rows, cols)
    for s in range(n):
        # locate minimal-absolute-value pivot in the trailing block
        pivot = None
        best = None
        for i in range(s, rows):
            for j in range(s, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        swap_rows(s, pivot[0])
        swap_cols(s, pivot[1])
        while True:
            done = True
            for i in range(s + 1, rows):
                if a[i][s]:
                    q = a[i][s] // a[s][s]
                    row_op(i, s, q)
                    if a[i][s]:  # remainder became the smaller pivot
                        swap_rows(s, i)
                        done = False
            for j in range(s + 1, cols):
                if a[s][j]:
                    q = a[s][j] // a[s][s]
                    col_op(j, s, q)
                    if a[s][j]:
                        swap_cols(s, j)
                        done = False
            if done:
                break
        if a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            u[s] = [-x for x in u[s]]

    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for s in range(n - 1):
            d1, d2 = a[s][s], a[s + 1][s + 1]
            if d1 and d2 and d2 % d1 != 0:
                # fold column s+1 into column s, then re-eliminate the 2x2 block;
                # the gcd lands at (s, s) and the lcm at (s+1, s+1)
                for r in range(rows):
                    a[r][s] += a[r][s + 1]
                for r in range(cols):
                    v[r][s] += v[r][s + 1]
                _clean_pair(a, u, v, rows, cols, s)
                changed = True
            elif d1 == 0 and d2 != 0:
                swap_rows(s, s + 1)
                swap_cols(s, s + 1)
                changed = True

    U, D, V = IntMatrix(u, rows), IntMatrix(a, cols), IntMatrix(v, cols)
    if SELF_CHECK:
        _check_snf(m, U, D, V)
    return U, D, V


def _clean_pair(a, u, v, rows, cols, s):
    # local elimination after a divisibility fold at column s
    while True:
        done = True
        for i in range(s + 1, rows):
            if a[i][s]:
                if a[s][s] == 0 or (a[i][s] % a[s][s] and abs(a[i][s]) < abs(a[s][s])):
                    a[s], a[i] = a[i], a[s]
                    u[s], u[i] = u[i], u[s]
                q = a[i][s] // a[s][s]
                a[i] = [x - q * y for x, y in zip(a[i], a[s])]
                u[i] = [x - q * y for x, y in zip(u[i], u[s])]
                if a[i][s]:
                    done = False
        for j in range(s + 1, cols):
            if a[s][j]:
                q = a[s][j] // a[s][s]
                for r in range(rows):
                    a[r][j] -= q * a[r][s]
                for r in range(cols):
                    v[r][j] -= q * v[r][s]
                if a[s][j]:
                    done = False
        if done:
            break
    if a[s][s] < 0:
        a[s] = [-x for x in a[s]]
        u[s] = [-x for x in u[s]]


def _check_snf(m: IntMatrix, U: IntMatrix, D: IntMatrix, V: IntMatrix):
    prod = U @ m @ V
    assert prod == D, "U*M*V != D"
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j:
                assert D.data[i][j] == 0, "D not diagonal"
    diag = [d for d in D.diagonal() if d]
    for x, y in zip(diag, diag[1:]):
        assert y % x == 0, "divisibility chain violated"
    assert _det_unimodular(U.data), "U not unimodular"
    assert _det_unimodular(V.data), "V not unimodular"


# ---------------------------------------------------------------------------
# Hermite normal form (row style): used wherever relations must stay expressed
# over a fixed generator basis.
# ---------------------------------------------------------------------------


def hermite_normal_form(rows: Iterable[Sequence[int]], ncols: int) -> Tuple[List[Row], List[Tuple[int, int]]]:
    """Row HNF of the lattice spanned by `rows` inside Z^ncols.

    Returns (H, pivots) where pivots is a list of (col, row_index) with
    positive pivot entries, rows sorted by pivot column, and every entry above
    a pivot reduced into [0, pivot).
    """
    table: dict[int, Row] = {}  # pivot col -> row

    def sift(v: Row):
        v = list(v)
        while True:
            lead = next((j for j, x in enumerate(v) if x), None)
            if lead is None:
                return
            if v[lead] < 0 and lead not in table:
                v = [-x for x in v]
            h = table.get(lead)
            if h is None:
                table[lead] = v
                return
            d = h[lead]
            if v[lead] % d == 0:
                q = v[lead] // d
                v = [x - q * y for x, y in zip(v, h)]
            else:
                g, x, y = xgcd(d, v[lead])
                new = [x * p + y * q for p, q in zip(h, v)]
                v = [(d // g) * q - (v[lead] // g) * p for p, q in zip(h, v)]
                table[lead] = new
                # v now has a zero at lead; keep sifting the remainder

    for row in rows:
        sift(row)

    cols = sorted(table)
    H = [table[c] for c in cols]
    # full reduction above later pivots, from the left
    for idx, c in enumerate(cols):
        for jdx in range(idx + 1, len(cols)):
            cj = cols[jdx]
            d = H[jdx][cj]
            q = H[idx][cj] // d
            if q:
                H[idx] = [x - q * y for x, y in zip(H[idx], H[jdx])]
    pivots = [(c, i) for i, c in enumerate(cols)]
    return H, pivots


def reduce_mod_lattice(v: Sequence[int], H: List[Row], pivots: List[Tuple[int, int]]) -> Row:
    """Canonical representative of v modulo the row lattice of H."""
    v = list(v)
    for col, idx in pivots:
        d = H[idx][col]
        q = v[col] // d
        if q:
            v = [x - q * y for x, y in zip(v, H[idx])]
    return v


# ---------------------------------------------------------------------------
# Abelian invariants.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    """Free rank plus the invariant factor chain d1 | d2 | ... (each >= 2)."""

    free_rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")

    @classmethod
    def from_diagonal(cls, diag: Iterable[int], ambient_rank: int) -> "AbelianInvariants":
        diag = [abs(d) for d in diag]
        nonzero = [d for d in diag if d]
        torsion = tuple(d for d in nonzero if d > 1)
        return cls(ambient_rank - len(nonzero), torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> Optional[int]:
        if not self.is_finite:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def primary_components(self) -> Counter:
        """Multiset of primary cyclic components as (prime, exponent) pairs."""
        comps: Counter = Counter()
        for d in self.torsion:
            for p, k in _factor(d).items():
                comps[(p, k)] += 1
        return comps

    def exponent_partition(self, p: int) -> Tuple[int, ...]:
        """Exponents of the p-primary cyclic components, descending."""
        exps = sorted((k for (q, k), mult in self.primary_components().items()
                       for _ in range(mult) if q == p), reverse=True)
        return tuple(exps)

    def direct_sum(self, other: "AbelianInvariants") -> "AbelianInvariants":
        comps = self.primary_components() + other.primary_components()
        return from_primary_components(comps, self.free_rank + other.free_rank)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def from_primary_components(comps: Counter, free_rank: int = 0) -> AbelianInvariants:
    """Rebuild the invariant factor chain from primary cyclic components."""
    by_prime: dict[int, list[int]] = {}
    for (p, k), mult in comps.items():
        by_prime.setdefault(p, []).extend([k] * mult)
    for exps in by_prime.values():
        exps.sort(reverse=True)
    depth = max((len(v) for v in by_prime.values()), default=0)
    chain = []
    for i in range(depth):
        d = 1
        for p, exps in by_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        chain.append(d)
    chain.reverse()
    return AbelianInvariants(free_rank, tuple(chain))


def cokernel_invariants(relations: Iterable[Sequence[int]], ambient_rank: int) -> AbelianInvariants:
    """Invariants of Z^ambient_rank modulo the row space of `relations`."""
    rows = [list(r) for r in relations]
    for r in rows:
        if len(r) != ambient_rank:
            raise ValueError("relation width disagrees with ambient rank")
    if not rows:
        return AbelianInvariants(ambient_rank, ())
    _, D, _ = smith_normal_form(IntMatrix(rows, ambient_rank))
    return AbelianInvariants.from_diagonal(D.diagonal(), ambient_rank)


def is_direct_factor(x: AbelianInvariants, y: AbelianInvariants) -> bool:
    """Whether y has a direct complement decomposition containing x."""
    if x.free_rank > y.free_rank:
        return False
    cx, cy = x.primary_components(), y.primary_components()
    return all(cy[k] >= mult for k, mult in cx.items())


def embeds_as_subgroup(x: AbelianInvariants, y: AbelianInvariants) -> bool:
    """Whether the finite group x embeds in the finite group y.

    Criterion: for every prime the descending exponent partition of x fits
    componentwise under that of y.
    """
    if not (x.is_finite and y.is_finite):
        raise ValueError("subgroup test requires finite inputs")
    primes = {p for p, _ in x.primary_components()} | {p for p, _ in y.primary_components()}
    for p in primes:
        px, py = x.exponent_partition(p), y.exponent_partition(p)
        if len(px) > len(py):
            return False
        if any(a > b for a, b in zip(px, py)):
            return False
    return True


def is_quotient(x: AbelianInvariants, y: AbelianInvariants) -> bool:
    """Whether x is a quotient of y; for finite abelian groups this coincides
    with embedding as a subgroup."""
    return embeds_as_subgroup(x, y)


def abelian_tests(x: AbelianInvariants, y: AbelianInvariants) -> dict[str, bool]:
    return {
        "is_direct_factor": is_direct_factor(x, y),
        "embeds_as_subgroup": embeds_as_subgroup(x, y),
        "is_quotient": is_quotient(x, y),
    }
