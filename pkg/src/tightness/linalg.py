"""Exact linear algebra kernels: ranks over F_p and Q, integer Smith normal form.

Sparse columns are dicts ``row -> value``; F2 vectors are Python ints used as
bitmasks (bit ``i`` = row ``i``).
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable


# -- F2 -----------------------------------------------------------------------

class F2Basis:
    """Row-echelon basis of a subspace of F2^N, vectors as int bitmasks.

    ``pivots`` maps the leading (highest) bit of each basis vector to the vector;
    the basis is kept fully reduced so equal subspaces have equal ``key()``.
    """

    __slots__ = ("pivots",)

    def __init__(self, vectors: Iterable[int] = ()):
        self.pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    @classmethod
    def from_key(cls, key: tuple[int, ...]) -> "F2Basis":
        """Rebuild from ``key()`` output without re-reducing."""
        b = cls()
        b.pivots = {v.bit_length() - 1: v for v in key}
        return b

    def copy(self) -> "F2Basis":
        b = F2Basis()
        b.pivots = dict(self.pivots)
        return b

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            p = self.pivots.get(top)
            if p is None:
                # clear lower pivot bits too, so the result is canonical
                rest = v ^ (1 << top)
                out = 1 << top
                while rest:
                    t = rest.bit_length() - 1
                    q = self.pivots.get(t)
                    if q is None:
                        out |= 1 << t
                        rest ^= 1 << t
                    else:
                        rest ^= q
                return out
            v ^= p
        return 0

    def add(self, v: int) -> bool:
        """Insert ``v``; return True iff the dimension grew."""
        v = self.reduce(v)
        if not v:
            return False
        top = v.bit_length() - 1
        for t, p in list(self.pivots.items()):
            if p >> top & 1:
                self.pivots[t] = p ^ v
        self.pivots[top] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self.pivots)

    def vectors(self) -> list[int]:
        return [self.pivots[t] for t in sorted(self.pivots)]

    def key(self) -> tuple[int, ...]:
        return tuple(self.vectors())

    def restrict(self, mask: int) -> "F2Basis":
        """Subspace of vectors supported inside ``mask``."""
        # Gaussian elimination on the complement bits, highest first
        outside = ~mask
        vecs = self.vectors()
        kept = []
        while vecs:
            v = vecs.pop()
            bad = v & outside
            if not bad:
                kept.append(v)
                continue
            top = bad.bit_length() - 1
            rest = []
            for w in vecs:
                rest.append(w ^ v if w >> top & 1 else w)
            vecs = rest
        return F2Basis(kept)

    def intersection_dim(self, other: "F2Basis") -> int:
        return len(self) + len(other) - len(self.sum(other))

    def sum(self, other: "F2Basis") -> "F2Basis":
        b = self.copy()
        for v in other.pivots.values():
            b.add(v)
        return b


def rank_f2(columns: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    r = 0
    for v in columns:
        while v:
            top = v.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = v
                r += 1
                break
            v ^= p
    return r


# -- F_p and Q ---------------------------------------------------------------

def rank_mod_p(columns: Iterable[dict[int, int]], p: int) -> int:
    """Rank of a sparse integer matrix reduced mod the prime ``p``."""
    pivots: dict[int, dict[int, int]] = {}
    r = 0
    for col in columns:
        v = {i: x % p for i, x in col.items() if x % p}
        while v:
            top = max(v)
            piv = pivots.get(top)
            if piv is None:
                inv = pow(v[top], -1, p)
                pivots[top] = {i: x * inv % p for i, x in v.items()}
                r += 1
                break
            f = v[top]
            for i, x in piv.items():
                y = (v.get(i, 0) - f * x) % p
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
    return r


def rank_q(columns: Iterable[dict[int, int]]) -> int:
    """Rank over the rationals, by elimination with exact fractions."""
    pivots: dict[int, dict[int, Fraction]] = {}
    r = 0
    for col in columns:
        v = {i: Fraction(x) for i, x in col.items() if x}
        while v:
            top = max(v)
            piv = pivots.get(top)
            if piv is None:
                lead = v[top]
                pivots[top] = {i: x / lead for i, x in v.items()}
                r += 1
                break
            f = v[top]
            for i, x in piv.items():
                y = v.get(i, 0) - f * x
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
    return r


def rank(columns: Iterable[dict[int, int]], p: int) -> int:
    """Rank over F_p, or over Q when ``p == 0``."""
    if p == 0:
        return rank_q(columns)
    if p == 2:
        return rank_f2(sum(1 << i for i, x in c.items() if x % 2) for c in columns)
    return rank_mod_p(columns, p)


def nullspace(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of the right null space over F_p (``p == 0``: over Q, scaled to integers)."""
    if p == 0:
        A = [[Fraction(x) for x in r] for r in rows]
        inv = lambda x: 1 / x
        norm = lambda x: x
    else:
        A = [[x % p for x in r] for r in rows]
        inv = lambda x: pow(x, -1, p)
        norm = lambda x: x % p
    pivcols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        s = inv(A[r][c])
        A[r] = [norm(x * s) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [norm(x - f * y) for x, y in zip(A[i], A[r])]
        pivcols.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in set(pivcols)]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivcols):
            v[pc] = norm(-A[i][fc])
        if p == 0:
            den = 1
            for x in v:
                den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
            v = [int(Fraction(x) * den) for x in v]
        basis.append(v)
    return basis


# -- integers ----------------------------------------------------------------

def _normalise_diagonal(diag: list[int]) -> list[int]:
    """Turn any nonzero diagonal into the invariant-factor divisibility chain."""
    d = sorted(abs(x) for x in diag)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            d[i], d[j] = g, d[i] // g * d[j]
    return d


def smith_diagonal(rows: list[list[int]]) -> list[int]:
    """Invariant factors (nonzero SNF diagonal) of an integer matrix.

    Pivot by least absolute value and clear row and column by floor division;
    leftovers are strictly smaller than the pivot, so the loop terminates.
    """
    M = [list(r) for r in rows if any(r)]
    diag: list[int] = []
    while M:
        # least absolute nonzero entry
        best = None
        for i, row in enumerate(M):
            for j, x in enumerate(row):
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        piv_row = M[i]
        p = piv_row[j]
        clean = True
        for r, row in enumerate(M):
            if r != i and row[j]:
                q = row[j] // p
                if q:
                    for c, x in enumerate(piv_row):
                        if x:
                            row[c] -= q * x
                if row[j]:
                    clean = False
        for c in range(len(piv_row)):
            if c != j and piv_row[c]:
                q = piv_row[c] // p
                if q:
                    for row in M:
                        if row[j]:
                            row[c] -= q * row[j]
                if piv_row[c]:
                    clean = False
        if not clean:
            M = [r for r in M if any(r)]
            continue
        diag.append(p)
        del M[i]
        for row in M:
            del row[j]
        M = [r for r in M if any(r)]
    return _normalise_diagonal(diag)
