"""Reference implementations straight from the definitions.

Everything here is exponential in the number of vertices and exists to check
the fast algorithms.  Subsets of vertices are handled as bitmasks.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable

from .complex import ComplexError, SimplicialComplex
from .homology import F2, FieldSpec, Q
from .linalg import nullspace, rank, rank_f2
from .report import Reason, TightnessReport, Verdict

# Reduced zeroth Betti number of the empty induced subcomplex.  With this
# value the A = {} term contributes -1 to sigma_0, which is the only choice
# making mu_1 = beta_1 on the boundary of the 4-simplex and on the 7-vertex
# torus (both tight) and matching the gluing formula for sigma_0.
EMPTY_REDUCED_BETTI0 = -1

DEFAULT_BRUTE_BOUND = 16
SIGMA_CONVENTION = "reduced_betti0(empty) = -1"


class BoundExceeded(ComplexError):
    """The brute-force oracle was asked to handle too many vertices."""


def brute_bound() -> int:
    """Vertex bound for brute force; ``TIGHTNESS_BRUTE_BOUND`` overrides it."""
    env = os.environ.get("TIGHTNESS_BRUTE_BOUND")
    return int(env) if env else DEFAULT_BRUTE_BOUND


def _check_bound(n: int, bound: int | None):
    b = brute_bound() if bound is None else bound
    if n > b:
        raise BoundExceeded(f"{n} vertices exceeds the brute-force bound {b}")


def _mask(face) -> int:
    m = 0
    for v in face:
        m |= 1 << v
    return m


class _FaceData:
    """Faces as vertex bitmasks plus boundary columns, for fast subset queries."""

    def __init__(self, C: SimplicialComplex, p: int):
        self.C = C
        self.p = p
        d = C.dim
        self.faces = [C.faces(k) for k in range(d + 1)] if C.n else []
        self.masks = [[_mask(f) for f in fs] for fs in self.faces]
        # cols[k][i] = boundary of the i-th k-face, as a dict (or bitmask over F2)
        self.cols: list[list] = [[]]
        for k in range(1, d + 1):
            idx = C.face_index(k - 1)
            cs = []
            for f in self.faces[k]:
                col = {idx[f[:i] + f[i + 1:]]: (-1) ** i for i in range(k + 1)}
                cs.append(sum(1 << r for r in col) if p == 2 else col)
            self.cols.append(cs)

    def inside(self, k: int, A: int) -> list[int]:
        return [i for i, m in enumerate(self.masks[k]) if m & A == m]

    def rank_inside(self, k: int, A: int) -> int:
        """Rank of the k-th boundary map of C[A]."""
        if k < 1 or k >= len(self.faces):
            return 0
        cs = [self.cols[k][i] for i, m in enumerate(self.masks[k]) if m & A == m]
        return rank_f2(cs) if self.p == 2 else rank(cs, self.p)

    def rank_outside_rows(self, k: int, A: int) -> int:
        """Rank of the (k+1)-th boundary map of C, keeping rows of k-faces not in C[A]."""
        if k + 1 >= len(self.faces):
            return 0
        out = [i for i, m in enumerate(self.masks[k]) if m & A != m]
        if self.p == 2:
            om = sum(1 << i for i in out)
            return rank_f2(c & om for c in self.cols[k + 1])
        outs = set(out)
        return rank([{r: x for r, x in c.items() if r in outs} for c in self.cols[k + 1]], self.p)

    def reduced_betti(self, i: int, A: int) -> int:
        if A == 0:
            return EMPTY_REDUCED_BETTI0 if i == 0 else 0
        if i >= len(self.faces):
            return 0
        f = len(self.inside(i, A))
        b = f - self.rank_inside(i, A) - self.rank_inside(i + 1, A)
        return b - 1 if i == 0 else b


def _subsets(n: int):
    return range(1 << n)


def sigma_vector_bruteforce(C: SimplicialComplex, field: FieldSpec = Q,
                            bound: int | None = None) -> tuple[Fraction, ...]:
    """(sigma_0, ..., sigma_d) summed over every vertex subset, the empty one included."""
    _check_bound(C.n, bound)
    data = _FaceData(C, field.p)
    d = max(C.dim, 0)
    n = C.n
    sig = [Fraction(0)] * (d + 1)
    for A in _subsets(n):
        size = bin(A).count("1")
        w = comb(n, size)
        for i in range(d + 1):
            b = data.reduced_betti(i, A)
            if b:
                sig[i] += Fraction(b, w)
    return tuple(sig)


def adjacency_masks(C: SimplicialComplex) -> list[int]:
    adj = [0] * C.n
    if C.dim >= 1:
        for u, v in C.faces(1):
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return adj


def component_counts(adj: list[int]) -> list[int]:
    """Number of connected components of the induced subgraph, for every subset."""
    n = len(adj)
    c = [0] * (1 << n)
    for A in range(1, 1 << n):
        low = A & -A
        reach, frontier = low, low
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= adj[b.bit_length() - 1]
                f ^= b
            nxt &= A & ~reach
            reach |= nxt
            frontier = nxt
        c[A] = 1 + c[A & ~reach]
    return c


def sigma0_graph_bruteforce(adj: list[int], bound: int | None = None) -> Fraction:
    """sigma_0 of any complex whose 1-skeleton has adjacency bitmasks ``adj``."""
    n = len(adj)
    _check_bound(n, bound)
    counts = component_counts(adj)
    total = Fraction(EMPTY_REDUCED_BETTI0)
    by_size: dict[int, int] = {}
    for A in range(1, 1 << n):
        extra = counts[A] - 1
        if extra:
            s = bin(A).count("1")
            by_size[s] = by_size.get(s, 0) + extra
    for s, t in by_size.items():
        total += Fraction(t, comb(n, s))
    return total


def sigma0_bruteforce(C: SimplicialComplex, bound: int | None = None) -> Fraction:
    """sigma_0 only; depends on the 1-skeleton alone and on no field."""
    return sigma0_graph_bruteforce(adjacency_masks(C), bound)


@dataclass
class SigmaMuReport:
    sigma: tuple[Fraction, ...]
    mu: tuple[Fraction, ...]
    field: FieldSpec
    convention: str = SIGMA_CONVENTION


def mu0(C: SimplicialComplex) -> Fraction:
    return sum((Fraction(1, 1 + C.link(v).n) for v in range(C.n)), Fraction(0))


def mu_vector(C: SimplicialComplex, field: FieldSpec = Q,
              bound: int | None = None) -> tuple[Fraction, ...]:
    """(mu_0, ..., mu_d) with link sigma-vectors from the brute-force oracle."""
    d = C.dim
    m0 = mu0(C)
    mu = [m0] + [Fraction(0)] * d
    if d >= 1:
        mu[1] = m0  # the Kronecker delta term
    for v in range(C.n):
        lk = C.link(v)
        sig = sigma_vector_bruteforce(lk, field, bound)
        w = Fraction(1, 1 + lk.n)
        for i in range(1, d + 1):
            if i - 1 < len(sig):
                mu[i] += sig[i - 1] * w
    return tuple(mu)


def mu1(C: SimplicialComplex, sigma0: Callable[[SimplicialComplex], Fraction] | None = None) -> Fraction:
    """mu_1 = mu_0 + sum_v sigma_0(lk v) / (1 + f_0(lk v)); field independent."""
    sigma0 = sigma0 or sigma0_bruteforce
    total = mu0(C)
    for v in range(C.n):
        lk = C.link(v)
        total += sigma0(lk) / (1 + lk.n)
    return total


def sigma_mu_report(C: SimplicialComplex, field: FieldSpec = Q) -> SigmaMuReport:
    return SigmaMuReport(sigma_vector_bruteforce(C, field), mu_vector(C, field), field)


# -- injectivity and brute-force tightness --------------------------------------

def _vertex_mask(W) -> int:
    return _mask(W)


def is_injective_on_homology(C: SimplicialComplex, W, k: int, field: FieldSpec = Q) -> bool:
    """Whether H_k(C[W]) -> H_k(C) is injective.

    Boundaries of C that live inside C[W] form Z_k(C[W]) cap B_k(C); the map is
    injective iff that space is no bigger than B_k(C[W]).  Its dimension is
    rank d_{k+1}(C) minus the rank of the rows outside C[W].
    """
    return _injective(_FaceData(C, field.p), _vertex_mask(W), k)


def _injective(data: _FaceData, A: int, k: int) -> bool:
    if k + 1 >= len(data.faces):
        return True
    r = data.rank_outside_rows(k, 0)  # every row kept
    return r - data.rank_outside_rows(k, A) == data.rank_inside(k + 1, A)


@dataclass
class TightnessWitness:
    """A k-cycle of C[W] that bounds in C (``filling``) but not in C[W]."""

    W: tuple[int, ...]
    k: int
    cycle: list[tuple[tuple[int, ...], int]]
    filling: list[tuple[tuple[int, ...], int]]
    field: FieldSpec

    def recheck(self, C: SimplicialComplex) -> bool:
        """True iff the witness still certifies non-injectivity."""
        if is_injective_on_homology(C, self.W, self.k, self.field):
            return False
        p = self.field.p
        norm = (lambda x: x) if p == 0 else (lambda x: x % p)
        Wset = set(self.W)
        # the filling's boundary is the cycle, and the cycle lives in C[W]
        bd: dict = {}
        for f, x in self.filling:
            if not C.has_face(f):
                return False
            for i in range(len(f)):
                r = f[:i] + f[i + 1:]
                bd[r] = norm(bd.get(r, 0) + (-1) ** i * x)
        bd = {r: x for r, x in bd.items() if x}
        cyc = {f: norm(x) for f, x in self.cycle if norm(x)}
        if bd != cyc or not all(set(f) <= Wset for f in cyc):
            return False
        # and it is not a boundary inside C[W]
        sub = C.induced(self.W)
        if self.k + 1 > sub.dim:
            return bool(cyc)
        loc = {v: i for i, v in enumerate(sorted(Wset))}
        idx = sub.face_index(self.k)
        cols = []
        for f in sub.faces(self.k + 1):
            cols.append({idx[f[:i] + f[i + 1:]]: (-1) ** i for i in range(len(f))})
        target = {idx[tuple(loc[v] for v in f)]: x for f, x in cyc.items()}
        return rank(cols + [target], p) > rank(cols, p)

    def to_dict(self, C: SimplicialComplex) -> dict:
        lab = C.labels
        return {
            "W": [lab[v] for v in self.W],
            "k": self.k,
            "cycle": [[[lab[v] for v in f], x] for f, x in self.cycle],
            "filling": [[[lab[v] for v in f], x] for f, x in self.filling],
        }


def injectivity_witness(C: SimplicialComplex, W: tuple[int, ...], k: int, field: FieldSpec) -> TightnessWitness:
    p = field.p
    norm = (lambda x: x) if p == 0 else (lambda x: x % p)
    kf = C.faces(k)
    idx = C.face_index(k)
    up = C.faces(k + 1)
    Wset = set(W)
    inside_rows = {i for i, f in enumerate(kf) if set(f) <= Wset}
    outside_rows = [i for i in range(len(kf)) if i not in inside_rows]
    # D with boundary vanishing outside C[W]
    rows = [[0] * len(up) for _ in outside_rows]
    pos = {r: a for a, r in enumerate(outside_rows)}
    bcols = []
    for j, f in enumerate(up):
        col = {idx[f[:i] + f[i + 1:]]: (-1) ** i for i in range(k + 2)}
        bcols.append(col)
        for r, x in col.items():
            if r in pos:
                rows[pos[r]][j] = x
    inner = [bcols[j] for j, f in enumerate(up) if set(f) <= Wset]
    base = rank(inner, p)
    for D in nullspace(rows, len(up), p):
        z: dict[int, int] = {}
        for j, x in enumerate(D):
            if x:
                for r, y in bcols[j].items():
                    z[r] = norm(z.get(r, 0) + x * y)
        z = {r: x for r, x in z.items() if x}
        if z and rank(inner + [z], p) > base:
            cycle = [(kf[r], z[r]) for r in sorted(z)]
            filling = [(up[j], x) for j, x in enumerate(D) if x]
            return TightnessWitness(W, k, cycle, filling, field)
    raise AssertionError("no witness found for a non-injective map")


def is_tight_bruteforce(C: SimplicialComplex, field: FieldSpec = Q,
                        bound: int | None = None) -> TightnessReport:
    """Check injectivity for every vertex subset and every degree.

    On failure the witness has the least (|W|, W, k) in lexicographic order.
    """
    _check_bound(C.n, bound)
    if not C.is_connected():
        return TightnessReport(Verdict.NOT_TIGHT, "brute", field.name, Reason.NOT_CONNECTED)
    data = _FaceData(C, field.p)
    n, d = C.n, C.dim
    r_full = [data.rank_outside_rows(k, 0) for k in range(d + 1)]
    for size in range(2, n):
        for W in combinations(range(n), size):
            A = _mask(W)
            for k in range(d):
                if r_full[k] == 0:
                    continue
                if r_full[k] - data.rank_outside_rows(k, A) != data.rank_inside(k + 1, A):
                    wit = injectivity_witness(C, W, k, field)
                    return TightnessReport(
                        Verdict.NOT_TIGHT, "brute", field.name, Reason.HOMOLOGY_OBSTRUCTION,
                        certificate=wit.to_dict(C), witness=wit)
    return TightnessReport(Verdict.TIGHT, "brute", field.name)


def is_k_tight_bruteforce(C: SimplicialComplex, k: int, field: FieldSpec = F2,
                          bound: int | None = None) -> bool:
    """Injectivity in the single degree ``k`` for every vertex subset."""
    _check_bound(C.n, bound)
    data = _FaceData(C, field.p)
    n = C.n
    full = (1 << n) - 1
    if k + 1 >= len(data.faces):
        return True
    r = data.rank_outside_rows(k, 0)
    for A in range(1, full):
        if r - data.rank_outside_rows(k, A) != data.rank_inside(k + 1, A):
            return False
    return True
