"""Simplicial homology over prime fields, the rationals and the integers."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .complex import ComplexError, SimplicialComplex
from .linalg import rank, smith_diagonal


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: the rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise ValueError(f"{self.p} is not a prime")

    @property
    def char(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        t = str(text).strip().lower()
        if t in ("q", "0", "qq", "rationals"):
            return cls(0)
        if t.startswith("f"):
            t = t[1:]
        try:
            return cls(int(t))
        except ValueError:
            raise ValueError(f"unknown field {text!r}; use q or a prime") from None

    def __str__(self):
        return self.name


Q = FieldSpec(0)
F2 = FieldSpec(2)
F3 = FieldSpec(3)


@dataclass
class BoundaryMatrix:
    """Signed incidences between k-faces (columns) and (k-1)-faces (rows)."""

    k: int
    rows: tuple
    cols: tuple
    columns: list[dict[int, int]]

    def dense(self) -> list[list[int]]:
        M = [[0] * len(self.cols) for _ in self.rows]
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                M[i][j] = x
        return M


def boundary_matrix(C: SimplicialComplex, k: int) -> BoundaryMatrix:
    if not 1 <= k <= C.dim:
        raise ComplexError(f"boundary degree {k} out of range 1..{C.dim}")
    rows = C.faces(k - 1)
    idx = C.face_index(k - 1)
    cols = C.faces(k)
    columns = []
    for f in cols:
        columns.append({idx[f[:i] + f[i + 1:]]: (-1) ** i for i in range(k + 1)})
    return BoundaryMatrix(k, rows, cols, columns)


def _boundary_rank(C: SimplicialComplex, k: int, p: int) -> int:
    if k < 1 or k > C.dim:
        return 0
    return rank(boundary_matrix(C, k).columns, p)


def betti(C: SimplicialComplex, k: int, field: FieldSpec = Q, reduced: bool = False) -> int:
    """Betti number by direct elimination over ``field``.

    The empty complex has all Betti numbers 0, except reduced degree 0 which is
    -1 (see ``oracle.EMPTY_REDUCED_BETTI0``).
    """
    if k < 0:
        raise ComplexError("negative homology degree")
    if C.n == 0:
        return -1 if (reduced and k == 0) else 0
    if k > C.dim:
        return 0
    b = len(C.faces(k)) - _boundary_rank(C, k, field.p) - _boundary_rank(C, k + 1, field.p)
    if reduced and k == 0:
        b -= 1
    return b


def betti_numbers(C: SimplicialComplex, field: FieldSpec = Q, reduced: bool = False) -> tuple[int, ...]:
    return tuple(betti(C, k, field, reduced) for k in range(C.dim + 1))


@dataclass(frozen=True)
class IntegralHomology:
    rank: int
    torsion: tuple[int, ...] = dc_field(default=())

    def __str__(self):
        free = {0: [], 1: ["Z"]}.get(self.rank, [f"Z^{self.rank}"])
        parts = free + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _smith(C: SimplicialComplex, k: int) -> list[int]:
    if k < 1 or k > C.dim:
        return []
    return smith_diagonal(boundary_matrix(C, k).dense())


def integral_homology(C: SimplicialComplex, k: int) -> IntegralHomology:
    """H_k(C; Z) from the Smith normal forms of the adjacent boundary maps."""
    if C.n == 0 or k > C.dim:
        return IntegralHomology(0)
    if k < 0:
        raise ComplexError("negative homology degree")
    d_k = _smith(C, k)
    d_k1 = _smith(C, k + 1)
    r = len(C.faces(k)) - len(d_k) - len(d_k1)
    return IntegralHomology(r, tuple(x for x in d_k1 if x > 1))


def integral_homology_all(C: SimplicialComplex) -> list[IntegralHomology]:
    return [integral_homology(C, k) for k in range(C.dim + 1)]


def betti_from_integral(h_k: IntegralHomology, h_km1: IntegralHomology | None,
                        field: FieldSpec) -> int:
    """Universal coefficients: beta_k over ``field`` from integral H_k and H_{k-1}."""
    if field.p == 0:
        return h_k.rank
    p = field.p
    extra = sum(1 for t in h_k.torsion if t % p == 0)
    if h_km1 is not None:
        extra += sum(1 for t in h_km1.torsion if t % p == 0)
    return h_k.rank + extra


def orientable(C: SimplicialComplex, char: int = 0) -> bool:
    """Whether ``C`` is orientable over a field of characteristic ``char``.

    Facet signs are propagated over the dual graph; neighbours must induce
    opposite orientations on their shared ridge.
    """
    if not C.is_closed_pseudomanifold():
        raise ComplexError("orientability needs every ridge in exactly two facets")
    if char == 2:
        return True
    # for each ridge: [(facet index, sign of the induced orientation), ...]
    incid: dict[tuple, list[tuple[int, int]]] = {}
    for fi, f in enumerate(C.facets):
        for i in range(len(f)):
            incid.setdefault(f[:i] + f[i + 1:], []).append((fi, (-1) ** i))
    adj: list[list[tuple[int, int]]] = [[] for _ in C.facets]
    for (a, sa), (b, sb) in incid.values():
        # s_b must equal -s_a * sa * sb
        adj[a].append((b, -sa * sb))
        adj[b].append((a, -sa * sb))
    sign = [0] * len(C.facets)
    for s in range(len(C.facets)):
        if sign[s]:
            continue
        sign[s] = 1
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w, rel in adj[u]:
                want = sign[u] * rel
                if sign[w] == 0:
                    sign[w] = want
                    queue.append(w)
                elif sign[w] != want:
                    return False
    return True


def _prime_factors(x: int) -> list[int]:
    out, q = [], 2
    while q * q <= x:
        if x % q == 0:
            out.append(q)
            while x % q == 0:
                x //= q
        q += 1
    if x > 1:
        out.append(x)
    return out


def beta1_max(M: SimplicialComplex) -> tuple[int, FieldSpec]:
    """Largest beta_1 over the fields for which M can be tight, and a field attaining it.

    Orientable M: Q, F2 and F_p for every prime p dividing an H_1 invariant
    factor.  Non-orientable M: only characteristic 2 qualifies.  Ties go to the
    first candidate, Q.
    """
    h1 = integral_homology(M, 1)
    h0 = integral_homology(M, 0)
    if not orientable(M, 0):
        return betti_from_integral(h1, h0, F2), F2
    primes = sorted({2} | {q for t in h1.torsion for q in _prime_factors(t)})
    best = (betti_from_integral(h1, h0, Q), Q)
    for p in primes:
        F = FieldSpec(p)
        b = betti_from_integral(h1, h0, F)
        if b > best[0]:
            best = (b, F)
    return best


def is_cycle_f2(faces: set, k: int) -> bool:
    """Whether a set of k-faces has empty mod-2 boundary."""
    if k == 0:
        return len(faces) % 2 == 0
    odd: set = set()
    for f in faces:
        for r in combinations(f, k):
            odd ^= {r}
    return not odd
