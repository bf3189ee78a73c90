"""Facet-defined abstract simplicial complexes.

Vertices are interned to dense ids ``0..n-1``; the external labels live in a
symbol table on the complex and are only consulted at I/O boundaries.  Faces
are strictly increasing tuples of vertex ids.
"""
from __future__ import annotations

import threading
from collections import deque
from itertools import combinations
from math import comb
from typing import Hashable, Iterable, Sequence

Face = tuple[int, ...]


class ComplexError(ValueError):
    """Malformed input or violated precondition on a complex."""


class Graph:
    """Simple undirected graph on vertices ``0..n-1`` with sorted adjacency."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ComplexError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ComplexError(f"edge ({u}, {v}) out of range for {n} vertices")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                u = queue.popleft()
                comp.append(u)
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


def _sort_labels(labels: list) -> list:
    try:
        return sorted(labels)
    except TypeError:
        return labels


class SimplicialComplex:
    """Immutable complex given by its maximal faces.

    ``facets`` are kept reduced (no facet contained in another) and sorted.
    Per-dimension face lists are computed once, on first use.
    """

    def __init__(self, n: int, facets: Iterable[Sequence[int]],
                 labels: Sequence[Hashable] | None = None):
        raw = {tuple(sorted(f)) for f in facets}
        for f in raw:
            if len(set(f)) != len(f):
                raise ComplexError(f"facet {f} repeats a vertex")
            if f and not (0 <= f[0] and f[-1] < n):
                raise ComplexError(f"facet {f} out of range for {n} vertices")
        # containment reduction: a face is kept iff no strictly larger facet contains it
        by_size = sorted(raw, key=len, reverse=True)
        kept: list[Face] = []
        kept_sets: list[frozenset] = []
        for f in by_size:
            fs = frozenset(f)
            if not any(len(g) > len(fs) and fs <= g for g in kept_sets):
                kept.append(f)
                kept_sets.append(fs)
        self.n = n
        self.facets: tuple[Face, ...] = tuple(sorted(kept))
        used = set()
        for f in self.facets:
            used.update(f)
        if len(used) != n:
            missing = sorted(set(range(n)) - used)
            raise ComplexError(f"vertices {missing} occur in no facet")
        self.labels: tuple = tuple(labels) if labels is not None else tuple(range(n))
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise ComplexError("labels must be distinct, one per vertex")
        self.dim = max((len(f) for f in self.facets), default=0) - 1
        self._faces: list[tuple[Face, ...]] | None = None
        self._index: list[dict[Face, int]] | None = None
        self._lock = threading.Lock()

    # -- construction -------------------------------------------------

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls(0, [])

    def relabel(self, labels: Sequence[Hashable]) -> "SimplicialComplex":
        return SimplicialComplex(self.n, self.facets, labels)

    # -- face data ------------------------------------------------------

    def _ensure_faces(self):
        if self._faces is not None:
            return
        with self._lock:
            if self._faces is not None:
                return
            levels: list[set[Face]] = [set() for _ in range(self.dim + 1)]
            for f in self.facets:
                for k in range(1, len(f) + 1):
                    levels[k - 1].update(combinations(f, k))
            faces = [tuple(sorted(s)) for s in levels]
            self._index = [{f: i for i, f in enumerate(fs)} for fs in faces]
            self._faces = faces

    def faces(self, k: int) -> tuple[Face, ...]:
        """All ``k``-faces in lexicographic order."""
        if not 0 <= k <= self.dim:
            raise ComplexError(f"dimension {k} out of range 0..{self.dim}")
        self._ensure_faces()
        return self._faces[k]

    def face_index(self, k: int) -> dict[Face, int]:
        self.faces(k)
        return self._index[k]

    def has_face(self, face: Sequence[int]) -> bool:
        face = tuple(sorted(face))
        if not face:
            return True
        k = len(face) - 1
        if k > self.dim:
            return False
        return face in self.face_index(k)

    def f_vector(self) -> tuple[int, ...]:
        if self.n == 0:
            return ()
        return tuple(len(self.faces(k)) for k in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.f_vector()))

    def is_k_neighbourly(self, k: int) -> bool:
        """True iff every ``k``-subset of vertices spans a face."""
        if k < 1:
            raise ComplexError("neighbourliness needs k >= 1")
        if k - 1 > self.dim:
            return comb(self.n, k) == 0
        return len(self.faces(k - 1)) == comb(self.n, k)

    # -- vertex labels --------------------------------------------------

    def label(self, v: int) -> Hashable:
        return self.labels[v]

    def vertex_id(self, label: Hashable) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ComplexError(f"unknown vertex label {label!r}") from None

    def labelled_facets(self) -> list[list]:
        return [[self.labels[v] for v in f] for f in self.facets]

    # -- derived complexes ---------------------------------------------

    def _sub(self, verts: Sequence[int], faces: Iterable[Face]) -> "SimplicialComplex":
        verts = sorted(verts)
        remap = {v: i for i, v in enumerate(verts)}
        facets = [tuple(remap[v] for v in f) for f in faces]
        facets.extend((remap[v],) for v in verts)
        return SimplicialComplex(len(verts), facets, [self.labels[v] for v in verts])

    def link(self, v: int) -> "SimplicialComplex":
        """Faces ``s`` with ``v`` not in ``s`` and ``s + v`` a face; labels inherited."""
        if not 0 <= v < self.n:
            raise ComplexError(f"unknown vertex {v}")
        lk = [tuple(u for u in f if u != v) for f in self.facets if v in f]
        lk = [f for f in lk if f]
        verts = sorted({u for f in lk for u in f})
        return self._sub(verts, lk)

    def star_facets(self, v: int) -> list[Face]:
        return [f for f in self.facets if v in f]

    def induced(self, vertices: Iterable[int]) -> "SimplicialComplex":
        """Subcomplex of all faces whose vertices lie in ``vertices``."""
        W = set(vertices)
        for v in W:
            if not 0 <= v < self.n:
                raise ComplexError(f"unknown vertex {v}")
        if not W:
            return SimplicialComplex.empty()
        faces = []
        for f in self.facets:
            inside = tuple(u for u in f if u in W)
            if inside:
                faces.append(inside)
        return self._sub(sorted(W), faces)

    def one_skeleton(self) -> Graph:
        edges = self.faces(1) if self.dim >= 1 else ()
        return Graph(self.n, edges)

    def is_pure(self) -> bool:
        return all(len(f) == self.dim + 1 for f in self.facets)

    def ridge_degrees(self) -> dict[Face, list[int]]:
        """Map each (d-1)-face to the indices of the facets containing it."""
        deg: dict[Face, list[int]] = {}
        for i, f in enumerate(self.facets):
            for r in combinations(f, len(f) - 1):
                deg.setdefault(r, []).append(i)
        return deg

    def is_weak_pseudomanifold(self) -> bool:
        return (self.n > 0 and self.is_pure()
                and all(len(fs) <= 2 for fs in self.ridge_degrees().values()))

    def is_closed_pseudomanifold(self) -> bool:
        return (self.n > 0 and self.is_pure()
                and all(len(fs) == 2 for fs in self.ridge_degrees().values()))

    def dual_graph(self) -> Graph:
        """One vertex per facet, one edge per shared ridge."""
        if not self.is_pure():
            raise ComplexError("dual graph needs a pure complex")
        edges = []
        for r, fs in sorted(self.ridge_degrees().items()):
            if len(fs) > 2:
                raise ComplexError(f"ridge {[self.labels[v] for v in r]} lies in {len(fs)} facets")
            if len(fs) == 2:
                edges.append((fs[0], fs[1]))
        return Graph(len(self.facets), edges)

    def is_connected(self) -> bool:
        return self.n > 0 and self.one_skeleton().is_connected()

    # -- comparison -----------------------------------------------------

    def labelled_key(self) -> frozenset:
        return frozenset(frozenset(f) for f in self.labelled_facets())

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.labelled_key() == other.labelled_key()

    def __hash__(self):
        return hash(self.labelled_key())

    def __repr__(self):
        return f"SimplicialComplex(n={self.n}, dim={self.dim}, f={self.f_vector()})"


def build(facet_lists: Iterable[Sequence[Hashable]]) -> SimplicialComplex:
    """Build a complex from facets given as lists of arbitrary vertex labels."""
    facet_lists = [list(f) for f in facet_lists]
    if not facet_lists:
        raise ComplexError("a complex needs at least one facet")
    for f in facet_lists:
        if not f:
            raise ComplexError("empty facet")
        if len(set(f)) != len(f):
            raise ComplexError(f"facet {f} repeats a label")
    seen: dict = {}
    for f in facet_lists:
        for x in f:
            seen.setdefault(x, None)
    labels = _sort_labels(list(seen))
    ids = {x: i for i, x in enumerate(labels)}
    return SimplicialComplex(len(labels), [[ids[x] for x in f] for f in facet_lists], labels)


def f_vector(C: SimplicialComplex) -> tuple[int, ...]:
    return C.f_vector()


def euler_characteristic(C: SimplicialComplex) -> int:
    return C.euler_characteristic()


def is_k_neighbourly(C: SimplicialComplex, k: int) -> bool:
    return C.is_k_neighbourly(k)
