"""F2-tightness of weak pseudomanifolds by dynamic programming over the dual graph.

For a degree j, the map H_j(M[W]) -> H_j(M) fails to be injective exactly when

    rank d_{j+1}(M) restricted to rows of j-faces not inside W
  + rank d_{j+1}(M[W])
  < rank d_{j+1}(M).

The DP minimises the left-hand side over all vertex subsets W.  Both ranks
are accumulated column by column along a nice tree decomposition of the dual
graph: a column can only raise the rank if it lies outside the part of the
current span supported on rows that are still in play ("pending" rows), and
that part is all a state needs to remember.  A state is therefore the set of
selected bag vertices plus two such pending subspaces, stored as reduced F2
bases of bitmasks over global j-face ids.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from .complex import ComplexError, Graph, SimplicialComplex
from .homology import F2
from .linalg import F2Basis, rank_f2
from .oracle import injectivity_witness
from .report import Reason, TightnessReport, Verdict
from .treewidth import Kind, NiceTreeDecomposition, make_nice, decompose

Basis = tuple[int, ...]


@dataclass(frozen=True, order=True)
class StateKey:
    selection: tuple[int, ...]   # selected complex vertices inside the bag, sorted
    ambient: Basis               # pending part of the span of all processed columns, rows outside W
    inner: Basis                 # pending part of the span of processed columns inside W


@dataclass
class BagState:
    """All DP entries at one node; values are (rank sum, forgotten selected vertices)."""

    node: int
    facets: frozenset[int]
    vertices: frozenset[int]
    jfaces: frozenset[int]
    entries: dict[StateKey, tuple[int, tuple[int, ...]]]

    def sorted_entries(self) -> list[tuple[StateKey, tuple[int, tuple[int, ...]]]]:
        return sorted(self.entries.items())

    def triples(self, key: StateKey, faces: tuple) -> Iterator[tuple[frozenset, frozenset, list[frozenset]]]:
        """Chain-level view of the inner space of one entry.

        Yields (A, b, completions): A ranges over sets of pending j-faces spanned
        by the selection, b is the mod-2 boundary of A, and the completions are
        the sets C of pending j-faces disjoint from A for which A + C lies in the
        span of the processed boundaries inside W.  ``faces`` maps j-face ids to
        vertex tuples.
        """
        sel = set(key.selection)
        ids = sorted(i for i in self.jfaces if set(faces[i]) <= sel)
        basis = F2Basis.from_key(key.inner)
        for r in range(len(ids) + 1):
            for A in combinations(ids, r):
                amask = sum(1 << i for i in A)
                b: set = set()
                for i in A:
                    for sub in combinations(faces[i], len(faces[i]) - 1):
                        b ^= {sub}
                rest = [i for i in ids if i not in A]
                comps = []
                for s in range(len(rest) + 1):
                    for Cs in combinations(rest, s):
                        if (amask | sum(1 << i for i in Cs)) in basis:
                            comps.append(frozenset(faces[i] for i in Cs))
                yield frozenset(faces[i] for i in A), frozenset(b), comps


@dataclass
class Obstruction:
    j: int
    bag: int
    W: tuple[int, ...]
    rank_sum: int
    rank_full: int


@dataclass
class DPResult:
    j: int
    min_rank_sum: int
    rank_full: int
    W: tuple[int, ...]
    max_entries: int
    root: int

    @property
    def tight(self) -> bool:
        return self.min_rank_sum >= self.rank_full


def augmented_dual_graph(M: SimplicialComplex) -> Graph:
    """Dual graph plus edges making the facets around every face connected.

    For combinatorial manifolds nothing is added.  The extra edges guarantee
    that in any tree decomposition the bags meeting a given face form a
    subtree, which the DP relies on.
    """
    base = M.dual_graph()
    adj = {i: set(base.neighbours(i)) for i in range(base.n)}
    stars: dict[tuple, list[int]] = {}
    for fi, f in enumerate(M.facets):
        for k in range(1, len(f)):
            for s in combinations(f, k):
                stars.setdefault(s, []).append(fi)
    extra = []
    for s in sorted(stars):
        fs = stars[s]
        inside = set(fs)
        comps, seen = [], set()
        for start in fs:
            if start in seen:
                continue
            seen.add(start)
            stack, comp = [start], [start]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w in inside and w not in seen:
                        seen.add(w)
                        stack.append(w)
                        comp.append(w)
            comps.append(min(comp))
        for a, b in zip(comps, comps[1:]):
            adj[a].add(b)
            adj[b].add(a)
            extra.append((a, b))
    return Graph(base.n, [(a, b) for a in adj for b in adj[a] if a < b])


class _Pass:
    """One DP pass for a fixed degree j."""

    def __init__(self, M: SimplicialComplex, j: int):
        self.M = M
        self.j = j
        self.jfaces = M.faces(j)
        self.jidx = M.face_index(j)
        self.upfaces = M.faces(j + 1) if j + 1 <= M.dim else ()
        self.upidx = M.face_index(j + 1) if j + 1 <= M.dim else {}
        self.col = [sum(1 << self.jidx[t[:i] + t[i + 1:]] for i in range(j + 2))
                    for t in self.upfaces]
        # per facet: its vertices, j-face ids and (j+1)-face ids
        self.f_verts = [frozenset(f) for f in M.facets]
        self.f_j = [frozenset(self.jidx[s] for s in combinations(f, j + 1)) for f in M.facets]
        self.f_up = [frozenset(self.upidx[s] for s in combinations(f, j + 2)) if j + 2 <= len(f)
                     else frozenset() for f in M.facets]
        self.rank_full = rank_f2(self.col)
        self.max_entries = 0

    def _union(self, facets, attr):
        out: set = set()
        for f in facets:
            out |= attr[f]
        return frozenset(out)

    def _store(self, entries, key, cost, wit):
        cur = entries.get(key)
        if cur is None or (cost, wit) < cur:
            entries[key] = (cost, wit)

    def introduce(self, st: BagState | None, node: int, facet: int) -> BagState:
        if st is None:
            old_f, old_v, old_j, old_up = frozenset(), frozenset(), frozenset(), frozenset()
            entries = {StateKey((), (), ()): (0, ())}
        else:
            old_f, old_v, old_j = st.facets, st.vertices, st.jfaces
            old_up = self._union(old_f, self.f_up)
            entries = st.entries
        new_f = old_f | {facet}
        new_v = old_v | self.f_verts[facet]
        new_j = old_j | self.f_j[facet]
        fresh_v = sorted(self.f_verts[facet] - old_v)
        fresh_up = sorted(self.f_up[facet] - old_up)
        up_faces = [(self.upfaces[t], self.col[t]) for t in fresh_up]
        out: dict = {}
        for key, (cost, wit) in entries.items():
            for r in range(len(fresh_v) + 1):
                for chosen in combinations(fresh_v, r):
                    sel = set(key.selection) | set(chosen)
                    amb = F2Basis.from_key(key.ambient)
                    inn = F2Basis.from_key(key.inner)
                    c = cost
                    for verts, col in up_faces:
                        # rows of j-faces not inside W
                        masked = col
                        for i in range(len(verts)):
                            sub = verts[:i] + verts[i + 1:]
                            if sel.issuperset(sub):
                                masked &= ~(1 << self.jidx[sub])
                        if masked and amb.add(masked):
                            c += 1
                        if sel.issuperset(verts) and inn.add(col):
                            c += 1
                    self._store(out, StateKey(tuple(sorted(sel)), amb.key(), inn.key()), c, wit)
        return BagState(node, new_f, new_v, new_j, out)

    def forget(self, st: BagState, node: int, facet: int) -> BagState:
        new_f = st.facets - {facet}
        new_v = self._union(new_f, self.f_verts)
        new_j = self._union(new_f, self.f_j)
        gone_v = st.vertices - new_v
        gone_mask = 0
        for i in st.jfaces - new_j:
            gone_mask |= 1 << i
        keep = ~gone_mask
        out: dict = {}
        for key, (cost, wit) in st.entries.items():
            amb = F2Basis.from_key(key.ambient)
            inn = F2Basis.from_key(key.inner)
            if gone_mask:
                amb = amb.restrict(keep)
                inn = inn.restrict(keep)
            sel = tuple(v for v in key.selection if v not in gone_v)
            left = tuple(v for v in key.selection if v in gone_v)
            w = tuple(sorted(wit + left)) if left else wit
            self._store(out, StateKey(sel, amb.key(), inn.key()), cost, w)
        return BagState(node, new_f, new_v, new_j, out)

    def join(self, a: BagState, b: BagState, node: int) -> BagState:
        by_sel: dict[tuple, list] = {}
        for key, val in b.entries.items():
            by_sel.setdefault(key.selection, []).append((key, val))
        out: dict = {}
        for k1, (c1, w1) in a.entries.items():
            amb1 = F2Basis.from_key(k1.ambient)
            inn1 = F2Basis.from_key(k1.inner)
            for k2, (c2, w2) in by_sel.get(k1.selection, ()):
                amb = amb1.sum(F2Basis.from_key(k2.ambient))
                inn = inn1.sum(F2Basis.from_key(k2.inner))
                overlap = (len(amb1) + len(k2.ambient) - len(amb)
                           + len(inn1) + len(k2.inner) - len(inn))
                w = tuple(sorted(w1 + w2))
                self._store(out, StateKey(k1.selection, amb.key(), inn.key()), c1 + c2 - overlap, w)
        return BagState(node, a.facets, a.vertices, a.jfaces, out)

    def run(self, T: NiceTreeDecomposition, trace=None) -> DPResult:
        states: dict[int, BagState] = {}
        final: BagState | None = None
        for i, nd in enumerate(T.nodes):
            if nd.kind is Kind.LEAF:
                (f,) = nd.bag
                st = self.introduce(None, i, f)
            elif nd.kind is Kind.INTRODUCE:
                st = self.introduce(states.pop(nd.children[0]), i, nd.vertex)
            elif nd.kind is Kind.FORGET:
                st = self.forget(states.pop(nd.children[0]), i, nd.vertex)
            elif nd.kind is Kind.JOIN:
                st = self.join(states.pop(nd.children[0]), states.pop(nd.children[1]), i)
            else:
                st = states.pop(nd.children[0])
                for f in sorted(nd.bag):
                    st = self.forget(st, i, f)
                final = st
            self.max_entries = max(self.max_entries, len(st.entries))
            if trace:
                trace(i, nd, st)
            states[i] = st
        assert final is not None
        keys = set(final.entries)
        if keys != {StateKey((), (), ())}:
            raise ComplexError(f"residual entries at the root: {sorted(keys)[:3]}")
        cost, W = final.entries[StateKey((), (), ())]
        return DPResult(self.j, cost, self.rank_full, W, self.max_entries, T.root)


def dual_decomposition(M: SimplicialComplex, strategy: str = "min_fill") -> NiceTreeDecomposition:
    G = augmented_dual_graph(M)
    return make_nice(decompose(G, strategy), G)


def j_tightness_dp(M: SimplicialComplex, j: int, T: NiceTreeDecomposition | None = None,
                   trace=None) -> DPResult:
    """Run the DP for degree ``j``; ``result.tight`` is False iff an obstruction exists."""
    if not 0 <= j < M.dim:
        raise ComplexError(f"degree {j} out of range 0..{M.dim - 1}")
    T = T or dual_decomposition(M)
    return _Pass(M, j).run(T, trace)


def _check_input(M: SimplicialComplex):
    if not M.is_weak_pseudomanifold():
        raise ComplexError("input is not a weak pseudomanifold")
    if not M.is_connected():
        raise ComplexError("input is disconnected; decide each component separately")


def decide_tight_f2(M: SimplicialComplex, shortcuts: bool = True,
                    strategy: str = "min_fill") -> TightnessReport:
    """Decide F2-tightness of a connected weak pseudomanifold.

    Degree 0 is 2-neighbourliness and the top degree always holds; the DP runs
    for the degrees in between, lowest first, stopping at the first failure.
    With ``shortcuts`` a (j+2)-neighbourly input skips degree j, since then
    every induced subcomplex has vanishing H_j.
    """
    _check_input(M)
    d = M.dim
    notes = []
    if not M.is_k_neighbourly(2):
        g = M.one_skeleton()
        u, v = next((a, b) for a, b in combinations(range(M.n), 2) if not g.has_edge(a, b))
        wit = injectivity_witness(M, (u, v), 0, F2)
        cert = {"j": 0, **wit.to_dict(M)}
        return TightnessReport(Verdict.NOT_TIGHT, "fptd", F2.name, Reason.NOT_2_NEIGHBOURLY,
                               certificate=cert, witness=wit)
    T = dual_decomposition(M, strategy) if d >= 2 else None
    if T is not None:
        notes.append(f"dual graph decomposition width {T.width()}")
    for j in range(1, d):
        if shortcuts and M.is_k_neighbourly(j + 2):
            notes.append(f"j={j}: skipped, input is {j + 2}-neighbourly")
            continue
        res = j_tightness_dp(M, j, T)
        notes.append(f"j={j}: at most {res.max_entries} entries per bag")
        if not res.tight:
            wit = injectivity_witness(M, res.W, j, F2)
            cert = {"j": j, "bag": res.root, **wit.to_dict(M)}
            ob = Obstruction(j, res.root, res.W, res.min_rank_sum, res.rank_full)
            return TightnessReport(Verdict.NOT_TIGHT, "fptd", F2.name, Reason.HOMOLOGY_OBSTRUCTION,
                                   certificate=cert, notes=notes, witness=(ob, wit))
    return TightnessReport(Verdict.TIGHT, "fptd", F2.name, notes=notes)
