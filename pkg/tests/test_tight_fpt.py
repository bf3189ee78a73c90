from __future__ import annotations

from itertools import combinations

import pytest

from helpers import closed_surfaces, sphere_bundle, named_fixtures, subdivided_boundary_simplex4
from tightness.complex import ComplexError, build
from tightness.generators import boundary_simplex, moebius_torus7, octahedron, rp2_6
from tightness.homology import F2
from tightness.oracle import is_k_tight_bruteforce, is_tight_bruteforce
from tightness.report import Reason, Verdict
from tightness.tight_fpt import (
    augmented_dual_graph, decide_tight_f2, dual_decomposition, j_tightness_dp,
)
from tightness.treewidth import Kind, validate

FIXTURES = named_fixtures()
SURFACES = closed_surfaces(10)


def f2_rank(vectors) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def min_rank_sum(M, j):
    """Minimum over all W of rank(outside rows) + rank(inside), by direct enumeration."""
    jf = M.faces(j)
    idx = {f: i for i, f in enumerate(jf)}
    up = M.faces(j + 1)
    cols = [sum(1 << idx[t[:i] + t[i + 1:]] for i in range(j + 2)) for t in up]
    best = None
    for r in range(M.n + 1):
        for W in combinations(range(M.n), r):
            Ws = set(W)
            out = sum(1 << i for i, f in enumerate(jf) if not Ws.issuperset(f))
            val = f2_rank(c & out for c in cols) + f2_rank(c for c, t in zip(cols, up) if Ws.issuperset(t))
            if best is None or val < best[0]:
                best = (val, W)
    return best, f2_rank(cols)


def sub_collections(M, limit=6):
    """Connected weak pseudomanifolds obtained by dropping facets of a closed one."""
    out = []
    for drop in range(1, 3):
        for gone in combinations(range(len(M.facets)), drop):
            keep = [M.labelled_facets()[i] for i in range(len(M.facets)) if i not in gone]
            C = build(keep)
            if C.is_connected() and C.is_weak_pseudomanifold():
                out.append(C)
            if len(out) >= limit:
                return out
    return out


def test_enumeration_sizes():
    assert len(closed_surfaces(8)) == 5
    assert len(SURFACES) == 11


def test_augmented_dual_graph_adds_nothing_for_manifolds():
    for M in (moebius_torus7(), boundary_simplex(4), sphere_bundle(3)):
        assert augmented_dual_graph(M).edges() == M.dual_graph().edges()


def test_augmented_dual_graph_connects_pinched_vertex():
    a = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    b = [[0, 4, 5], [0, 4, 6], [0, 5, 6], [4, 5, 6]]
    M = build(a + b)
    assert not M.dual_graph().is_connected()
    assert augmented_dual_graph(M).is_connected()


@pytest.mark.parametrize("name", ["boundary_simplex_4", "moebius_torus7", "rp2_6", "octahedron",
                                  "connected_sum_0_3", "cross_polytope_4", "icosahedron"])
def test_dp_matches_bruteforce_per_degree(name):
    M = FIXTURES[name]
    for j in range(M.dim):
        assert j_tightness_dp(M, j).tight == is_k_tight_bruteforce(M, j, F2)


@pytest.mark.parametrize("idx", range(11))
def test_dp_on_every_small_surface(idx):
    M = SURFACES[idx]
    for j in range(M.dim):
        assert j_tightness_dp(M, j).tight == is_k_tight_bruteforce(M, j, F2)


@pytest.mark.parametrize("idx", range(0, 11, 2))
def test_dp_on_non_closed_sub_collections(idx):
    for C in sub_collections(SURFACES[idx]):
        for j in range(C.dim):
            assert j_tightness_dp(C, j).tight == is_k_tight_bruteforce(C, j, F2)


@pytest.mark.parametrize("name", ["octahedron", "rp2_6", "connected_sum_0_2", "moebius_torus7"])
def test_dp_minimum_equals_enumeration(name):
    M = FIXTURES[name]
    for j in range(M.dim):
        res = j_tightness_dp(M, j)
        (best, _), full = min_rank_sum(M, j)
        assert (res.min_rank_sum, res.rank_full) == (best, full)
        # the reported W attains the minimum
        W = set(res.W)
        jf = M.faces(j)
        idx = {f: i for i, f in enumerate(jf)}
        up = M.faces(j + 1)
        cols = [sum(1 << idx[t[:i] + t[i + 1:]] for i in range(j + 2)) for t in up]
        out = sum(1 << i for i, f in enumerate(jf) if not W.issuperset(f))
        val = f2_rank(c & out for c in cols) + f2_rank(c for c, t in zip(cols, up) if W.issuperset(t))
        assert val == best


def test_degree_out_of_range():
    with pytest.raises(ComplexError):
        j_tightness_dp(moebius_torus7(), 2)


def test_trace_and_sorted_entries():
    M = moebius_torus7()
    T = dual_decomposition(M)
    assert validate(T.as_tree_decomposition(), augmented_dual_graph(M)) is None
    seen = []

    def trace(i, node, st):
        ents = st.sorted_entries()
        assert [k for k, _ in ents] == sorted(st.entries)
        assert all(set(k.selection) <= st.vertices for k, _ in ents)
        seen.append(node.kind)

    j_tightness_dp(M, 1, T, trace=trace)
    assert seen[-1] is Kind.ROOT and len(seen) == len(T.nodes)


def test_leaf_triples():
    M = boundary_simplex(3)
    T = dual_decomposition(M)
    leaf_state = []

    def trace(i, node, st):
        if node.kind is Kind.LEAF and not leaf_state:
            leaf_state.append(st)

    j_tightness_dp(M, 1, T, trace=trace)
    st = leaf_state[0]
    faces = M.faces(1)
    full = max(st.entries, key=lambda k: len(k.selection))
    assert len(full.selection) == 3
    triples = list(st.triples(full, faces))
    assert len(triples) == 8  # every subset of the three edges
    cycle = [t for t in triples if len(t[0]) == 3][0]
    # the triangle boundary is a cycle and is filled inside W
    assert cycle[1] == frozenset() and frozenset() in cycle[2]
    empty = [t for t in triples if not t[0]][0]
    assert frozenset() in empty[2]


def test_decide_examples():
    assert decide_tight_f2(moebius_torus7()).verdict is Verdict.TIGHT
    assert decide_tight_f2(rp2_6()).verdict is Verdict.TIGHT
    rep = decide_tight_f2(octahedron())
    assert rep.verdict is Verdict.NOT_TIGHT and rep.reason is Reason.NOT_2_NEIGHBOURLY
    assert rep.certificate["W"] == [1, 4] and rep.witness.recheck(octahedron())
    assert rep.algorithm == "fptd"


def test_decide_rejects_bad_input():
    with pytest.raises(ComplexError):
        decide_tight_f2(build([[1, 2, 3], [1, 2, 4], [1, 2, 5]]))
    with pytest.raises(ComplexError):
        decide_tight_f2(build([[1, 2, 3], [4, 5, 6]]))


@pytest.mark.parametrize("name", ["boundary_simplex_4", "sphere_bundle_3", "connected_sum_0_3"])
def test_shortcuts_do_not_change_verdict(name):
    M = FIXTURES[name]
    assert decide_tight_f2(M, shortcuts=True).verdict == decide_tight_f2(M, shortcuts=False).verdict


def test_obstruction_is_sound():
    # subdivided boundary of the 4-simplex: not 2-neighbourly, F2 obstruction in degree 0
    M = subdivided_boundary_simplex4()
    rep = decide_tight_f2(M)
    assert rep.verdict is Verdict.NOT_TIGHT
    assert rep.witness.recheck(M)
    assert is_tight_bruteforce(M, F2).verdict is Verdict.NOT_TIGHT


def test_higher_degree_obstruction_is_sound():
    for M in SURFACES:
        if not M.is_k_neighbourly(2) or not M.is_connected():
            continue
        rep = decide_tight_f2(M, shortcuts=False)
        assert rep.verdict == is_tight_bruteforce(M, F2).verdict
        if rep.verdict is Verdict.NOT_TIGHT:
            ob, wit = rep.witness
            assert ob.j >= 1 and wit.recheck(M)
    for C in (c for M in SURFACES for c in sub_collections(M, 3)):
        if C.is_k_neighbourly(2):
            res = j_tightness_dp(C, 1)
            assert res.tight == is_k_tight_bruteforce(C, 1, F2)


def test_punctured_torus_has_degree_one_obstruction():
    T = moebius_torus7()
    M = build(T.labelled_facets()[1:])
    assert M.is_k_neighbourly(2)
    rep = decide_tight_f2(M)
    assert rep.verdict is Verdict.NOT_TIGHT and rep.reason is Reason.HOMOLOGY_OBSTRUCTION
    ob, wit = rep.witness
    assert ob.j == 1 and ob.rank_sum < ob.rank_full
    assert wit.recheck(M) and rep.certificate["k"] == 1
    assert not is_k_tight_bruteforce(M, 1, F2)
