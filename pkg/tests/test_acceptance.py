"""Acceptance suite: one test per criterion, each with its runtime bound.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.
"""
from __future__ import annotations

import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest

from helpers import closed_surfaces, cycle_complex, named_fixtures, subdivided_boundary_simplex4
from tightness.cli import EXIT_INPUT, EXIT_NA, EXIT_OK, EXIT_USAGE, run
from tightness.complex import Graph
from tightness.decide import (
    ANY, _cut, decide_tight_3, decide_tight_4, empty_triangles, sigma0_tight3_formula, split_link,
)
from tightness.generators import (
    boundary_simplex, connected_sum, cross_polytope, icosahedron, moebius_torus7, rp2_6,
)
from tightness.homology import F2, F3, FieldSpec, IntegralHomology, Q, betti, betti_from_integral, integral_homology
from tightness.oracle import is_tight_bruteforce, mu1, sigma0_bruteforce, sigma0_graph_bruteforce, sigma_vector_bruteforce
from tightness.report import Reason, Verdict
from tightness.sigma_fpt import sigma0_treewidth
from tightness.tight_fpt import decide_tight_f2
from tightness.treewidth import decompose, make_nice, nice_decomposition, validate

acceptance = pytest.mark.acceptance
FIX = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


@contextmanager
def within(seconds: float):
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    assert elapsed < seconds, f"took {elapsed:.2f} s, bound {seconds} s"


def graph_adj(G):
    adj = [0] * G.n
    for a, b in G.edges():
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    return adj


@acceptance(1, "convention triangulation of sigma_0 and mu_1")
def test_criterion_01_conventions():
    with within(1.0):
        assert sigma_vector_bruteforce(boundary_simplex(3))[0] == -1
        assert sigma_vector_bruteforce(cycle_complex(6))[0] == 1
        assert sigma_vector_bruteforce(connected_sum(0, 2))[0] == Fraction(-9, 10)
        S, T = boundary_simplex(4), moebius_torus7()
        assert mu1(S) == 0 == betti(S, 1, Q)
        assert mu1(T) == 2 == betti(T, 1, Q)


@acceptance(2, "prefactor variant of the link sigma_0 formula")
def test_criterion_02_prefactor():
    cases = [(0, 1), (0, 2), (0, 3), (1, 0), (1, 1)]
    with within(30.0):
        truth = {kl: sigma0_bruteforce(connected_sum(*kl)) for kl in cases}
        matching = [v for v in ("printed", "corrected")
                    if all(sigma0_tight3_formula(*kl, variant=v) == truth[kl] for kl in cases)]
        assert matching == ["corrected"]
        assert all(sigma0_tight3_formula(*kl) == truth[kl] for kl in cases)


@acceptance(3, "gluing additivity and cut-order invariance")
def test_criterion_03_additivity():
    for k, l in [(0, 2), (0, 3), (1, 1)]:
        C = connected_sum(k, l)
        tri = empty_triangles(C)[-1]
        C1, C2 = _cut(C, tri)
        K = C.induced(tri)
        s = {X: sigma0_bruteforce(X) for X in (C, C1, C2, K)}
        rhs = (C.n + 1) * (s[C1] / (C1.n + 1) + s[C2] / (C2.n + 1) - s[K] / (K.n + 1))
        assert s[C] == rhs
        base = split_link(C)
        for seed in range(10):
            dec = split_link(C, random.Random(seed))
            assert (dec.k, dec.l, dec.other) == (base.k, base.l, base.other) == (k, l, 0)


@acceptance(4, "poly3 end to end against brute force")
def test_criterion_04_poly3():
    with within(5.0):
        S = boundary_simplex(4)
        for F in (Q, F2, F3):
            rep = decide_tight_3(S, F)
            assert rep.verdict is Verdict.TIGHT
            assert is_tight_bruteforce(S, F).verdict is Verdict.TIGHT
        for M in (cross_polytope(4), subdivided_boundary_simplex4()):
            rep = decide_tight_3(M, F2)
            assert rep.verdict is Verdict.NOT_TIGHT and rep.reason is Reason.NOT_2_NEIGHBOURLY
            assert is_tight_bruteforce(M, F2).verdict is Verdict.NOT_TIGHT


@acceptance(5, "sigma_0 treewidth DP equals brute force")
def test_criterion_05_sigma_fpt():
    rng = random.Random(20240)

    def conservation(i, node, table, visited):
        assert sum(sum(cells.values()) for cells in table.values()) == 2 ** visited

    with within(60.0):
        graphs = []
        for _ in range(200):
            n = rng.randint(1, 15)
            p = rng.uniform(0.1, 0.9)
            graphs.append((Graph(n, [e for e in combinations(range(n), 2) if rng.random() < p]), None))
        graphs += [
            (Graph(4, combinations(range(4), 2)), Fraction(-1)),
            (cycle_complex(6).one_skeleton(), Fraction(1)),
            (icosahedron().one_skeleton(), Fraction(47, 33)),
            (Graph(5, combinations(range(5), 2)), Fraction(-1)),
        ]
        for G, expect in graphs:
            got = sigma0_treewidth(G, G.n, nice_decomposition(G, "min_fill"), trace=conservation)
            assert got == sigma0_graph_bruteforce(graph_adj(G))
            if expect is not None:
                assert got == expect


@acceptance(6, "4-dimensional pipeline")
def test_criterion_06_fpt4():
    with within(5.0):
        rep = decide_tight_4(boundary_simplex(5), ANY)
        assert rep.verdict is Verdict.TIGHT and rep.mu1 == 0
        for v in range(6):
            assert boundary_simplex(5).link(v).one_skeleton().num_edges == 10  # K5
        rep = decide_tight_4(cross_polytope(5), ANY)
        assert rep.verdict is Verdict.NOT_TIGHT and rep.reason is Reason.NOT_2_NEIGHBOURLY


@acceptance(7, "F2 treewidth DP equals brute force")
def test_criterion_07_tight_fpt():
    fixtures = [boundary_simplex(d) for d in range(2, 6)]
    fixtures += [cross_polytope(d) for d in range(2, 5)]
    fixtures += [moebius_torus7(), rp2_6()] + [connected_sum(0, l) for l in (1, 2, 3)]
    with within(600.0):
        surfaces = closed_surfaces(8)
        assert len(surfaces) == 5
        disagreements = 0
        for M in fixtures + surfaces:
            if decide_tight_f2(M).verdict is not is_tight_bruteforce(M, F2).verdict:
                disagreements += 1
        assert disagreements == 0


@acceptance(8, "homology kernel consistency")
def test_criterion_08_homology():
    fixtures = named_fixtures()
    with within(10.0):
        assert integral_homology(rp2_6(), 1) == IntegralHomology(0, (2,))
        for C in fixtures.values():
            hs = [integral_homology(C, k) for k in range(C.dim + 1)]
            for p in (2, 3, 5):
                F = FieldSpec(p)
                direct = [betti(C, k, F) for k in range(C.dim + 1)]
                via = [betti_from_integral(hs[k], hs[k - 1] if k else None, F) for k in range(C.dim + 1)]
                assert direct == via
            for F in (Q, F2, F3, FieldSpec(5)):
                chi = sum((-1) ** k * betti(C, k, F) for k in range(C.dim + 1))
                assert chi == C.euler_characteristic()


@acceptance(9, "treewidth toolchain")
def test_criterion_09_treewidth():
    rng = random.Random(99)
    with within(60.0):
        for _ in range(200):
            n = rng.randint(1, 16)
            p = rng.uniform(0.1, 0.9)
            G = Graph(n, [e for e in combinations(range(n), 2) if rng.random() < p])
            for s in ("min_degree", "min_fill"):
                T = decompose(G, s)
                assert validate(T, G) is None
                N = make_nice(T, G)
                assert N.structural_violation() is None and N.width() == T.width()
                if n <= 12:
                    assert decompose(G, "exact_small").width() <= T.width()


@acceptance(10, "CLI golden reports and exit codes")
def test_criterion_10_cli(capsys, tmp_path):
    for name in ("boundary_simplex_4", "octahedron", "moebius_torus7", "rp2_6", "connected_sum_0_2"):
        argv = ["tight", str(FIX / f"{name}.cplx"), "--field", "2", "--json", "--certificate"]
        outs = []
        for _ in range(2):
            assert run(argv) == EXIT_OK
            outs.append(capsys.readouterr().out)
        assert outs[0] == outs[1] == (GOLDEN / f"{name}.json").read_text()
        json.loads(outs[0])
    bad = tmp_path / "bad.cplx"
    bad.write_text("1 1 2\n")
    assert run(["info", str(bad)]) == EXIT_INPUT
    assert run(["no-such-command"]) == EXIT_USAGE
    assert run(["tight", str(FIX / "boundary_simplex_4.cplx"), "--method", "fptd", "--field", "q"]) == EXIT_NA
    capsys.readouterr()
