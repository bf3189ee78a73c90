"""Named fixture complexes.

Every generator validates its output (f-vector, link structure, Euler
characteristic) before returning it; a failed check is a construction bug and
raises :class:`FixtureError`.
"""
from __future__ import annotations

import math
from itertools import combinations, product
from typing import Sequence

from .complex import ComplexError, SimplicialComplex, build


class FixtureError(RuntimeError):
    """A generated complex failed its self-validation."""


def _check(cond: bool, msg: str):
    if not cond:
        raise FixtureError(msg)


def is_cycle_graph(C: SimplicialComplex) -> bool:
    """True iff ``C`` is a triangulated circle."""
    if C.n < 3 or C.dim != 1 or not C.is_pure():
        return False
    g = C.one_skeleton()
    return all(g.degree(v) == 2 for v in range(g.n)) and g.is_connected()


def is_closed_surface(C: SimplicialComplex) -> bool:
    """Connected pure 2-complex whose vertex links are all circles."""
    if C.dim != 2 or not C.is_pure() or not C.is_connected():
        return False
    return all(is_cycle_graph(C.link(v)) for v in range(C.n))


def is_2_sphere(C: SimplicialComplex) -> bool:
    return is_closed_surface(C) and C.euler_characteristic() == 2


def boundary_simplex(d: int) -> SimplicialComplex:
    """Boundary of the d-simplex: all d-subsets of d+1 vertices, a (d-1)-sphere."""
    if d < 1:
        raise ComplexError("boundary_simplex needs d >= 1")
    C = build(combinations(range(1, d + 2), d))
    _check(C.f_vector() == tuple(math.comb(d + 1, k + 1) for k in range(d)),
           "boundary simplex f-vector")
    return C


def cross_polytope(d: int) -> SimplicialComplex:
    """Boundary of the d-dimensional cross-polytope: 2d vertices, a (d-1)-sphere.

    Vertex ``i`` and ``i + d`` form the i-th antipodal pair; facets pick one
    vertex from every pair.
    """
    if d < 1:
        raise ComplexError("cross_polytope needs d >= 1")
    facets = [[i + 1 + (d if s else 0) for i, s in enumerate(signs)]
              for signs in product((0, 1), repeat=d)]
    C = build(facets)
    _check(C.f_vector() == tuple(2 ** (k + 1) * math.comb(d, k + 1) for k in range(d)),
           "cross-polytope f-vector")
    return C


def octahedron() -> SimplicialComplex:
    return cross_polytope(3)


def _icosahedron_facets() -> list[tuple[int, int, int]]:
    # 0 top, 1..5 upper ring, 6..10 lower ring (offset by half a step), 11 bottom
    tris = []
    for i in range(5):
        u, u1 = 1 + i, 1 + (i + 1) % 5
        w, w1 = 6 + i, 6 + (i + 1) % 5
        tris += [(0, u, u1), (u, u1, w), (w, w1, u1), (11, w, w1)]
    return tris


def _icosahedron_antipode() -> dict[int, int]:
    anti = {0: 11, 11: 0}
    for i in range(5):
        anti[1 + i] = 6 + (i + 2) % 5
        anti[6 + (i + 2) % 5] = 1 + i
    return anti


def icosahedron() -> SimplicialComplex:
    """Boundary of the icosahedron, labels 0..11."""
    C = build(_icosahedron_facets())
    _check(C.f_vector() == (12, 30, 20), "icosahedron f-vector")
    g = C.one_skeleton()
    _check(all(g.degree(v) == 5 for v in range(12)), "icosahedron is 5-regular")
    _check(all(is_cycle_graph(C.link(v)) and C.link(v).n == 5 for v in range(12)),
           "icosahedron links are 5-cycles")
    _check(is_2_sphere(C), "icosahedron is a 2-sphere")
    return C


def moebius_torus7() -> SimplicialComplex:
    """The 7-vertex torus on Z_7: orbits of {i,i+1,i+3} and {i,i+2,i+3}."""
    facets = []
    for i in range(7):
        facets.append([i, (i + 1) % 7, (i + 3) % 7])
        facets.append([i, (i + 2) % 7, (i + 3) % 7])
    C = build(facets)
    _check(C.f_vector() == (7, 21, 14), "7-vertex torus f-vector")
    _check(C.euler_characteristic() == 0, "7-vertex torus Euler characteristic")
    _check(C.is_k_neighbourly(2), "7-vertex torus is 2-neighbourly")
    _check(is_closed_surface(C), "7-vertex torus is a closed surface")
    _check(all(C.link(v).n == 6 for v in range(7)), "7-vertex torus links are 6-cycles")
    return C


def rp2_6() -> SimplicialComplex:
    """The 6-vertex real projective plane: the icosahedron modulo the antipodal map."""
    anti = _icosahedron_antipode()
    ico = _icosahedron_facets()
    ico_set = {frozenset(t) for t in ico}
    _check(all(frozenset(anti[v] for v in t) in ico_set for t in ico),
           "antipodal map is an automorphism of the icosahedron")
    cls = {}
    for v in range(12):
        cls[v] = min(v, anti[v])
    reps = sorted(set(cls.values()))
    ids = {r: i for i, r in enumerate(reps)}
    facets = {tuple(sorted(ids[cls[v]] for v in t)) for t in ico}
    C = build(sorted(facets))
    _check(C.f_vector() == (6, 15, 10), "RP2_6 f-vector")
    _check(is_closed_surface(C), "RP2_6 is a closed surface")
    _check(C.euler_characteristic() == 1, "RP2_6 Euler characteristic")
    return C


def _glue(base: list[tuple], piece: list[tuple], next_label: int,
          bijection: Sequence[int]) -> tuple[list[tuple], tuple, int]:
    """Remove the first triangle of each, identify the two holes, return the sum."""
    cut = min(base)
    hole = min(piece)
    mapping = {hole[bijection[i]]: cut[i] for i in range(3)}
    for v in sorted({v for t in piece for v in t} - set(hole)):
        mapping[v] = next_label
        next_label += 1
    glued = [t for t in base if t != cut]
    glued += [tuple(sorted(mapping[v] for v in t)) for t in piece if t != hole]
    return glued, cut, next_label


def connected_sum(k: int, l: int, bijection: Sequence[int] = (0, 1, 2)) -> SimplicialComplex:
    """k copies of the icosahedron and l copies of the tetrahedron boundary, summed.

    Each step removes the lexicographically first triangle of the running sum
    and of the next summand and identifies the two boundary 3-cycles, vertex
    ``i`` of the summand's triangle (after ``bijection``) going to vertex ``i``
    of the running sum's triangle.
    """
    if k < 0 or l < 0 or (k, l) == (0, 0):
        raise ComplexError("connected_sum needs k, l >= 0 and (k, l) != (0, 0)")
    if sorted(bijection) != [0, 1, 2]:
        raise ComplexError("bijection must be a permutation of (0, 1, 2)")
    pieces = [_icosahedron_facets()] * k + [list(combinations(range(4), 3))] * l
    facets = [tuple(sorted(t)) for t in pieces[0]]
    next_label = 1 + max(v for t in facets for v in t)
    trios = []
    for piece in pieces[1:]:
        facets, cut, next_label = _glue(facets, [tuple(sorted(t)) for t in piece],
                                        next_label, bijection)
        trios.append(cut)
    C = build(facets)
    _check(C.n == 9 * k + l + 3, "connected sum vertex count")
    _check(is_2_sphere(C), "connected sum is a 2-sphere")
    for trio in trios:
        ids = [C.vertex_id(x) for x in trio]
        _check(all(C.has_face(e) for e in combinations(ids, 2)) and not C.has_face(ids),
               f"gluing trio {trio} spans an induced empty 3-cycle")
    return C


GENERATORS = {
    "boundary_simplex": boundary_simplex,
    "cross_polytope": cross_polytope,
    "octahedron": octahedron,
    "icosahedron": icosahedron,
    "moebius_torus7": moebius_torus7,
    "rp2_6": rp2_6,
    "connected_sum": connected_sum,
}


def gen(name: str, *params: int) -> SimplicialComplex:
    try:
        fn = GENERATORS[name]
    except KeyError:
        raise ComplexError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}") from None
    return fn(*params)
