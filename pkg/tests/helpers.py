"""Extra complexes used only by the tests."""
from __future__ import annotations

from itertools import combinations

from tightness.complex import build


def sphere_bundle(d: int):
    """The (2d+3)-vertex cyclic triangulation of the d-dimensional sphere bundle over S^1.

    Facets are {i, ..., i+d+1} minus {i+j}, 1 <= j <= d, over Z_{2d+3}.
    d=2 is the 7-vertex torus, d=3 the non-orientable 9-vertex 3-manifold,
    d=4 an 11-vertex S^3 x S^1.
    """
    n = 2 * d + 3
    facets = []
    for i in range(n):
        block = [(i + t) % n for t in range(d + 2)]
        for j in range(1, d + 1):
            facets.append([v for t, v in enumerate(block) if t != j])
    return build(facets)


def subdivided_boundary_simplex4():
    """Boundary of the 4-simplex with one tetrahedron replaced by a cone over its boundary."""
    facets = [f for f in combinations(range(1, 6), 4) if f != (1, 2, 3, 4)]
    facets += [tuple(t) + (6,) for t in combinations((1, 2, 3, 4), 3)]
    return build(facets)


def mapping_torus_boundary4(perm=(1, 0, 2, 3, 4), layers: int = 3):
    """Boundary of the 4-simplex times an interval, ends glued by ``perm``.

    Each prism over a tetrahedron is cut into four 4-simplices by the
    staircase rule; an odd ``perm`` makes the result non-orientable.
    """
    def vert(t, i):
        if t == layers:
            return (0, perm[i])
        return (t, i)

    facets = []
    for t in range(layers):
        for sigma in combinations(range(5), 4):
            for k in range(4):
                facets.append([vert(t, a) for a in sigma[: k + 1]] + [vert(t + 1, a) for a in sigma[k:]])
    return build(facets)


def cycle_complex(n: int):
    return build([[i, (i + 1) % n] for i in range(n)])


def closed_surfaces(max_facets: int = 8):
    """Every connected closed 2-dimensional weak pseudomanifold with at most ``max_facets`` triangles.

    Grown from one triangle by repeatedly closing the least edge that lies in a
    single triangle, with either an existing or a fresh third vertex.  This
    reaches every complex whose dual graph is connected; the only other case
    within 8 facets, two tetrahedron boundaries sharing a vertex, is appended.
    Isomorphic duplicates are removed with networkx.
    """
    import networkx as nx
    from networkx.algorithms.isomorphism import categorical_node_match

    found = []

    def grow(tris: list, deg: dict, nv: int):
        open_edges = sorted(e for e, c in deg.items() if c == 1)
        if not open_edges:
            found.append(list(tris))
            return
        if len(tris) == max_facets:
            return
        a, b = open_edges[0]
        for w in range(nv + 1):
            if w in (a, b):
                continue
            t = tuple(sorted((a, b, w)))
            if t in tris:
                continue
            e1, e2 = tuple(sorted((a, w))), tuple(sorted((b, w)))
            if deg.get(e1, 0) >= 2 or deg.get(e2, 0) >= 2:
                continue
            for e in ((a, b), e1, e2):
                deg[e] = deg.get(e, 0) + 1
            tris.append(t)
            grow(tris, deg, max(nv, w + 1))
            tris.pop()
            for e in ((a, b), e1, e2):
                deg[e] -= 1
                if not deg[e]:
                    del deg[e]

    grow([(0, 1, 2)], {(0, 1): 1, (0, 2): 1, (1, 2): 1}, 3)
    if max_facets >= 8:
        wedge = [t for t in combinations(range(4), 3)] + [t for t in combinations((0, 4, 5, 6), 3)]
        found.append(wedge)

    def incidence(tris):
        g = nx.Graph()
        for i, t in enumerate(tris):
            g.add_node(("f", i), kind="f")
            for v in t:
                g.add_node(("v", v), kind="v")
                g.add_edge(("f", i), ("v", v))
        return g

    match = categorical_node_match("kind", None)
    reps: list = []
    for tris in found:
        g = incidence(tris)
        if not any(len(tris) == len(r[0]) and nx.is_isomorphic(g, r[1], node_match=match) for r in reps):
            reps.append((tris, g))
    return [build(tris) for tris, _ in reps]


def named_fixtures() -> dict:
    """Every generated fixture plus the extra test complexes, by name."""
    from tightness import generators as g

    return {
        "boundary_simplex_2": g.boundary_simplex(2),
        "boundary_simplex_3": g.boundary_simplex(3),
        "boundary_simplex_4": g.boundary_simplex(4),
        "boundary_simplex_5": g.boundary_simplex(5),
        "cross_polytope_2": g.cross_polytope(2),
        "octahedron": g.octahedron(),
        "cross_polytope_4": g.cross_polytope(4),
        "icosahedron": g.icosahedron(),
        "moebius_torus7": g.moebius_torus7(),
        "rp2_6": g.rp2_6(),
        "connected_sum_0_2": g.connected_sum(0, 2),
        "connected_sum_0_3": g.connected_sum(0, 3),
        "connected_sum_1_1": g.connected_sum(1, 1),
        "sphere_bundle_3": sphere_bundle(3),
        "subdivided_boundary_simplex_4": subdivided_boundary_simplex4(),
    }


def cyclic_polytope_boundary4(n: int):
    """Boundary of the cyclic 4-polytope on n vertices (Gale evenness)."""
    facets = []
    for S in combinations(range(n), 4):
        gaps = [x for x in range(n) if x not in S]
        if all(sum(1 for x in S if a < x < b) % 2 == 0 for a, b in combinations(gaps, 2)):
            facets.append(S)
    return build(facets)


def neighbourly_sphere8_with_octahedral_piece():
    """A 2-neighbourly 8-vertex 3-sphere, found by bistellar flips from the cyclic one,
    with a vertex link that does not split into tetrahedron and icosahedron pieces."""
    facets = [
        (0, 1, 2, 3), (0, 1, 2, 7), (0, 1, 3, 5), (0, 1, 5, 6), (0, 1, 6, 7), (0, 2, 3, 5),
        (0, 2, 5, 7), (0, 4, 5, 6), (0, 4, 5, 7), (0, 4, 6, 7), (1, 2, 3, 4), (1, 2, 4, 7),
        (1, 3, 4, 7), (1, 3, 5, 6), (1, 3, 6, 7), (2, 3, 4, 6), (2, 3, 5, 6), (2, 4, 5, 6),
        (2, 4, 5, 7), (3, 4, 6, 7),
    ]
    return build(facets)
