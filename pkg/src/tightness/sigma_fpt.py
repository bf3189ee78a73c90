"""sigma_0 by dynamic programming over a nice tree decomposition of the 1-skeleton.

A table maps a partition key (the selected bag vertices, split into the
components they lie in so far) to counts ``N[(c, m)]``: how many vertex
subsets of the processed part have that trace on the bag, ``m`` vertices and
``c`` components.  Components whose vertices were all forgotten stay counted
in ``c`` but no longer appear in the key.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Callable

from .complex import ComplexError, Graph, SimplicialComplex
from .oracle import EMPTY_REDUCED_BETTI0
from .treewidth import Kind, NiceTreeDecomposition, nice_decomposition, validate

Key = tuple[tuple[int, ...], ...]
Cells = dict[tuple[int, int], int]
Table = dict[Key, Cells]


def canonical(blocks) -> Key:
    return tuple(sorted(tuple(sorted(b)) for b in blocks if b))


def _add(table: Table, key: Key, cell: tuple[int, int], count: int):
    cells = table.setdefault(key, {})
    cells[cell] = cells.get(cell, 0) + count


def leaf_table(v: int) -> Table:
    return {(): {(0, 0): 1}, ((v,),): {(1, 1): 1}}


def introduce_step(table: Table, v: int, G: Graph) -> Table:
    """Either leave ``v`` out, or add it and merge the blocks holding its neighbours."""
    nb = set(G.neighbours(v))
    out: Table = {}
    for key, cells in table.items():
        touching = [b for b in key if nb.intersection(b)]
        rest = [b for b in key if not nb.intersection(b)]
        merged = tuple(x for b in touching for x in b) + (v,)
        new_key = canonical(rest + [merged])
        for (c, m), cnt in cells.items():
            _add(out, key, (c, m), cnt)
            _add(out, new_key, (c - len(touching) + 1, m + 1), cnt)
    return out


def forget_step(table: Table, v: int) -> Table:
    out: Table = {}
    for key, cells in table.items():
        new_key = canonical(tuple(x for x in b if x != v) for b in key)
        for cell, cnt in cells.items():
            _add(out, new_key, cell, cnt)
    return out


def _partition_join(p1: Key, p2: Key) -> Key:
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in p1 + p2:
        for x in b:
            parent.setdefault(x, x)
        for x in b[1:]:
            ra, rb = find(b[0]), find(x)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)
    return canonical(groups.values())


def join_step(left: Table, right: Table) -> Table:
    """Combine subsets with the same selected bag vertices from both subtrees."""
    by_support: dict[frozenset, list[Key]] = {}
    for key in right:
        by_support.setdefault(frozenset(x for b in key for x in b), []).append(key)
    out: Table = {}
    for k1, cells1 in left.items():
        S = frozenset(x for b in k1 for x in b)
        for k2 in by_support.get(S, ()):
            cells2 = right[k2]
            j = _partition_join(k1, k2)
            for (c1, m1), n1 in cells1.items():
                for (c2, m2), n2 in cells2.items():
                    c = (c1 - len(k1)) + (c2 - len(k2)) + len(j)
                    _add(out, j, (c, m1 + m2 - len(S)), n1 * n2)
    return out


def sigma0_from_counts(counts: Cells, n: int) -> Fraction:
    """sigma_0 from the final (empty-key) cells; the empty subset gives the -1."""
    total = Fraction(EMPTY_REDUCED_BETTI0)
    for (c, m), cnt in counts.items():
        if m >= 1 and c > 1:
            total += Fraction(cnt * (c - 1), comb(n, m))
    return total


def run_tables(G: Graph, T: NiceTreeDecomposition,
               trace: Callable[[int, object, Table, int], None] | None = None) -> Cells:
    """Run the DP; return the cells of the final empty key.

    ``trace(i, node, table, visited)`` is called after every node, where
    ``visited`` is the number of graph vertices seen below and at node ``i``.
    """
    tables: dict[int, Table] = {}
    visited: dict[int, frozenset] = {}
    pending = [0] * len(T.nodes)
    for nd in T.nodes:
        for c in nd.children:
            pending[c] += 1
    result: Table = {}
    for i, nd in enumerate(T.nodes):
        kids = nd.children
        if nd.kind is Kind.LEAF:
            (v,) = nd.bag
            tab = leaf_table(v)
            seen = frozenset(nd.bag)
        elif nd.kind is Kind.INTRODUCE:
            tab = introduce_step(tables[kids[0]], nd.vertex, G)
            seen = visited[kids[0]] | {nd.vertex}
        elif nd.kind is Kind.FORGET:
            tab = forget_step(tables[kids[0]], nd.vertex)
            seen = visited[kids[0]]
        elif nd.kind is Kind.JOIN:
            tab = join_step(tables[kids[0]], tables[kids[1]])
            seen = visited[kids[0]] | visited[kids[1]]
        else:
            tab = tables[kids[0]]
            for v in sorted(nd.bag):
                tab = forget_step(tab, v)
            seen = visited[kids[0]]
            result = tab
        for c in kids:
            del tables[c], visited[c]
        tables[i], visited[i] = tab, seen
        if trace:
            trace(i, nd, tab, len(seen))
    if set(result) != {()}:
        raise ComplexError("residual non-empty keys at the root")
    return result[()]


def sigma0_treewidth(G: Graph, n: int, T: NiceTreeDecomposition,
                     trace=None, check: bool = True) -> Fraction:
    """Exact sigma_0 of any complex with 1-skeleton ``G`` on ``n`` vertices."""
    if check:
        bad = validate(T.as_tree_decomposition(), G) or T.structural_violation()
        if bad:
            raise ComplexError(f"invalid nice decomposition: {bad}")
    return sigma0_from_counts(run_tables(G, T, trace), n)


def sigma0_fpt(C: SimplicialComplex, strategy: str = "min_fill") -> Fraction:
    """Convenience wrapper: decompose the 1-skeleton of ``C`` and run the DP."""
    if C.n == 0:
        return Fraction(EMPTY_REDUCED_BETTI0)
    G = C.one_skeleton()
    return sigma0_treewidth(G, C.n, nice_decomposition(G, strategy), check=False)
