"""Tree decompositions: construction by elimination orderings, validation, nice form."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from .complex import ComplexError, Graph

EXACT_SMALL_LIMIT = 12


@dataclass
class TreeDecomposition:
    bags: list[frozenset[int]]
    edges: list[tuple[int, int]] = field(default_factory=list)

    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


def width(T) -> int:
    return T.width()


@dataclass(frozen=True)
class Violation:
    condition: str  # "tree", "vertex coverage", "edge coverage" or "subtree property"
    witness: object

    def __str__(self):
        return f"{self.condition} violated at {self.witness!r}"


# -- elimination orderings -----------------------------------------------------

def _fill_in(nbrs: dict[int, set[int]], v: int) -> int:
    ns = sorted(nbrs[v])
    return sum(1 for i, a in enumerate(ns) for b in ns[i + 1:] if b not in nbrs[a])


def elimination_order(G: Graph, strategy: str = "min_degree") -> list[int]:
    """Greedy elimination order; ties broken by the smaller vertex id."""
    nbrs = {v: set(G.neighbours(v)) for v in range(G.n)}
    order = []
    while nbrs:
        if strategy == "min_degree":
            v = min(nbrs, key=lambda u: (len(nbrs[u]), u))
        elif strategy == "min_fill":
            v = min(nbrs, key=lambda u: (_fill_in(nbrs, u), len(nbrs[u]), u))
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        _eliminate(nbrs, v)
        order.append(v)
    return order


def _eliminate(nbrs: dict[int, set[int]], v: int) -> set[int]:
    ns = nbrs.pop(v)
    for a in ns:
        nbrs[a].discard(v)
        nbrs[a].update(ns - {a})
    return ns


def from_elimination_order(G: Graph, order: list[int]) -> TreeDecomposition:
    """Bag of v = v plus its neighbours at elimination time; parent = first-eliminated of those."""
    pos = {v: i for i, v in enumerate(order)}
    nbrs = {v: set(G.neighbours(v)) for v in range(G.n)}
    bags, parent = [], []
    for v in order:
        ns = _eliminate(nbrs, v)
        bags.append(frozenset(ns | {v}))
        parent.append(min((pos[u] for u in ns), default=None))
    edges = [(i, p) for i, p in enumerate(parent) if p is not None]
    # separate components: chain their roots together
    roots = [i for i, p in enumerate(parent) if p is None]
    edges += [(roots[i], roots[i + 1]) for i in range(len(roots) - 1)]
    return TreeDecomposition(bags, sorted(edges))


def _exact_order(G: Graph) -> list[int]:
    """Optimal elimination order by dynamic programming over vertex subsets."""
    n = G.n
    adj = [0] * n
    for v in range(n):
        for u in G.neighbours(v):
            adj[v] |= 1 << u
    full = (1 << n) - 1

    def q_size(S: int, v: int) -> int:
        # vertices outside S + v reachable from v through S
        seen = 1 << v
        stack = [v]
        out = 0
        while stack:
            u = stack.pop()
            nb = adj[u] & ~seen
            seen |= nb
            out |= nb & ~S
            inner = nb & S
            while inner:
                b = inner & -inner
                stack.append(b.bit_length() - 1)
                inner ^= b
        return bin(out).count("1")

    INF = n + 1
    tw = [INF] * (1 << n)
    choice = [-1] * (1 << n)
    tw[0] = -1
    for S in range(1, 1 << n):
        bits = S
        while bits:
            b = bits & -bits
            v = b.bit_length() - 1
            bits ^= b
            rest = S ^ b
            val = max(tw[rest], q_size(rest, v))
            if val < tw[S]:
                tw[S] = val
                choice[S] = v
    order = []
    S = full
    while S:
        v = choice[S]
        order.append(v)
        S ^= 1 << v
    return order[::-1]


def decompose(G: Graph, strategy: str = "min_degree") -> TreeDecomposition:
    """A valid tree decomposition of ``G``.

    ``exact_small`` returns an optimal one and is limited to 12 vertices.
    """
    if G.n == 0:
        raise ComplexError("cannot decompose the empty graph")
    if strategy == "exact_small":
        if G.n > EXACT_SMALL_LIMIT:
            raise ComplexError(f"exact_small handles at most {EXACT_SMALL_LIMIT} vertices, got {G.n}")
        order = _exact_order(G)
    else:
        order = elimination_order(G, strategy)
    return from_elimination_order(G, order)


# -- validation -------------------------------------------------------------

def _tree_violation(n_bags: int, edges: Iterable[tuple[int, int]]) -> Violation | None:
    edges = list(edges)
    if n_bags == 0:
        return Violation("tree", "no bags")
    if len(edges) != n_bags - 1:
        return Violation("tree", f"{len(edges)} edges for {n_bags} bags")
    g = Graph(n_bags, edges)
    if not g.is_connected():
        return Violation("tree", "bag tree is disconnected")
    return None


def validate(T: TreeDecomposition, G: Graph) -> Violation | None:
    """None if ``T`` is a tree decomposition of ``G``, else the first violated condition."""
    v = _tree_violation(len(T.bags), T.edges)
    if v:
        return v
    covered = set().union(*T.bags) if T.bags else set()
    for x in range(G.n):
        if x not in covered:
            return Violation("vertex coverage", x)
    for a, b in G.edges():
        if not any(a in bag and b in bag for bag in T.bags):
            return Violation("edge coverage", (a, b))
    tree = Graph(len(T.bags), T.edges)
    for x in range(G.n):
        holding = [i for i, bag in enumerate(T.bags) if x in bag]
        sub = set(holding)
        seen = {holding[0]}
        stack = [holding[0]]
        while stack:
            i = stack.pop()
            for j in tree.neighbours(i):
                if j in sub and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != len(sub):
            return Violation("subtree property", x)
    return None


# -- nice decompositions ------------------------------------------------------

class Kind(str, enum.Enum):
    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"
    ROOT = "root"


@dataclass(frozen=True)
class NiceNode:
    kind: Kind
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: int | None = None  # the introduced or forgotten vertex


@dataclass
class NiceTreeDecomposition:
    """Typed bags in bottom-up order: every child index is below its parent's."""

    nodes: list[NiceNode]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    def width(self) -> int:
        return max(len(n.bag) for n in self.nodes) - 1

    def as_tree_decomposition(self) -> TreeDecomposition:
        edges = [(c, i) for i, nd in enumerate(self.nodes) for c in nd.children]
        return TreeDecomposition([nd.bag for nd in self.nodes], edges)

    def structural_violation(self) -> str | None:
        """Check the typed-bag rules; return a description of the first failure."""
        for i, nd in enumerate(self.nodes):
            if any(c >= i for c in nd.children):
                return f"node {i} is not above its children"
            kids = [self.nodes[c].bag for c in nd.children]
            if nd.kind is Kind.LEAF:
                ok = not kids and len(nd.bag) == 1
            elif nd.kind is Kind.INTRODUCE:
                ok = (len(kids) == 1 and nd.vertex not in kids[0]
                      and nd.bag == kids[0] | {nd.vertex})
            elif nd.kind is Kind.FORGET:
                ok = (len(kids) == 1 and nd.vertex in kids[0]
                      and nd.bag == kids[0] - {nd.vertex})
            elif nd.kind is Kind.JOIN:
                ok = len(kids) == 2 and kids[0] == nd.bag == kids[1]
            else:
                ok = i == self.root and len(kids) == 1 and kids[0] == nd.bag and len(nd.bag) == 1
            if not ok:
                return f"node {i} ({nd.kind.value}) breaks its bag rule"
        if self.nodes[self.root].kind is not Kind.ROOT:
            return "last node is not the root"
        return None


def make_nice(T: TreeDecomposition, G: Graph) -> NiceTreeDecomposition:
    """Convert a valid decomposition into nice form of the same width."""
    bad = validate(T, G)
    if bad:
        raise ComplexError(f"invalid tree decomposition: {bad}")
    m = len(T.bags)
    tree = Graph(m, T.edges)
    root = m - 1
    parent = [-1] * m
    order = []  # preorder from the root
    stack = [root]
    seen = [False] * m
    seen[root] = True
    while stack:
        t = stack.pop()
        order.append(t)
        for u in sorted(tree.neighbours(t), reverse=True):
            if not seen[u]:
                seen[u] = True
                parent[u] = t
                stack.append(u)
    children: list[list[int]] = [[] for _ in range(m)]
    for t in order[1:]:
        children[parent[t]].append(t)
    for c in children:
        c.sort()

    nodes: list[NiceNode] = []

    def add(kind, bag, kids=(), vertex=None) -> int:
        nodes.append(NiceNode(kind, frozenset(bag), tuple(kids), vertex))
        return len(nodes) - 1

    def leaf_chain(bag) -> int:
        vs = sorted(bag)
        cur = add(Kind.LEAF, {vs[0]})
        for i in range(1, len(vs)):
            cur = add(Kind.INTRODUCE, set(vs[: i + 1]), (cur,), vs[i])
        return cur

    def move(cur: int, target: frozenset) -> int:
        bag = set(nodes[cur].bag)
        for v in sorted(bag - target):
            bag.discard(v)
            cur = add(Kind.FORGET, bag, (cur,), v)
        for v in sorted(target - bag):
            bag.add(v)
            cur = add(Kind.INTRODUCE, bag, (cur,), v)
        return cur

    top: dict[int, int] = {}
    for t in reversed(order):  # children before parents
        bag = T.bags[t]
        if not children[t]:
            if bag:
                top[t] = leaf_chain(bag)
                continue
            raise ComplexError("empty leaf bag")
        chains = [move(top[c], bag) for c in children[t]]
        cur = chains[0]
        for other in chains[1:]:
            cur = add(Kind.JOIN, bag, (cur, other))
        top[t] = cur
    cur = top[root]
    bag = set(nodes[cur].bag)
    if not bag:
        raise ComplexError("root bag is empty")
    for v in sorted(bag)[1:]:
        bag.discard(v)
        cur = add(Kind.FORGET, bag, (cur,), v)
    add(Kind.ROOT, bag, (cur,))
    return NiceTreeDecomposition(nodes)


def nice_decomposition(G: Graph, strategy: str = "min_degree") -> NiceTreeDecomposition:
    return make_nice(decompose(G, strategy), G)
