"""Signed graphs with a sink: Laplacians, switching, balance, TU-subgraphs."""

from collections import Counter, deque
from dataclasses import dataclass, field
from enum import IntEnum
from itertools import combinations

from .errors import (
    DimensionError,
    DisconnectedGraphError,
    GraphStructureError,
    PreconditionError,
    ResourceLimitError,
    UnknownVertexError,
)
from .linalg import Matrix, det

TU_EDGE_LIMIT = 25


class Sign(IntEnum):
    POSITIVE = 1
    NEGATIVE = -1

    @classmethod
    def parse(cls, token):
        if token in ("+", "+1", "pos", "positive", 1):
            return cls.POSITIVE
        if token in ("-", "-1", "neg", "negative", -1):
            return cls.NEGATIVE
        raise ValueError(f"unknown sign {token!r}")

    @property
    def symbol(self):
        return "+" if self is Sign.POSITIVE else "-"


@dataclass(frozen=True)
class SignedGraph:
    """Simple signed graph with a designated sink.

    ``edges`` is a sorted tuple of ``(u, v, sign)`` with vertex indices
    ``u < v``.  Vertex order (and hence Laplacian row order) is the order of
    ``vertex_names``.
    """

    vertex_names: tuple
    sink: int
    edges: tuple
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(str(v) for v in self.vertex_names)
        object.__setattr__(self, "vertex_names", names)
        if len(set(names)) != len(names):
            raise GraphStructureError("duplicate vertex names")
        if not 0 <= self.sink < len(names):
            raise GraphStructureError(f"sink index {self.sink} out of range")
        norm = []
        seen = set()
        for u, v, s in self.edges:
            if u == v:
                raise GraphStructureError(f"loop at vertex {names[u]}")
            u, v = min(u, v), max(u, v)
            if not (0 <= u and v < len(names)):
                raise GraphStructureError(f"edge ({u}, {v}) references a missing vertex")
            if (u, v) in seen:
                raise GraphStructureError(f"parallel edge {names[u]}-{names[v]}")
            seen.add((u, v))
            norm.append((u, v, Sign(s)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        adj = {i: {} for i in range(len(names))}
        for u, v, s in self.edges:
            adj[u][v] = s
            adj[v][u] = s
        object.__setattr__(self, "_adj", adj)

    @classmethod
    def from_edges(cls, edges, sink, vertices=None):
        """Build from name-based ``(u, v, sign)`` triples.

        Vertex order is ``vertices`` if given, else first appearance in
        ``edges`` (the sink counts as appearing wherever it first occurs).
        """
        order = list(vertices) if vertices is not None else []
        for u, v, _ in edges:
            for w in (u, v):
                if w not in order:
                    order.append(w)
        if sink not in order:
            order.append(sink)
        index = {name: i for i, name in enumerate(order)}
        triples = [(index[u], index[v], Sign.parse(s) if not isinstance(s, Sign) else s)
                   for u, v, s in edges]
        return cls(tuple(order), index[sink], tuple(triples))

    @property
    def num_vertices(self):
        return len(self.vertex_names)

    @property
    def nonsink(self):
        """Vertex indices of the nonsink vertices, in Laplacian row order."""
        return tuple(i for i in range(self.num_vertices) if i != self.sink)

    @property
    def sink_name(self):
        return self.vertex_names[self.sink]

    def index_of(self, vertex):
        if isinstance(vertex, int) and not isinstance(vertex, bool):
            if 0 <= vertex < self.num_vertices:
                return vertex
            raise UnknownVertexError(f"vertex index {vertex} out of range")
        try:
            return self.vertex_names.index(str(vertex))
        except ValueError:
            raise UnknownVertexError(f"unknown vertex {vertex!r}") from None

    def neighbors(self, i):
        return self._adj[i]

    def degree(self, i):
        return len(self._adj[i])

    def sign(self, u, v):
        return self._adj[u].get(v)

    def underlying(self):
        """|G|: the same graph with every edge positive."""
        return SignedGraph(self.vertex_names, self.sink,
                           tuple((u, v, Sign.POSITIVE) for u, v, _ in self.edges))

    def same_underlying(self, other):
        return (self.vertex_names == other.vertex_names and self.sink == other.sink
                and [(u, v) for u, v, _ in self.edges] == [(u, v) for u, v, _ in other.edges])

    def with_signs(self, signs):
        """Copy with the edge signs replaced, in ``self.edges`` order."""
        signs = list(signs)
        if len(signs) != len(self.edges):
            raise DimensionError(f"expected {len(self.edges)} signs, got {len(signs)}")
        return SignedGraph(self.vertex_names, self.sink,
                           tuple((u, v, Sign(s)) for (u, v, _), s in zip(self.edges, signs)))

    def named_edges(self):
        return [(self.vertex_names[u], self.vertex_names[v], s) for u, v, s in self.edges]

    def is_connected(self, without_sink=False):
        verts = set(self.nonsink if without_sink else range(self.num_vertices))
        if not verts:
            return True
        start = min(verts)
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in self._adj[x]:
                if y in verts and y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen == verts

    def require_connected(self):
        if not self.is_connected():
            raise DisconnectedGraphError("graph is not connected")

    def is_negative(self):
        """True if every edge avoiding the sink is negative."""
        return all(s is Sign.NEGATIVE for u, v, s in self.edges if self.sink not in (u, v))


def reduced_laplacians(g: SignedGraph):
    """Reduced signed Laplacian L and reduced Laplacian M of |G|.

    Rows/columns follow ``g.nonsink``.
    """
    if g.num_vertices < 2:
        raise DimensionError("reduced Laplacian needs at least two vertices")
    idx = {v: k for k, v in enumerate(g.nonsink)}
    n = len(idx)
    lap = [[0] * n for _ in range(n)]
    unsigned = [[0] * n for _ in range(n)]
    for v, k in idx.items():
        lap[k][k] = unsigned[k][k] = g.degree(v)
    for u, v, s in g.edges:
        if u in idx and v in idx:
            a, b = idx[u], idx[v]
            lap[a][b] = lap[b][a] = -int(s)
            unsigned[a][b] = unsigned[b][a] = -1
    return Matrix(lap), Matrix(unsigned)


def switch_vertex(g: SignedGraph, vertex) -> SignedGraph:
    i = g.index_of(vertex)
    return SignedGraph(g.vertex_names, g.sink,
                       tuple((u, v, Sign(-s) if i in (u, v) else s) for u, v, s in g.edges))


def bfs_tree(g: SignedGraph):
    """Spanning-tree edges ``(parent, child)`` of a BFS from the sink.

    Neighbours are visited in index order.  Raises if ``g`` is disconnected.
    """
    parent = {g.sink: None}
    order = []
    queue = deque([g.sink])
    while queue:
        x = queue.popleft()
        for y in sorted(g.neighbors(x)):
            if y not in parent:
                parent[y] = x
                order.append((x, y))
                queue.append(y)
    if len(parent) != g.num_vertices:
        raise DisconnectedGraphError("graph is not connected")
    return order


def canonical_switch_rep(g: SignedGraph, modulo_sink=False) -> SignedGraph:
    """Member of g's switching class that is positive on the BFS tree.

    With ``modulo_sink`` the signs of edges at the sink are treated as free
    (they never enter L): only nonsink vertices are switched, each component
    of G minus the sink is made positive on a BFS tree rooted at its lowest
    vertex, and every sink edge is reported positive.
    """
    signs = {(u, v): s for u, v, s in g.edges}

    def flip(c):
        for y in g.neighbors(c):
            key = (min(c, y), max(c, y))
            signs[key] = Sign(-signs[key])

    if not modulo_sink:
        for p, c in bfs_tree(g):
            if signs[min(p, c), max(p, c)] is Sign.NEGATIVE:
                flip(c)
    else:
        g.require_connected()
        for p, c in _nonsink_forest(g):
            if signs[min(p, c), max(p, c)] is Sign.NEGATIVE:
                flip(c)
        for key in signs:
            if g.sink in key:
                signs[key] = Sign.POSITIVE
    return SignedGraph(g.vertex_names, g.sink, tuple((u, v, s) for (u, v), s in signs.items()))


def _nonsink_forest(g):
    seen = {g.sink}
    order = []
    for root in g.nonsink:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in sorted(g.neighbors(x)):
                if y not in seen:
                    seen.add(y)
                    order.append((x, y))
                    queue.append(y)
    return order


def is_balanced(g: SignedGraph, modulo_sink=False) -> bool:
    """Switching equivalent to |G|.

    ``modulo_sink=True`` asks the weaker question that governs L: is
    G minus the sink balanced (so that L is diagonally similar to M)?
    """
    return all(s is Sign.POSITIVE for _, _, s in canonical_switch_rep(g, modulo_sink).edges)


def switching_equivalent(g1: SignedGraph, g2: SignedGraph, modulo_sink=False) -> bool:
    if not g1.same_underlying(g2):
        raise GraphStructureError("switching equivalence needs identical underlying graphs")
    return canonical_switch_rep(g1, modulo_sink) == canonical_switch_rep(g2, modulo_sink)


def switching_class_reps(g: SignedGraph):
    """One signed graph per switching class on g's underlying graph.

    These are exactly the graphs positive on the BFS tree, one for each sign
    assignment to the non-tree edges (2^(|E|-|V|+1) of them).
    """
    tree = {(min(p, c), max(p, c)) for p, c in bfs_tree(g)}
    free = [k for k, (u, v, _) in enumerate(g.edges) if (u, v) not in tree]
    reps = []
    for mask in range(1 << len(free)):
        signs = [Sign.POSITIVE] * len(g.edges)
        for bit, k in enumerate(free):
            if mask >> bit & 1:
                signs[k] = Sign.NEGATIVE
        reps.append(g.with_signs(signs))
    return reps


def spanning_tree_count(g: SignedGraph) -> int:
    g.require_connected()
    return det(reduced_laplacians(g)[1])


@dataclass(frozen=True)
class TUCount:
    total: int
    by_cycle_count: dict


def _classify_tu(num_vertices, sink, edge_pairs):
    """Number of unicyclic components if the spanning subgraph is a valid
    TU-subgraph (one tree component holding the sink, every other component
    unicyclic with an odd cycle), else None."""
    parent = list(range(num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edge_pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    comp_vertices = Counter(find(x) for x in range(num_vertices))
    comp_edges = Counter(find(u) for u, _ in edge_pairs)
    sink_root = find(sink)
    if comp_edges[sink_root] != comp_vertices[sink_root] - 1:
        return None
    unicyclic = 0
    for root, nv in comp_vertices.items():
        if root == sink_root:
            continue
        if comp_edges[root] != nv:
            return None
        if not _cycle_is_odd([(u, v) for u, v in edge_pairs if find(u) == root]):
            return None
        unicyclic += 1
    return unicyclic


def _cycle_is_odd(edges):
    """Length parity of the unique cycle of a connected unicyclic edge set."""
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    # strip leaves until only the cycle remains
    deg = {x: len(ys) for x, ys in adj.items()}
    leaves = [x for x, d in deg.items() if d == 1]
    alive = set(adj)
    while leaves:
        x = leaves.pop()
        alive.discard(x)
        for y in adj[x]:
            if y in alive:
                deg[y] -= 1
                if deg[y] == 1:
                    leaves.append(y)
    return len(alive) % 2 == 1


def tu_subgraph_sum(g: SignedGraph, edge_limit=TU_EDGE_LIMIT) -> TUCount:
    """Weighted count of spanning TU-subgraphs of a negative graph.

    Brute force over all edge subsets of size n (n = nonsink count); the
    weighted total equals det L for negative graphs.
    """
    if not g.is_negative():
        raise PreconditionError("TU-subgraph count is only defined here for negative graphs")
    if len(g.edges) > edge_limit:
        raise ResourceLimitError(f"{len(g.edges)} edges exceeds the TU enumeration limit {edge_limit}",
                                 limit=edge_limit)
    n = g.num_vertices - 1
    pairs = [(u, v) for u, v, _ in g.edges]
    by = Counter()
    for subset in combinations(pairs, n):
        c = _classify_tu(g.num_vertices, g.sink, subset)
        if c is not None:
            by[c] += 1
    total = sum(count * 4 ** c for c, count in by.items())
    return TUCount(total=total, by_cycle_count=dict(sorted(by.items())))
