"""Multigraphs with loops and parallel edges, plus the structural operations
needed for reliability work: minors, bridges, cut vertices, blocks,
degree-2 suppression, named families and canonical keys.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .canon import canonical_bytes
from .errors import DomainError

Edge = tuple[int, int]


@dataclass(frozen=True)
class Multigraph:
    """Vertex count plus an edge multiset.

    Edges are stored with ``u <= v``; ``u == v`` is a loop and repeated
    pairs are parallel edges. Edge indices refer to positions in ``edges``.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"vertex count must be nonnegative, got {self.n}")
        norm = []
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DomainError(f"edge {(u, v)} out of range for n={self.n}")
            norm.append((u, v) if u <= v else (v, u))
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_matrix(cls, adj: Sequence[Sequence[int]]) -> "Multigraph":
        n = len(adj)
        edges = []
        for u in range(n):
            for v in range(u, n):
                edges.extend([(u, v)] * adj[u][v])
        return cls(n, tuple(edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def corank(self) -> int:
        """m - n + c, which is m - n + 1 for connected graphs."""
        return self.m - self.n + len(self.components())

    def mult_matrix(self) -> list[list[int]]:
        adj = [[0] * self.n for _ in range(self.n)]
        for u, v in self.edges:
            adj[u][v] += 1
            if u != v:
                adj[v][u] += 1
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbors(self) -> list[list[tuple[int, int]]]:
        """Incidence lists of ``(neighbor, edge index)``; loops omitted."""
        nbrs: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            if u != v:
                nbrs[u].append((v, i))
                nbrs[v].append((u, i))
        return nbrs

    def components(self) -> list[list[int]]:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            a, b = find(u), find(v)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def is_connected(self) -> bool:
        return self.n >= 1 and len(self.components()) == 1

    def is_simple(self) -> bool:
        return all(u != v for u, v in self.edges) and len(set(self.edges)) == self.m

    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)

    def without_loops(self) -> "Multigraph":
        return Multigraph(self.n, tuple(e for e in self.edges if e[0] != e[1]))

    def relabel(self, perm: Sequence[int]) -> "Multigraph":
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        return Multigraph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))

    def induced(self, vertices: Sequence[int]) -> "Multigraph":
        index = {v: i for i, v in enumerate(vertices)}
        return Multigraph(
            len(vertices),
            tuple((index[u], index[v]) for u, v in self.edges if u in index and v in index),
        )

    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    def __repr__(self) -> str:
        return f"Multigraph(n={self.n}, edges={list(self.sorted_edges())})"


class GraphClass(enum.Enum):
    CONNECTED = "connected"
    TWO_EDGE_CONNECTED = "2ec"
    TWO_CONNECTED = "2c"

    @classmethod
    def parse(cls, text: str) -> "GraphClass":
        aliases = {
            "connected": cls.CONNECTED, "c": cls.CONNECTED,
            "2ec": cls.TWO_EDGE_CONNECTED, "two-edge-connected": cls.TWO_EDGE_CONNECTED,
            "2c": cls.TWO_CONNECTED, "two-connected": cls.TWO_CONNECTED,
            "biconnected": cls.TWO_CONNECTED,
        }
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise DomainError(f"unknown graph class {text!r}") from None


class Corank2Type(enum.Enum):
    THETA = "theta"
    TWO_CYCLES_AT_VERTEX = "two-cycles-at-vertex"
    NOT_APPLICABLE = "not-applicable"


# ---------------------------------------------------------------------------
# minors


def edge_minor(G: Multigraph, e: int, mode: str) -> Multigraph:
    """Delete or contract edge ``e``. Contracting a loop deletes it."""
    if not 0 <= e < G.m:
        raise DomainError(f"edge index {e} out of range (m={G.m})")
    if mode not in ("delete", "contract"):
        raise DomainError(f"mode must be 'delete' or 'contract', got {mode!r}")
    rest = G.edges[:e] + G.edges[e + 1:]
    u, v = G.edges[e]
    if mode == "delete" or u == v:
        return Multigraph(G.n, rest)
    # merge v into u, then close the gap left by v
    def f(x):
        if x == v:
            x = u
        return x - 1 if x > v else x

    return Multigraph(G.n - 1, tuple((f(a), f(b)) for a, b in rest))


def delete_vertex(G: Multigraph, x: int) -> Multigraph:
    def f(a):
        return a - 1 if a > x else a

    return Multigraph(G.n - 1, tuple((f(a), f(b)) for a, b in G.edges if x not in (a, b)))


# ---------------------------------------------------------------------------
# bridges, cut vertices, blocks


def _lowpoint_dfs(G: Multigraph):
    """Iterative DFS yielding discovery times, lowpoints and tree-parent edges."""
    nbrs = G.neighbors()
    disc = [-1] * G.n
    low = [0] * G.n
    parent_edge = [-1] * G.n
    parent = [-1] * G.n
    order = []
    t = 0
    for root in range(G.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = t
        t += 1
        order.append(root)
        stack = [(root, iter(nbrs[root]))]
        while stack:
            x, it = stack[-1]
            advanced = False
            for y, ei in it:
                if ei == parent_edge[x]:
                    continue
                if disc[y] == -1:
                    disc[y] = low[y] = t
                    t += 1
                    parent[y] = x
                    parent_edge[y] = ei
                    order.append(y)
                    stack.append((y, iter(nbrs[y])))
                    advanced = True
                    break
                low[x] = min(low[x], disc[y])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[x])
    return disc, low, parent, parent_edge, order


def bridges(G: Multigraph) -> set[int]:
    """Indices of edges whose deletion disconnects ``G`` (linear time)."""
    if not G.is_connected():
        raise DomainError("bridges() requires a connected graph")
    disc, low, parent, parent_edge, _ = _lowpoint_dfs(G)
    return {parent_edge[v] for v in range(G.n)
            if parent_edge[v] != -1 and low[v] > disc[parent[v]]}


def bridges_bruteforce(G: Multigraph) -> set[int]:
    """Reference implementation: delete each edge and test connectivity."""
    if not G.is_connected():
        raise DomainError("bridges() requires a connected graph")
    return {i for i in range(G.m) if not edge_minor(G, i, "delete").is_connected()}


def cut_vertices(G: Multigraph) -> set[int]:
    disc, low, parent, _, _ = _lowpoint_dfs(G)
    cuts = set()
    children = [0] * G.n
    for v in range(G.n):
        p = parent[v]
        if p == -1:
            continue
        children[p] += 1
        if parent[p] != -1 and low[v] >= disc[p]:
            cuts.add(p)
    for v in range(G.n):
        if parent[v] == -1 and children[v] > 1:
            cuts.add(v)
    return cuts


def blocks(G: Multigraph) -> list[list[int]]:
    """Edge-index lists of the blocks (maximal 2-connected pieces).

    Loops are ignored; each bundle of parallel edges lies in one block.
    """
    nbrs = G.neighbors()
    disc = [-1] * G.n
    low = [0] * G.n
    out: list[list[int]] = []
    t = 0
    for root in range(G.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = t
        t += 1
        estack: list[int] = []
        stack = [(root, -1, iter(nbrs[root]))]
        while stack:
            x, pe, it = stack[-1]
            advanced = False
            for y, ei in it:
                if ei == pe:
                    continue
                if disc[y] == -1:
                    estack.append(ei)
                    disc[y] = low[y] = t
                    t += 1
                    stack.append((y, ei, iter(nbrs[y])))
                    advanced = True
                    break
                if disc[y] < disc[x]:
                    estack.append(ei)
                    low[x] = min(low[x], disc[y])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[x])
                    if low[x] >= disc[p]:
                        comp = []
                        while True:
                            ei = estack.pop()
                            comp.append(ei)
                            if ei == pe:
                                break
                        out.append(comp)
    return out


def connected_rows(G: Multigraph, alive: np.ndarray) -> np.ndarray:
    """Vectorised connectivity test.

    ``alive`` is a boolean (N, m) array of surviving-edge patterns; returns a
    length-N boolean array telling whether each surviving subgraph spans G
    connectedly. Min-label propagation, at most n - 1 sweeps.
    """
    N = alive.shape[0]
    labels = np.tile(np.arange(G.n, dtype=np.int32), (N, 1))
    live = [(i, u, v) for i, (u, v) in enumerate(G.edges) if u != v]
    for _ in range(max(G.n - 1, 1)):
        changed = False
        for i, u, v in live:
            a = alive[:, i]
            lu, lv = labels[:, u], labels[:, v]
            lo = np.minimum(lu, lv)
            nu = np.where(a, lo, lu)
            nv = np.where(a, lo, lv)
            if not changed and (np.any(nu != lu) or np.any(nv != lv)):
                changed = True
            labels[:, u] = nu
            labels[:, v] = nv
        if not changed:
            break
    return np.all(labels == 0, axis=1)


def classify(G: Multigraph) -> set[GraphClass]:
    """Connectivity classes: connected, 2-edge-connected, 2-connected (n >= 3)."""
    if not G.is_connected():
        return set()
    out = {GraphClass.CONNECTED}
    if not bridges(G):
        out.add(GraphClass.TWO_EDGE_CONNECTED)
    if G.n >= 3 and not cut_vertices(G):
        out.add(GraphClass.TWO_CONNECTED)
    return out


# ---------------------------------------------------------------------------
# degree-2 suppression and corank-2 structure


def suppress_degree_two(G: Multigraph) -> Multigraph:
    """Replace degree-2 vertices by a single edge between their neighbours
    until none remain or one vertex is left. Corank is unchanged."""
    if not G.is_connected():
        raise DomainError("suppress_degree_two() requires a connected graph")
    while G.n > 1:
        deg = G.degrees()
        x = next((v for v in range(G.n) if deg[v] == 2), None)
        if x is None:
            break
        inc = [e for e in G.edges if x in e]
        if len(inc) == 1:
            break  # a lone loop; only possible when x is isolated
        ends = [b if a == x else a for a, b in inc]
        y, z = ends
        rest = tuple(e for e in G.edges if x not in e) + ((y, z),)
        G = delete_vertex(Multigraph(G.n, rest), x)
    return G


def classify_corank2(G: Multigraph) -> Corank2Type:
    """Theta graph or two cycles sharing a vertex (bridgeless, corank 2)."""
    if not G.is_connected() or G.corank != 2 or bridges(G):
        return Corank2Type.NOT_APPLICABLE
    S = suppress_degree_two(G)
    if S.n == 1 and S.m == 2:
        return Corank2Type.TWO_CYCLES_AT_VERTEX
    if S.n == 2 and S.sorted_edges() == ((0, 1),) * 3:
        return Corank2Type.THETA
    return Corank2Type.NOT_APPLICABLE


def theta_lengths(G: Multigraph) -> list[int]:
    """Sorted path lengths of a theta graph (two degree-3 vertices joined by
    three internally disjoint paths)."""
    deg = G.degrees()
    ends = [v for v in range(G.n) if deg[v] == 3]
    if len(ends) != 2 or any(d not in (2, 3) for d in deg) or G.has_loops():
        raise DomainError("not a theta graph")
    x, y = ends
    inc: list[list[int]] = [[] for _ in range(G.n)]
    for i, (a, b) in enumerate(G.edges):
        inc[a].append(i)
        inc[b].append(i)
    lengths = []
    for first in inc[x]:
        prev_e, cur, length = first, x, 0
        while True:
            a, b = G.edges[prev_e]
            cur = b if a == cur else a
            length += 1
            if cur == y:
                break
            if cur == x:
                raise DomainError("not a theta graph")
            prev_e = next(e for e in inc[cur] if e != prev_e)
        lengths.append(length)
    return sorted(lengths)


# ---------------------------------------------------------------------------
# named families


@dataclass(frozen=True)
class Tree:
    n: int
    shape: str = "path"


@dataclass(frozen=True)
class Cycle:
    n: int


@dataclass(frozen=True)
class Bundle:
    m: int


@dataclass(frozen=True)
class Theta:
    l1: int
    l2: int
    l3: int


@dataclass(frozen=True)
class TwoCyclesAtVertex:
    a: int
    b: int


@dataclass(frozen=True)
class PendantCycle:
    """Cycle C_{k+1} with pendant vertices added until the order is ``n``."""

    k: int
    n: int


@dataclass(frozen=True)
class Complete:
    n: int


FamilySpec = Union[Tree, Cycle, Bundle, Theta, TwoCyclesAtVertex, PendantCycle, Complete]


def _path_edges(start: int, end: int, length: int, next_free: int) -> tuple[list[Edge], int]:
    """Edges of a ``start``-``end`` path with ``length`` edges and fresh interior."""
    verts = [start] + list(range(next_free, next_free + length - 1)) + [end]
    return list(zip(verts, verts[1:])), next_free + length - 1


def make_family(spec: FamilySpec) -> Multigraph:
    if isinstance(spec, Tree):
        if spec.n < 1:
            raise DomainError("Tree needs n >= 1")
        if spec.shape == "path":
            return Multigraph(spec.n, tuple((i, i + 1) for i in range(spec.n - 1)))
        if spec.shape == "star":
            return Multigraph(spec.n, tuple((0, i) for i in range(1, spec.n)))
        raise DomainError(f"unknown tree shape {spec.shape!r}")
    if isinstance(spec, Cycle):
        if spec.n < 2:
            raise DomainError("Cycle needs n >= 2")
        return Multigraph(spec.n, tuple((i, (i + 1) % spec.n) for i in range(spec.n)))
    if isinstance(spec, Bundle):
        if spec.m < 1:
            raise DomainError("Bundle needs m >= 1")
        return Multigraph(2, ((0, 1),) * spec.m)
    if isinstance(spec, Theta):
        lens = (spec.l1, spec.l2, spec.l3)
        if min(lens) < 1:
            raise DomainError(f"Theta path lengths must be >= 1, got {lens}")
        n = sum(lens) - 1
        edges: list[Edge] = []
        free = 2
        for length in lens:
            es, free = _path_edges(0, 1, length, free)
            edges += es
        return Multigraph(n, tuple(edges))
    if isinstance(spec, TwoCyclesAtVertex):
        if spec.a < 2 or spec.b < 2:
            raise DomainError("TwoCyclesAtVertex needs cycle lengths >= 2")
        n = spec.a + spec.b - 1
        edges = []
        free = 1
        for length in (spec.a, spec.b):
            es, free = _path_edges(0, 0, length, free)
            edges += es
        return Multigraph(n, tuple(edges))
    if isinstance(spec, PendantCycle):
        if spec.k < 1 or spec.n < spec.k + 1:
            raise DomainError(f"PendantCycle needs k >= 1 and n >= k+1, got {spec}")
        c = spec.k + 1
        edges = [(i, (i + 1) % c) for i in range(c)]
        edges += [(0, v) for v in range(c, spec.n)]
        return Multigraph(spec.n, tuple(edges))
    if isinstance(spec, Complete):
        if spec.n < 1:
            raise DomainError("Complete needs n >= 1")
        return Multigraph(spec.n, tuple((i, j) for i in range(spec.n) for j in range(i + 1, spec.n)))
    raise DomainError(f"unsupported family spec {spec!r}")


_FAMILY_NAMES = {
    "path": lambda a: Tree(a[0], "path"),
    "star": lambda a: Tree(a[0], "star"),
    "tree": lambda a: Tree(a[0], "path"),
    "cycle": lambda a: Cycle(*a),
    "bundle": lambda a: Bundle(*a),
    "theta": lambda a: Theta(*a),
    "twocycles": lambda a: TwoCyclesAtVertex(*a),
    "pendantcycle": lambda a: PendantCycle(*a),
    "complete": lambda a: Complete(*a),
}


def parse_family(text: str) -> FamilySpec:
    """Parse the compact ``name:p1,p2,...`` syntax, e.g. ``theta:1,2,2``."""
    name, _, params = text.strip().partition(":")
    name = name.lower()
    if name not in _FAMILY_NAMES:
        raise DomainError(f"unknown family {name!r}; expected one of {sorted(_FAMILY_NAMES)}")
    try:
        args = [int(p) for p in params.split(",") if p.strip()]
        return _FAMILY_NAMES[name](args)
    except (ValueError, TypeError, IndexError):
        raise DomainError(f"bad parameters for family {name!r}: {params!r}") from None


def canonical_key(G: Multigraph) -> bytes:
    """Isomorphism-invariant key respecting loops and edge multiplicities."""
    return canonical_bytes(G.mult_matrix())


def disjoint_union(graphs: Iterable[Multigraph]) -> Multigraph:
    edges: list[Edge] = []
    off = 0
    for H in graphs:
        edges += [(u + off, v + off) for u, v in H.edges]
        off += H.n
    return Multigraph(off, tuple(edges))
