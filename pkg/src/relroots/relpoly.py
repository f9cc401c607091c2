"""All-terminal reliability polynomials, F-vectors and H-vectors.

``reliability_poly`` runs deletion-contraction over edge *bundles*: a bundle
of ``b`` parallel edges fails only when all of its edges fail, i.e. with
probability ``q**b``, so

    Rel(G) = q^b Rel(G - bundle) + (1 - q^b) Rel(G / bundle).

Loops are dropped, disconnected graphs give 0, and graphs with cut vertices
are split into blocks whose reliabilities multiply. Blocks on at most three
vertices have closed forms; larger ones are memoised by canonical key.
"""

from __future__ import annotations

from collections import OrderedDict
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from . import multigraph as mg
from .canon import canonical_bytes
from .errors import DomainError, IntegrityError
from .multigraph import Multigraph
from .poly import Poly, one_minus_q_pow, padd, pmul

Coeffs = tuple[int, ...]
Matrix = list[list[int]]

BRUTEFORCE_MAX_EDGES = 25
DEFAULT_CACHE_SIZE = 200_000


class ReliabilityCache:
    """Bounded LRU map from canonical key to reliability coefficients."""

    def __init__(self, maxsize: int = DEFAULT_CACHE_SIZE):
        self.maxsize = maxsize
        self._data: OrderedDict[bytes, Coeffs] = OrderedDict()
        self.hits = 0
        self.misses = 0

    def get(self, key: bytes) -> Coeffs | None:
        val = self._data.get(key)
        if val is None:
            self.misses += 1
            return None
        self._data.move_to_end(key)
        self.hits += 1
        return val

    def put(self, key: bytes, val: Coeffs) -> None:
        self._data[key] = val
        self._data.move_to_end(key)
        if len(self._data) > self.maxsize:
            self._data.popitem(last=False)

    def __len__(self) -> int:
        return len(self._data)

    def clear(self) -> None:
        self._data.clear()


_default_cache = ReliabilityCache()


def _bundle_alive(b: int) -> Coeffs:
    """1 - q^b: probability a bundle of b parallel edges survives."""
    return (1,) + (0,) * (b - 1) + (-1,)


def _q_pow(b: int) -> Coeffs:
    return (0,) * b + (1,)


def _matrix_components(adj: Matrix) -> list[list[int]]:
    n = len(adj)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in range(n):
                if adj[x][y] and not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def _blocks_of_matrix(adj: Matrix) -> list[list[int]]:
    """Vertex sets of the blocks of a connected loopless matrix graph."""
    n = len(adj)
    disc = [-1] * n
    low = [0] * n
    out: list[list[int]] = []
    t = 0
    disc[0] = low[0] = 0
    t = 1
    estack: list[tuple[int, int]] = []
    stack = [(0, -1, iter(range(n)))]
    while stack:
        x, p, it = stack[-1]
        advanced = False
        for y in it:
            if not adj[x][y] or y == p:
                continue
            if disc[y] == -1:
                estack.append((x, y))
                disc[y] = low[y] = t
                t += 1
                stack.append((y, x, iter(range(n))))
                advanced = True
                break
            if disc[y] < disc[x]:
                estack.append((x, y))
                low[x] = min(low[x], disc[y])
        if not advanced:
            stack.pop()
            if stack:
                px = stack[-1][0]
                low[px] = min(low[px], low[x])
                if low[x] >= disc[px]:
                    verts = set()
                    while True:
                        a, b = estack.pop()
                        verts.add(a)
                        verts.add(b)
                        if (a, b) == (px, x):
                            break
                    out.append(sorted(verts))
    return out


def _triangle(a: int, b: int, c: int) -> Coeffs:
    """Three bundles on three vertices: connected iff at least two survive."""
    x, y, z = _q_pow(a), _q_pow(b), _q_pow(c)
    ax, ay, az = _bundle_alive(a), _bundle_alive(b), _bundle_alive(c)
    alive_all = pmul(pmul(ax, ay), az)
    return padd(padd(alive_all, pmul(pmul(x, ay), az)),
                padd(pmul(pmul(ax, y), az), pmul(pmul(ax, ay), z)))


def _contract(adj: Matrix, u: int, v: int) -> Matrix:
    """Merge v into u (u < v); the u-v bundle becomes loops and is dropped."""
    n = len(adj)
    keep = [w for w in range(n) if w != v]
    out = []
    for w in keep:
        row = adj[w]
        new = [row[x] for x in keep]
        out.append(new)
    iu = keep.index(u)
    rowv = adj[v]
    for j, x in enumerate(keep):
        if x == u:
            continue
        out[iu][j] += rowv[x]
        out[j][iu] += rowv[x]
    out[iu][iu] = 0
    return out


def _rel_block(adj: Matrix, cache: ReliabilityCache) -> Coeffs:
    """Reliability of a 2-connected loopless block with >= 2 vertices."""
    n = len(adj)
    if n == 2:
        return _bundle_alive(adj[0][1])
    if n == 3:
        return _triangle(adj[0][1], adj[0][2], adj[1][2])
    key = canonical_bytes(adj)
    hit = cache.get(key)
    if hit is not None:
        return hit
    # pivot: heaviest bundle at a vertex of minimum degree
    deg = [sum(r) for r in adj]
    u = min(range(n), key=lambda v: (deg[v], v))
    v = max((w for w in range(n) if adj[u][w]), key=lambda w: (adj[u][w], -w))
    b = adj[u][v]
    deleted = [row[:] for row in adj]
    deleted[u][v] = deleted[v][u] = 0
    a, c = (u, v) if u < v else (v, u)
    contracted = _contract(adj, a, c)
    res = padd(pmul(_q_pow(b), _rel_matrix(deleted, cache)),
               pmul(_bundle_alive(b), _rel_matrix(contracted, cache)))
    cache.put(key, res)
    return res


def _rel_matrix(adj: Matrix, cache: ReliabilityCache) -> Coeffs:
    n = len(adj)
    if n <= 1:
        return (1,) if n == 1 else ()
    if len(_matrix_components(adj)) > 1:
        return ()
    out: Coeffs = (1,)
    for verts in _blocks_of_matrix(adj):
        sub = [[adj[x][y] for y in verts] for x in verts]
        out = pmul(out, _rel_block(sub, cache))
    return out


def reliability_poly(G: Multigraph, cache: ReliabilityCache | None = None) -> Poly:
    """Exact all-terminal reliability of ``G`` as a polynomial in the edge
    failure probability q. The zero polynomial iff ``G`` is disconnected."""
    if G.n == 0:
        return Poly()
    adj = G.without_loops().mult_matrix()
    return Poly(_rel_matrix(adj, _default_cache if cache is None else cache))


def reliability_single_edge_dc(G: Multigraph) -> Poly:
    """Plain single-edge deletion-contraction, no memo and no reductions
    other than loop removal. Slow; kept as a cross-check for small graphs."""
    G = G.without_loops()
    if not G.is_connected():
        return Poly()
    if G.m == 0:
        return Poly.one()
    br = mg.bridges(G)
    e = next((i for i in range(G.m) if i not in br), None)
    if e is None:
        # a tree: every edge must survive
        return Poly.one_minus_q(G.m)
    return (Poly.q() * reliability_single_edge_dc(mg.edge_minor(G, e, "delete"))
            + Poly.one_minus_q() * reliability_single_edge_dc(mg.edge_minor(G, e, "contract")))


# ---------------------------------------------------------------------------
# F-form and H-form


def f_vector_bruteforce(G: Multigraph) -> tuple[int, ...]:
    """F_i = number of i-edge subsets whose removal leaves G connected,
    by exhaustive enumeration of all 2^m subsets. Loops are dropped first.

    Entries run to index m - n + 1 (the corank), beyond which all are 0.
    """
    G = G.without_loops()
    if not G.is_connected():
        raise DomainError("f_vector_bruteforce() requires a connected graph")
    if G.m > BRUTEFORCE_MAX_EDGES:
        raise DomainError(f"subset enumeration refused: m={G.m} exceeds {BRUTEFORCE_MAX_EDGES}")
    d = G.m - G.n + 1
    counts = np.zeros(G.m + 1, dtype=np.int64)
    bit = np.arange(G.m, dtype=np.int64)
    chunk = 1 << 16
    for start in range(0, 1 << G.m, chunk):
        masks = np.arange(start, min(start + chunk, 1 << G.m), dtype=np.int64)
        removed = ((masks[:, None] >> bit) & 1).astype(bool)
        ok = mg.connected_rows(G, ~removed)
        counts += np.bincount(removed[ok].sum(axis=1), minlength=G.m + 1)
    if counts[d + 1:].any():
        raise IntegrityError("connected complement found beyond the corank")
    return tuple(int(c) for c in counts[:d + 1])


def f_to_h(F: Sequence[int]) -> tuple[int, ...]:
    """Convert F-form to H-form coefficients (same corank d = len(F) - 1).

    Uses sum_i F_i q^i (1-q)^(d-i) = sum_i H_i q^i.
    """
    d = len(F) - 1
    H = [0] * (d + 1)
    for i, f in enumerate(F):
        for j in range(d - i + 1):
            H[i + j] += f * (-1) ** j * comb(d - i, j)
    if any(h < 0 for h in H):
        raise IntegrityError(f"negative H entry from F-vector {tuple(F)}; not a valid F-vector")
    return tuple(H)


def h_to_f(H: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`f_to_h`: F_k = sum_{i<=k} H_i C(d-i, k-i)."""
    d = len(H) - 1
    return tuple(sum(H[i] * comb(d - i, k - i) for i in range(k + 1)) for k in range(d + 1))


def f_form_to_poly(F: Sequence[int], m: int) -> Poly:
    """sum_i F_i q^i (1-q)^(m-i)."""
    out: Coeffs = ()
    for i, f in enumerate(F):
        if f:
            out = padd(out, pmul((0,) * i + (f,), one_minus_q_pow(m - i)))
    return Poly(out)


def poly_to_f_form(P: Poly, m: int, d: int) -> tuple[int, ...]:
    """Recover F_0..F_d with P = sum_i F_i q^i (1-q)^(m-i).

    Substituting q = t/(1+t) turns the basis into t^i/(1+t)^m, so the F_i
    are the coefficients of (1+t)^m P(t/(1+t)).
    """
    out = [0] * (m + 1)
    for k, c in enumerate(P.coeffs):
        if not c:
            continue
        # c * t^k (1+t)^(m-k)
        for j in range(m - k + 1):
            out[k + j] += c * comb(m - k, j)
    if any(out[d + 1:]):
        raise IntegrityError("polynomial has F-form support beyond the corank")
    return tuple(out[:d + 1])


def h_vector(G: Multigraph, cache: ReliabilityCache | None = None) -> tuple[int, ...]:
    """H_0..H_d with Rel(G) = (1-q)^(n-1) sum_i H_i q^i, by exact division."""
    G = G.without_loops()
    if not G.is_connected():
        raise DomainError("h_vector() requires a connected graph")
    rel = reliability_poly(G, cache)
    return h_from_rel(rel, G.n, G.m - G.n + 1)


def h_from_rel(rel: Poly, n: int, d: int) -> tuple[int, ...]:
    quot, rem = rel.divmod(Poly.one_minus_q(n - 1))
    if not rem.is_zero():
        raise IntegrityError(f"(1-q)^{n - 1} does not divide Rel exactly; remainder {rem!r}")
    H = list(quot.coeffs) + [0] * (d + 1 - len(quot.coeffs))
    if len(H) != d + 1:
        raise IntegrityError(f"H-polynomial degree {len(quot.coeffs) - 1} exceeds corank {d}")
    return tuple(H)


def h_poly(H: Sequence[int]) -> Poly:
    return Poly(H)


def eval_exact(P: Poly, q0) -> Fraction:
    """Exact rational value of P at q0 (int, Fraction or 'p/q' string)."""
    return P.eval_exact(Fraction(q0))


def spanning_tree_count(G: Multigraph) -> int:
    """Matrix-tree theorem with exact fraction-free (Bareiss) elimination."""
    G = G.without_loops()
    n = G.n
    if n == 0:
        return 0
    if n == 1:
        return 1
    L = [[0] * n for _ in range(n)]
    for u, v in G.edges:
        L[u][u] += 1
        L[v][v] += 1
        L[u][v] -= 1
        L[v][u] -= 1
    M = [row[1:] for row in L[1:]]
    k = n - 1
    sign = 1
    prev = 1
    for i in range(k):
        if M[i][i] == 0:
            piv = next((r for r in range(i + 1, k) if M[r][i] != 0), None)
            if piv is None:
                return 0
            M[i], M[piv] = M[piv], M[i]
            sign = -sign
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                M[r][c] = (M[r][c] * M[i][i] - M[r][i] * M[i][c]) // prev
        prev = M[i][i]
    return sign * M[k - 1][k - 1]


# ---------------------------------------------------------------------------
# closed forms


def closed_form(spec: mg.FamilySpec) -> Poly:
    """Closed-form reliability for families that have one."""
    if isinstance(spec, mg.Tree):
        mg.make_family(spec)
        return Poly.one_minus_q(spec.n - 1)
    if isinstance(spec, mg.Cycle):
        mg.make_family(spec)
        n = spec.n
        return Poly.one_minus_q(n - 1) * Poly((1, n - 1))
    if isinstance(spec, mg.Bundle):
        mg.make_family(spec)
        return Poly.one() - Poly.monomial(spec.m)
    if isinstance(spec, mg.PendantCycle):
        mg.make_family(spec)
        return Poly.one_minus_q(spec.n - 1) * Poly((1, spec.k))
    raise DomainError(f"no closed form for {type(spec).__name__}; use reliability_poly")


def theta_h2_displayed(l1: int, l2: int, l3: int) -> int:
    """The H_2 expression C(n,2) - sum C(l_i,2) - 1 as printed for theta graphs.

    Kept for comparison only; exact division gives one more (see
    :func:`theta_h2_exact`).
    """
    n = l1 + l2 + l3 - 1
    return comb(n, 2) - comb(l1, 2) - comb(l2, 2) - comb(l3, 2) - 1


def theta_h2_exact(l1: int, l2: int, l3: int) -> int:
    """H_2 of a theta graph from F_2 via the F-to-H transform."""
    n = l1 + l2 + l3 - 1
    F2 = comb(n + 1, 2) - comb(l1, 2) - comb(l2, 2) - comb(l3, 2)
    return f_to_h((1, n + 1, F2))[2]
