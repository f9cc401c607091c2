"""Canonical forms for small multigraphs.

Individualization-refinement over an equitable vertex partition, keeping
the lexicographically smallest relabelled multiplicity matrix among the
leaves of the search tree. Subtrees that are images of an explored subtree
under an automorphism already discovered are skipped, which keeps highly
symmetric inputs (complete graphs, cycles) cheap.

Intended for order <= ~12; there is no attempt at nauty-level performance.
"""

from __future__ import annotations

from typing import Sequence

Matrix = Sequence[Sequence[int]]


def _refine(adj: Matrix, cells: list[list[int]]) -> list[list[int]]:
    """Refine an ordered partition until it is equitable.

    Splitting is driven only by label-free data (cell position and
    multiplicity sums), so the result commutes with relabelling.
    """
    while True:
        split = False
        out: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            sigs = {}
            for v in cell:
                row = adj[v]
                sigs[v] = (row[v],) + tuple(sum(row[w] for w in c) for c in cells)
            distinct = sorted(set(sigs.values()))
            if len(distinct) == 1:
                out.append(cell)
                continue
            split = True
            for s in distinct:
                out.append([v for v in cell if sigs[v] == s])
        cells = out
        if not split:
            return cells


def _certificate(adj: Matrix, order: list[int]) -> tuple[int, ...]:
    n = len(order)
    return tuple(adj[order[i]][order[j]] for i in range(n) for j in range(i, n))


def _orbits_of(n: int, gens: list[list[int]], fixed: list[int]) -> list[int]:
    """Union-find orbit representatives under generators fixing ``fixed``."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        if any(g[v] != v for v in fixed):
            continue
        for v in range(n):
            a, b = find(v), find(g[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


def canonical_form(adj: Matrix) -> tuple[list[int], tuple[int, ...]]:
    """Return ``(order, certificate)`` for a symmetric multiplicity matrix.

    ``order[i]`` is the original vertex placed at canonical position ``i``;
    ``certificate`` is the upper triangle (diagonal = loop counts) of the
    relabelled matrix. Isomorphic inputs yield identical certificates.
    """
    n = len(adj)
    if n == 0:
        return [], ()
    best_cert: tuple[int, ...] | None = None
    best_order: list[int] = []
    seen: dict[tuple[int, ...], list[int]] = {}
    autos: list[list[int]] = []

    def search(cells: list[list[int]], prefix: list[int]) -> None:
        nonlocal best_cert, best_order
        cells = _refine(adj, cells)
        if len(cells) == n:
            order = [c[0] for c in cells]
            cert = _certificate(adj, order)
            prev = seen.get(cert)
            if prev is None:
                seen[cert] = order
            else:
                # prev[i] -> order[i] is an automorphism
                g = [0] * n
                for a, b in zip(prev, order):
                    g[a] = b
                autos.append(g)
            if best_cert is None or cert < best_cert:
                best_cert, best_order = cert, order
            return
        idx = next(i for i, c in enumerate(cells) if len(c) > 1)
        target = cells[idx]
        explored: list[int] = []
        for v in target:
            if explored and autos:
                orb = _orbits_of(n, autos, prefix)
                if any(orb[v] == orb[u] for u in explored):
                    continue
            rest = [w for w in target if w != v]
            child = cells[:idx] + [[v], rest] + cells[idx + 1:]
            search(child, prefix + [v])
            explored.append(v)

    search([list(range(n))], [])
    assert best_cert is not None
    return best_order, best_cert


def canonical_bytes(adj: Matrix) -> bytes:
    """Deterministic byte key: equal iff the multigraphs are isomorphic."""
    n = len(adj)
    _, cert = canonical_form(adj)
    if n < 256 and all(x < 256 for x in cert):
        return bytes([0, n]) + bytes(cert)
    return b"\x01" + (f"{n}:" + ",".join(map(str, cert))).encode("ascii")
