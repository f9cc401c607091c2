"""Isomorph-free connected simple graphs and multigraph sampling.

Order-n graphs are produced from the order-(n-1) list by attaching a new
vertex to every nonempty vertex subset and rejecting duplicates by
canonical key. Every connected graph has a vertex whose removal leaves it
connected (a leaf of a spanning tree), so nothing is missed.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .canon import canonical_form
from .errors import DomainError
from .graphio import iter_graph_lines, to_graph6
from .multigraph import GraphClass, Multigraph, classify

MAX_ORDER = 9

# OEIS A001349
KNOWN_CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117, 9: 261080}


@dataclass(frozen=True)
class GraphStream:
    """An ordered, duplicate-free batch of graphs with where they came from."""

    graphs: tuple[Multigraph, ...]
    provenance: dict = field(default_factory=dict)

    def __iter__(self) -> Iterator[Multigraph]:
        return iter(self.graphs)

    def __len__(self) -> int:
        return len(self.graphs)


def _canonical_relabel(G: Multigraph) -> tuple[bytes, Multigraph]:
    adj = G.mult_matrix()
    order, cert = canonical_form(adj)
    inv = [0] * G.n
    for pos, v in enumerate(order):
        inv[v] = pos
    return bytes([0, G.n]) + bytes(cert), G.relabel(inv)


def _extend(graphs: Iterable[Multigraph], n: int) -> list[Multigraph]:
    found: dict[bytes, Multigraph] = {}
    for H in graphs:
        base = H.edges
        for size in range(1, n):
            for nbrs in combinations(range(n - 1), size):
                G = Multigraph(n, base + tuple((v, n - 1) for v in nbrs))
                key, canon = _canonical_relabel(G)
                if key not in found:
                    found[key] = Multigraph(n, canon.sorted_edges())
    return [found[k] for k in sorted(found)]


def enum_connected_simple(n: int) -> GraphStream:
    """Every connected simple graph of order ``n`` up to isomorphism, once.

    Graphs come out canonically labelled and sorted by canonical key.
    """
    if not 1 <= n <= MAX_ORDER:
        raise DomainError(f"order must be in 1..{MAX_ORDER}, got {n}")
    level = [Multigraph(1)]
    for k in range(2, n + 1):
        level = _extend(level, k)
    return GraphStream(tuple(level), {"source": "generated", "order": n})


def filter_class(stream: GraphStream, c: GraphClass) -> GraphStream:
    kept = tuple(G for G in stream if c in classify(G))
    prov = dict(stream.provenance, graph_class=c.value)
    return GraphStream(kept, prov)


# ---------------------------------------------------------------------------
# shipped corpus snapshot


def _data_file(name: str):
    return resources.files("relroots") / "data" / name


def corpus_manifest() -> dict:
    return json.loads(_data_file("manifest.json").read_text())


def load_corpus(n: int) -> GraphStream:
    """The shipped graph6 snapshot of connected simple graphs of order n,
    verified against its recorded SHA-256."""
    manifest = corpus_manifest()
    entry = manifest["files"].get(str(n))
    if entry is None:
        raise DomainError(f"no shipped corpus for order {n}")
    raw = _data_file(entry["file"]).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != entry["sha256"]:
        raise DomainError(f"corpus file {entry['file']} hash mismatch")
    graphs = tuple(iter_graph_lines(raw.splitlines()))
    return GraphStream(graphs, {"source": "file", "path": entry["file"], "format": "graph6",
                                "order": n})


def corpus_bytes(stream: GraphStream) -> bytes:
    return b"".join(to_graph6(G) + b"\n" for G in stream)


def connected_simple(n: int, source: str = "corpus") -> GraphStream:
    """Universe of connected simple graphs: shipped snapshot or regenerate."""
    if source == "generated":
        return enum_connected_simple(n)
    if source == "corpus":
        return load_corpus(n)
    raise DomainError(f"unknown source {source!r}")


# ---------------------------------------------------------------------------
# multigraph sampling


def random_multigraphs(count: int, seed: int, max_order: int = 6, max_mult: int = 3,
                       loop_prob: float = 0.05) -> list[Multigraph]:
    """Seeded random connected multigraphs with 2 <= n <= max_order.

    Each vertex pair gets a multiplicity uniform in 0..max_mult, a random
    spanning tree is forced present, and the odd loop is sprinkled in.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, max_order + 1))
        mult = {}
        for u in range(n):
            for v in range(u + 1, n):
                mult[(u, v)] = int(rng.integers(0, max_mult + 1))
        perm = rng.permutation(n)
        for i in range(1, n):
            a = int(perm[i])
            b = int(perm[rng.integers(0, i)])
            key = (min(a, b), max(a, b))
            if mult[key] == 0:
                mult[key] = int(rng.integers(1, max_mult + 1))
        edges = [e for e, k in sorted(mult.items()) for _ in range(k)]
        for v in range(n):
            if rng.random() < loop_prob:
                edges.append((v, v))
        out.append(Multigraph(n, tuple(edges)))
    return out
