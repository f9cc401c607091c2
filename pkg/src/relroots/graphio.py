"""graph6 / sparse6 / edge-list JSON readers and writers.

Bit layouts follow Brendan McKay's formats.txt (the nauty distribution).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DomainError, GraphFormatError
from .multigraph import Multigraph

G6_HEADER = b">>graph6<<"
S6_HEADER = b">>sparse6<<"
FORMATS = ("graph6", "sparse6", "json")


def _encode_n(n: int) -> bytes:
    if n < 0:
        raise DomainError("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n < 1 << 36:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise DomainError("graph too large for graph6/sparse6")


def _decode_n(data: bytes, pos: int) -> tuple[int, int]:
    """Return (n, position after the size field)."""

    def six(i):
        if i >= len(data):
            raise GraphFormatError("truncated size field", i)
        c = data[i]
        if not 63 <= c <= 126:
            raise GraphFormatError(f"invalid character {chr(c)!r}", i)
        return c - 63

    first = six(pos)
    if data[pos] != 126:
        return first, pos + 1
    if pos + 1 < len(data) and data[pos + 1] == 126:
        n = 0
        for i in range(pos + 2, pos + 8):
            n = (n << 6) | six(i)
        return n, pos + 8
    n = 0
    for i in range(pos + 1, pos + 4):
        n = (n << 6) | six(i)
    return n, pos + 4


def _pack_bits(bits: list[int]) -> bytes:
    out = bytearray()
    for i in range(0, len(bits), 6):
        chunk = bits[i:i + 6]
        chunk += [0] * (6 - len(chunk))
        val = 0
        for b in chunk:
            val = (val << 1) | b
        out.append(val + 63)
    return bytes(out)


def _payload_values(data: bytes, start: int) -> list[int]:
    vals = []
    for i in range(start, len(data)):
        c = data[i]
        if not 63 <= c <= 126:
            raise GraphFormatError(f"invalid character {chr(c)!r}", i)
        vals.append(c - 63)
    return vals


def _strip(text: bytes | str, header: bytes) -> bytes:
    if isinstance(text, str):
        text = text.encode("ascii")
    text = text.strip()
    if text.startswith(header):
        text = text[len(header):]
    return text


# ---------------------------------------------------------------------------
# graph6


def to_graph6(G: Multigraph, header: bool = False) -> bytes:
    if not G.is_simple():
        raise DomainError("graph6 encodes only simple graphs; use sparse6")
    n = G.n
    adj = set(G.edges)
    bits = [1 if (i, j) in adj else 0 for j in range(1, n) for i in range(j)]
    return (G6_HEADER if header else b"") + _encode_n(n) + _pack_bits(bits)


def from_graph6(text: bytes | str) -> Multigraph:
    data = _strip(text, G6_HEADER)
    if not data:
        raise GraphFormatError("empty graph6 string", 0)
    if data[:1] in (b":", b";"):
        raise GraphFormatError("sparse6 data (may carry loops/multi-edges) given as graph6", 0)
    if data[:1] == b"&":
        raise GraphFormatError("digraph6 data given as graph6", 0)
    n, pos = _decode_n(data, 0)
    vals = _payload_values(data, pos)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(vals) != need:
        raise GraphFormatError(f"expected {need} payload bytes for n={n}, got {len(vals)}",
                               pos + min(len(vals), need))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (vals[k // 6] >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    if need and vals[-1] & ((1 << (6 * need - nbits)) - 1):
        raise GraphFormatError("nonzero padding bits", pos + need - 1)
    return Multigraph(n, tuple(edges))


# ---------------------------------------------------------------------------
# sparse6


def _s6_width(n: int) -> int:
    """Bits needed to write n - 1 in binary (0 when n <= 1)."""
    return (n - 1).bit_length() if n > 1 else 0


def to_sparse6(G: Multigraph, header: bool = False) -> bytes:
    n = G.n
    k = _s6_width(n)

    def enc(x):
        return [(x >> (k - 1 - i)) & 1 for i in range(k)]

    bits: list[int] = []
    cur = 0
    for u, v in sorted(G.edges, key=lambda e: (e[1], e[0])):
        if v == cur:
            bits += [0] + enc(u)
        elif v == cur + 1:
            cur = v
            bits += [1] + enc(u)
        else:
            cur = v
            bits += [1] + enc(v) + [0] + enc(u)
    pad = (-len(bits)) % 6
    if k < 6 and n == (1 << k) and pad >= k and cur < n - 1:
        # trailing 1-bits would otherwise decode as an edge to n-1
        bits.append(0)
        pad = (-len(bits)) % 6
    bits += [1] * pad
    return (S6_HEADER if header else b"") + b":" + _encode_n(n) + _pack_bits(bits)


def from_sparse6(text: bytes | str) -> Multigraph:
    data = _strip(text, S6_HEADER)
    if not data.startswith(b":"):
        if data.startswith(b";"):
            raise GraphFormatError("incremental sparse6 is not supported", 0)
        raise GraphFormatError("sparse6 data must start with ':'", 0)
    n, pos = _decode_n(data, 1)
    vals = _payload_values(data, pos)
    k = _s6_width(n)
    bits = [(v >> (5 - i)) & 1 for v in vals for i in range(6)]
    edges = []
    v = 0
    i = 0
    while i + 1 + k <= len(bits):
        b = bits[i]
        x = 0
        for t in range(k):
            x = (x << 1) | bits[i + 1 + t]
        i += 1 + k
        if b:
            v += 1
        if v >= n or x >= n:
            break
        if x > v:
            v = x
        else:
            edges.append((x, v))
    return Multigraph(n, tuple(edges))


# ---------------------------------------------------------------------------
# JSON edge list


def to_edge_json(G: Multigraph) -> str:
    return json.dumps({"n": G.n, "edges": [list(e) for e in G.edges]})


def from_edge_json(text: bytes | str) -> Multigraph:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise GraphFormatError("edge-list JSON must be an object with 'n' and 'edges'", 0)
    n = obj["n"]
    if not isinstance(n, int) or n < 0:
        raise GraphFormatError("'n' must be a nonnegative integer", 0)
    edges = []
    for e in obj["edges"]:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise GraphFormatError(f"bad edge entry {e!r}", 0)
        if not all(0 <= x < n for x in e):
            raise GraphFormatError(f"edge {e!r} out of range for n={n}", 0)
        edges.append(tuple(e))
    return Multigraph(n, tuple(edges))


# ---------------------------------------------------------------------------


def parse_graph(text: bytes | str, format: str) -> Multigraph:
    """Decode one graph in ``format`` (graph6, sparse6 or json)."""
    if format == "graph6":
        return from_graph6(text)
    if format == "sparse6":
        return from_sparse6(text)
    if format == "json":
        return from_edge_json(text)
    raise DomainError(f"unknown format {format!r}; expected one of {FORMATS}")


def encode_graph(G: Multigraph, format: str) -> bytes:
    if format == "graph6":
        return to_graph6(G)
    if format == "sparse6":
        return to_sparse6(G)
    if format == "json":
        return to_edge_json(G).encode()
    raise DomainError(f"unknown format {format!r}; expected one of {FORMATS}")


def iter_graph_lines(lines: Iterable[bytes | str]) -> Iterator[Multigraph]:
    """Decode one graph per line, choosing graph6 or sparse6 per line."""
    for raw in lines:
        line = raw.encode("ascii") if isinstance(raw, str) else raw
        line = line.strip()
        for h in (G6_HEADER, S6_HEADER):
            if line.startswith(h):
                line = line[len(h):]
        if not line:
            continue
        yield from_sparse6(line) if line.startswith(b":") else from_graph6(line)


def read_graph_file(path: str | Path) -> list[Multigraph]:
    with open(path, "rb") as fh:
        return list(iter_graph_lines(fh))


def write_graph6_file(graphs: Iterable[Multigraph], path: str | Path) -> None:
    with open(path, "wb") as fh:
        for G in graphs:
            fh.write(to_graph6(G) + b"\n")
