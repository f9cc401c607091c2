from __future__ import annotations

from hypothesis import strategies as st

from relroots.multigraph import Multigraph


@st.composite
def multigraphs(draw, min_n=1, max_n=6, max_extra=8, loops=True, connected=True):
    """Random (by default connected) multigraphs: a random tree plus extras."""
    n = draw(st.integers(min_n, max_n))
    edges = []
    if connected:
        for v in range(1, n):
            edges.append((draw(st.integers(0, v - 1)), v))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                          max_size=max_extra))
    for u, v in extra:
        if u == v and not loops:
            continue
        edges.append((u, v))
    perm = draw(st.permutations(range(n)))
    return Multigraph(n, tuple(edges)).relabel(perm)
