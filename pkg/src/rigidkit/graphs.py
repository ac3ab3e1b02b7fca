"""Immutable simple graphs with bitset adjacency, graph6 I/O, and counting primitives.

Vertices are dense integers ``0..n-1``.  Vertex sets are plain Python ints
used as bitmasks (bit ``v`` set means vertex ``v`` is a member); arbitrary
precision ints make the same code serve both the small fast path and graphs
beyond 64 vertices.  All functions here are pure and all objects are
immutable, so everything is safe to share across threads or processes.

Counting conventions:

* ``induced_edge_count(g, x)`` is the number of edges with both ends in ``x``
  (written ``i(X)`` in the docstrings below).
* ``cross_edge_count(g, x, y)`` counts edges with one end in ``x - y`` and the
  other in ``y - x``; edges inside the intersection are never counted.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, Iterator


class Graph6ParseError(ValueError):
    """Malformed graph6 input.  ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def bitmask(vertices: Iterable[int]) -> int:
    """Pack an iterable of vertex indices into a bitmask."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Iterate the vertex indices present in a bitmask, in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


class Graph:
    """An immutable simple undirected graph.

    ``adj[v]`` is the neighbourhood of ``v`` as a bitmask; ``edges`` is the
    lexicographically sorted tuple of pairs ``(u, v)`` with ``u < v``.
    """

    __slots__ = ("n", "adj", "edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj = [0] * n
        normalised = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            e = (u, v) if u < v else (v, u)
            if e in normalised:
                raise ValueError(f"parallel edge {e}")
            normalised.add(e)
            adj[e[0]] |= 1 << e[1]
            adj[e[1]] |= 1 << e[0]
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", tuple(adj))
        object.__setattr__(self, "edges", tuple(sorted(normalised)))

    def __setattr__(self, *_):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph) and self.n == other.n and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def full_mask(self) -> int:
        """Bitmask of the whole vertex set."""
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> tuple[int, ...]:
        return tuple(m.bit_count() for m in self.adj)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def is_regular(self, k: int) -> bool:
        return all(m.bit_count() == k for m in self.adj)

    def subgraph(self, mask: int) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph on ``mask``; returns it with the old-label map."""
        keep = tuple(bits(mask))
        index = {v: i for i, v in enumerate(keep)}
        edges = [
            (index[u], index[v]) for u, v in self.edges if mask >> u & 1 and mask >> v & 1
        ]
        return Graph(len(keep), edges), keep


# ---------------------------------------------------------------------------
# graph6 (McKay's format), bit-exact


def _parse_g6_size(data: bytes) -> tuple[int, int]:
    """Decode the size header; returns (n, header length in bytes)."""
    if not data:
        raise Graph6ParseError("empty graph6 line", 0)
    b0 = data[0]
    if b0 != 126:
        if not 63 <= b0 <= 125:
            raise Graph6ParseError(f"bad header byte {b0}", 0)
        return b0 - 63, 1
    if len(data) < 4:
        raise Graph6ParseError("truncated extended header", len(data))
    if data[1] != 126:
        vals = []
        for i in range(1, 4):
            if not 63 <= data[i] <= 126:
                raise Graph6ParseError(f"bad header byte {data[i]}", i)
            vals.append(data[i] - 63)
        n = (vals[0] << 12) | (vals[1] << 6) | vals[2]
        return n, 4
    if len(data) < 8:
        raise Graph6ParseError("truncated extended header", len(data))
    n = 0
    for i in range(2, 8):
        if not 63 <= data[i] <= 126:
            raise Graph6ParseError(f"bad header byte {data[i]}", i)
        n = (n << 6) | (data[i] - 63)
    return n, 8


def parse_graph6(text: str | bytes) -> Graph:
    """Decode one graph6 line into a :class:`Graph`.

    Accepts the optional ``>>graph6<<`` prefix and the extended 4- and 8-byte
    size headers (n at most 2**18).  Raises :class:`Graph6ParseError` with a
    byte offset on malformed input.
    """
    data = text.encode("ascii") if isinstance(text, str) else bytes(text)
    data = data.rstrip(b"\r\n")
    if data.startswith(b">>graph6<<"):
        data = data[len(b">>graph6<<"):]
    n, off = _parse_g6_size(data)
    if n > 1 << 18:
        raise Graph6ParseError(f"vertex count {n} exceeds the 2**18 limit", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - off < nbytes:
        raise Graph6ParseError("truncated bit field", len(data))
    if len(data) - off > nbytes:
        raise Graph6ParseError("trailing garbage after bit field", off + nbytes)
    edges = []
    bit = 0
    u, v = 0, 1
    for i in range(nbytes):
        byte = data[off + i]
        if not 63 <= byte <= 126:
            raise Graph6ParseError(f"bad data byte {byte}", off + i)
        group = byte - 63
        for shift in range(5, -1, -1):
            if bit >= nbits:
                break
            if group >> shift & 1:
                edges.append((u, v))
            bit += 1
            u += 1
            if u == v:
                u, v = 0, v + 1
    return Graph(n, edges)


def write_graph6(g: Graph) -> str:
    """Encode a graph in canonical graph6 (zero padding, minimal header)."""
    n = g.n
    if n <= 62:
        header = [n + 63]
    elif n <= 258047:
        header = [126, (n >> 12) + 63, (n >> 6 & 63) + 63, (n & 63) + 63]
    else:
        header = [126, 126] + [((n >> (6 * k)) & 63) + 63 for k in range(5, -1, -1)]
    out = bytearray(header)
    group, filled = 0, 0
    for v in range(1, n):
        col = g.adj[v]
        for u in range(v):
            group = group << 1 | (col >> u & 1)
            filled += 1
            if filled == 6:
                out.append(group + 63)
                group, filled = 0, 0
    if filled:
        out.append((group << (6 - filled)) + 63)
    return out.decode("ascii")


# ---------------------------------------------------------------------------
# Counting primitives


def induced_edge_count(g: Graph, x: int) -> int:
    """Number of edges of ``g`` with both endpoints in the set ``x``."""
    total = 0
    m = x
    while m:
        low = m & -m
        v = low.bit_length() - 1
        total += (g.adj[v] & x).bit_count()
        m ^= low
    return total // 2


def cross_edge_count(g: Graph, x: int, y: int) -> int:
    """d(X, Y): edges with one end in X - Y and the other in Y - X."""
    xonly = x & ~y
    yonly = y & ~x
    total = 0
    m = xonly
    while m:
        low = m & -m
        v = low.bit_length() - 1
        total += (g.adj[v] & yonly).bit_count()
        m ^= low
    return total


def common_neighbors(g: Graph, u: int, v: int) -> int:
    """Bitmask of N(u) & N(v)."""
    if u == v:
        raise ValueError("common_neighbors needs two distinct vertices")
    return g.adj[u] & g.adj[v]


def triangles_on_edge(g: Graph, e: tuple[int, int]) -> int:
    """Number of triangles containing the edge ``e``."""
    u, v = e
    if not g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge")
    return (g.adj[u] & g.adj[v]).bit_count()


def _component_mask(g: Graph, start: int, forbidden: int = 0) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= g.adj[low.bit_length() - 1]
            m ^= low
        frontier = nxt & ~seen & ~forbidden
        seen |= frontier
    return seen


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return _component_mask(g, 0) == g.full_mask


class Connectivity(str, Enum):
    DISCONNECTED = "disconnected"
    CONNECTED = "connected-not-2-connected"
    BICONNECTED = "2-connected"


def connectivity(g: Graph) -> Connectivity:
    """Classify vertex connectivity: disconnected / connected / 2-connected.

    A connected graph on at least two vertices is 2-connected when it has no
    cut vertex (so ``K_2`` counts as 2-connected, matching the usual
    biconnected-components convention).
    """
    if g.n == 0 or not is_connected(g):
        return Connectivity.DISCONNECTED
    if g.n == 1:
        return Connectivity.CONNECTED
    full = g.full_mask
    for v in range(g.n):
        rest = full & ~(1 << v)
        start = (rest & -rest).bit_length() - 1
        if _component_mask(g, start, forbidden=1 << v) & rest != rest:
            return Connectivity.CONNECTED
    return Connectivity.BICONNECTED


def is_essentially_k_edge_connected(g: Graph, k: int) -> bool:
    """True when every edge cut smaller than ``k`` isolates a single vertex.

    Equivalently, every bipartition with at least two vertices on each side is
    crossed by at least ``k`` edges.  Exhaustive over bipartitions, so the
    graph must be small (n <= 24).
    """
    if k < 1:
        raise ValueError("k must be positive")
    if not is_connected(g):
        raise ValueError("graph must be connected")
    n = g.n
    if n > 24:
        raise ValueError("exhaustive cut check limited to n <= 24")
    if n < 4:
        return True
    full = g.full_mask
    # fix vertex 0 on one side to halve the scan
    for half in range(1 << (n - 1)):
        a = half << 1 | 1
        b = full & ~a
        if a.bit_count() < 2 or b.bit_count() < 2:
            continue
        if cross_edge_count(g, a, b) < k:
            return False
    return True
