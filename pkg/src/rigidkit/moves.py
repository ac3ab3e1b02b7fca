"""Constructive moves: 0/1-extensions, vertex and spider splits, contractions.

All operations return new graphs and validate their preconditions.  Every
independence-preserving move adds exactly d edges; contractions remove
1 + t edges (edge contraction through t triangles) or c edges (spider
contraction of a pair with c common neighbours).

Index conventions (relied on by certificate replay):

* ``edge_contract`` / ``spider_contract`` of (u, v) with u < v merge into
  index u; indices above v shift down by one.
* splits place the first copy at ``spec.v`` and insert the second copy at
  ``spec.v2_index`` (default: appended as the new last vertex), shifting
  indices at or above the insertion point up by one.  With ``v2_index`` set to
  the pre-contraction index of v, a split exactly inverts a contraction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph, bitmask, bits, common_neighbors


@dataclass(frozen=True)
class SplitSpec:
    """Where to split and how to distribute the neighbourhood.

    ``shared`` lists the neighbours joined to both copies (d-1 of them for a
    vertex split, d for a spider split); ``n1`` is the part of the remaining
    neighbourhood assigned to the first copy, the complement goes to the
    second.  Either part may be empty.
    """

    v: int
    shared: tuple[int, ...]
    n1: tuple[int, ...]
    v2_index: int | None = None


@dataclass(frozen=True)
class ContractionSpec:
    kind: str  # "edge" | "spider"
    pair: tuple[int, int]

    def __post_init__(self):
        if self.kind not in ("edge", "spider"):
            raise ValueError(f"unknown contraction kind {self.kind!r}")


def zero_extension(g: Graph, neighbours, d: int) -> Graph:
    """Add a new vertex of degree d joined to ``neighbours``."""
    nbrs = tuple(neighbours)
    if len(set(nbrs)) != d or len(nbrs) != d:
        raise ValueError(f"0-extension needs exactly {d} distinct neighbours")
    for w in nbrs:
        if not 0 <= w < g.n:
            raise ValueError(f"vertex {w} out of range")
    return Graph(g.n + 1, list(g.edges) + [(w, g.n) for w in nbrs])


def one_extension(g: Graph, removed_edge: tuple[int, int], neighbours, d: int) -> Graph:
    """Delete edge xy and add a new vertex of degree d+1 adjacent to x and y."""
    x, y = removed_edge
    if not g.has_edge(x, y):
        raise ValueError(f"({x},{y}) is not an edge")
    nbrs = tuple(neighbours)
    if len(set(nbrs)) != d + 1 or len(nbrs) != d + 1:
        raise ValueError(f"1-extension needs exactly {d + 1} distinct neighbours")
    if x not in nbrs or y not in nbrs:
        raise ValueError("removed edge endpoints must be among the neighbours")
    e = (x, y) if x < y else (y, x)
    edges = [f for f in g.edges if f != e] + [(w, g.n) for w in nbrs]
    return Graph(g.n + 1, edges)


def one_reduction(g: Graph, v: int, add_edge: tuple[int, int], d: int) -> Graph:
    """Remove a degree-(d+1) vertex and add one edge between two of its neighbours."""
    if g.degree(v) != d + 1:
        raise ValueError(f"vertex {v} has degree {g.degree(v)}, need {d + 1}")
    x, y = add_edge
    if not (g.has_edge(v, x) and g.has_edge(v, y)):
        raise ValueError("added edge endpoints must be neighbours of v")
    if g.has_edge(x, y):
        raise ValueError(f"({x},{y}) is already an edge")

    def drop(w: int) -> int:
        return w - (w > v)

    edges = [(drop(a), drop(b)) for a, b in g.edges if v not in (a, b)]
    edges.append((drop(x), drop(y)))
    return Graph(g.n - 1, edges)


def _split(g: Graph, spec: SplitSpec, d: int, shared_size: int, join_copies: bool) -> Graph:
    v = spec.v
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    shared = tuple(spec.shared)
    if len(shared) != shared_size or len(set(shared)) != shared_size:
        raise ValueError(f"split needs exactly {shared_size} distinct shared neighbours")
    nv = g.adj[v]
    for x in shared:
        if not nv >> x & 1:
            raise ValueError(f"shared vertex {x} is not a neighbour of {v}")
    shared_mask = bitmask(shared)
    n1_mask = bitmask(spec.n1)
    if n1_mask & ~(nv & ~shared_mask):
        raise ValueError("n1 must be a subset of N(v) minus the shared vertices")
    n2_mask = nv & ~shared_mask & ~n1_mask

    pos = g.n if spec.v2_index is None else spec.v2_index
    if not 0 <= pos <= g.n:
        raise ValueError(f"v2_index {pos} out of range")

    def lift(w: int) -> int:
        return w + (w >= pos)

    v1 = lift(v)
    v2 = pos
    edges = [(lift(a), lift(b)) for a, b in g.edges if v not in (a, b)]
    for w in bits(n1_mask):
        edges.append((v1, lift(w)))
    for w in bits(n2_mask):
        edges.append((v2, lift(w)))
    for x in shared:
        edges.append((v1, lift(x)))
        edges.append((v2, lift(x)))
    if join_copies:
        edges.append((v1, v2))
    return Graph(g.n + 1, edges)


def vertex_split(g: Graph, spec: SplitSpec, d: int) -> Graph:
    """Split v into adjacent copies v1, v2 sharing d-1 chosen neighbours."""
    return _split(g, spec, d, d - 1, join_copies=True)


def spider_split(g: Graph, spec: SplitSpec, d: int) -> Graph:
    """Split v into non-adjacent copies v1, v2 sharing d chosen neighbours."""
    return _split(g, spec, d, d, join_copies=False)


def _contract(g: Graph, u: int, v: int) -> Graph:
    """Merge v into u (u < v), simplifying parallel edges; indices above v drop."""
    def drop(w: int) -> int:
        return w - (w > v)

    merged = set()
    for a, b in g.edges:
        if a == v:
            a = u
        if b == v:
            b = u
        if a == b:
            continue
        a, b = drop(a), drop(b)
        merged.add((a, b) if a < b else (b, a))
    return Graph(g.n - 1, sorted(merged))


def edge_contract(g: Graph, e: tuple[int, int]) -> Graph:
    """Contract an edge; the result is simple, so |E'| = |E| - 1 - t(e)."""
    u, v = e
    if not g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge")
    if u > v:
        u, v = v, u
    return _contract(g, u, v)


def spider_contract(g: Graph, pair: tuple[int, int]) -> Graph:
    """Identify a non-adjacent pair; |E'| = |E| - |common neighbours|."""
    u, v = pair
    if u == v or g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not a non-adjacent pair")
    if u > v:
        u, v = v, u
    return _contract(g, u, v)


@dataclass(frozen=True)
class InverseSplit:
    """How to rebuild a graph from its contraction, for certificate steps.

    ``spec`` is expressed in the labels of the contracted graph; applying the
    matching split there and then deleting ``deleted_edges`` (original labels)
    reproduces the pre-contraction graph exactly.  ``exact`` is True when no
    deletions are needed, i.e. the contraction is literally a split inverse.
    """

    kind: str  # "vertex" | "spider"
    spec: SplitSpec
    deleted_edges: tuple[tuple[int, int], ...]

    @property
    def exact(self) -> bool:
        return not self.deleted_edges


def inverse_split_of_contraction(g: Graph, contraction: ContractionSpec) -> InverseSplit:
    """Build the split data that inverts contracting ``pair`` in ``g``.

    For an edge in two triangles or a pair with three common neighbours the
    split is exact.  With fewer shared vertices available, the shared list is
    padded from the merged neighbourhood and the split graph then carries one
    surplus edge per padding vertex; those are returned as ``deleted_edges``
    so that the pre-contraction graph embeds as a subgraph of the split.
    """
    u, v = contraction.pair
    if u > v:
        u, v = v, u
    kind = contraction.kind
    if kind == "edge":
        if not g.has_edge(u, v):
            raise ValueError(f"({u},{v}) is not an edge")
        want = 2  # d - 1 shared neighbours for d = 3
    else:
        if g.has_edge(u, v) or u == v:
            raise ValueError(f"({u},{v}) is not a non-adjacent pair")
        want = 3

    commons = sorted(bits(common_neighbors(g, u, v)))
    shared_orig = list(commons[:want])
    deleted = []
    if len(shared_orig) < want:
        pool = sorted(bits((g.adj[u] | g.adj[v]) & ~bitmask(commons) & ~bitmask((u, v))))
        for z in pool:
            if len(shared_orig) == want:
                break
            shared_orig.append(z)
            # the split joins both copies to z; only one side exists in g
            missing_side = u if not g.has_edge(u, z) else v
            deleted.append((min(missing_side, z), max(missing_side, z)))
        if len(shared_orig) < want:
            raise ValueError("merged vertex has too few neighbours to anchor a split")

    def down(w: int) -> int:
        return w - (w > v)

    shared_mask = bitmask(shared_orig)
    n1 = tuple(sorted(down(w) for w in bits(g.adj[u] & ~shared_mask & ~(1 << v))))
    spec = SplitSpec(
        v=u,
        shared=tuple(sorted(down(w) for w in shared_orig)),
        n1=n1,
        v2_index=v,
    )
    return InverseSplit(
        kind="vertex" if kind == "edge" else "spider",
        spec=spec,
        deleted_edges=tuple(sorted(deleted)),
    )


def apply_inverse_split(h: Graph, inv: InverseSplit, d: int = 3) -> Graph:
    """Apply an :class:`InverseSplit` to a contracted graph."""
    split = vertex_split if inv.kind == "vertex" else spider_split
    out = split(h, inv.spec, d)
    if inv.deleted_edges:
        edge_set = set(out.edges)
        for e in inv.deleted_edges:
            if e not in edge_set:
                raise ValueError(f"surplus edge {e} missing from the split graph")
            edge_set.remove(e)
        out = Graph(out.n, sorted(edge_set))
    return out
