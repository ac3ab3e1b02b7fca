"""Counting-condition machinery: d-sparsity tests, k-sets, cores, and closure.

A graph is *d-sparse* when every vertex set X with |X| >= d induces at most
d|X| - C(d+1,2) edges, and *d-tight* when it is d-sparse with equality at
X = V.  A set X with i(X) = 3|X| - k is called a *k-set*; in a 3-sparse graph
every k-set on >= 3 vertices has k >= 6.

Two 3-sparsity tests live here.  ``is_d_sparse_brute`` enumerates subsets and
is the oracle of record for n <= 24.  ``is_3_sparse`` is the polynomial path:
for every anchor triple {u,v,w} it checks that all edges can be assigned to an
endpoint under vertex capacities 1 on the anchors and 3 elsewhere.  A feasible
assignment exists for every triple iff no subset violates the 3-sparsity
count, because a minimal violating set has induced minimum degree >= 4 and
therefore contains an anchor triple whose Hall condition fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .graphs import Graph, bitmask, bits, cross_edge_count, induced_edge_count

MAX_ORACLE_N = 24
_CHUNK_BITS = 18


class OracleSizeError(ValueError):
    """Input too large for an exhaustive subset-enumeration path."""


@dataclass(frozen=True)
class SparsityVerdict:
    sparse: bool
    witness: int | None  # bitmask of a minimal violating set when not sparse
    method: str  # "brute" or "flow"

    def __bool__(self) -> bool:
        return self.sparse


@dataclass(frozen=True)
class KSetReport:
    members: int  # bitmask
    size: int
    k: int  # i(X) = 3|X| - k
    is_core: bool
    boundary_degree: int  # d(X, V - X)

    def vertex_list(self) -> list[int]:
        return list(bits(self.members))


def _iter_subset_counts(g: Graph) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield (masks, sizes, induced edge counts) over all 2^n subsets, chunked."""
    n = g.n
    if n > MAX_ORACLE_N:
        raise OracleSizeError(f"subset enumeration limited to n <= {MAX_ORACLE_N}, got {n}")
    shifts = np.arange(n, dtype=np.int64)
    eu = np.fromiter((u for u, _ in g.edges), dtype=np.int64, count=len(g.edges))
    ev = np.fromiter((v for _, v in g.edges), dtype=np.int64, count=len(g.edges))
    total = 1 << n
    step = 1 << min(_CHUNK_BITS, n)
    for start in range(0, total, step):
        masks = np.arange(start, min(total, start + step), dtype=np.int64)
        incl = ((masks[:, None] >> shifts) & 1).astype(np.uint8)
        sizes = incl.sum(axis=1, dtype=np.int64)
        if len(g.edges):
            icounts = (incl[:, eu] & incl[:, ev]).sum(axis=1, dtype=np.int64)
        else:
            icounts = np.zeros(len(masks), dtype=np.int64)
        yield masks, sizes, icounts


@lru_cache(maxsize=64)
def _subset_counts_small(g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cached one-shot subset counts for graphs small enough to hold in memory."""
    if g.n > 16:
        raise OracleSizeError("cached subset table limited to n <= 16")
    chunks = list(_iter_subset_counts(g))
    return (
        np.concatenate([c[0] for c in chunks]),
        np.concatenate([c[1] for c in chunks]),
        np.concatenate([c[2] for c in chunks]),
    )


def _minimal_violator(g: Graph, mask: int, d: int) -> int:
    """Peel vertices of induced degree <= d; violation is preserved at each step."""
    while True:
        peeled = False
        for v in bits(mask):
            if (g.adj[v] & mask).bit_count() <= d:
                mask ^= 1 << v
                peeled = True
        if not peeled:
            return mask


def is_d_sparse_brute(g: Graph, d: int) -> SparsityVerdict:
    """Exhaustive d-sparsity oracle over all subsets with |X| >= d (n <= 24)."""
    if not 1 <= d <= 4:
        raise ValueError("brute oracle supports 1 <= d <= 4")
    cap_const = d * (d + 1) // 2
    for masks, sizes, icounts in _iter_subset_counts(g):
        bad = (sizes >= d) & (icounts > d * sizes - cap_const)
        if bad.any():
            witness = int(masks[np.argmax(bad)])
            return SparsityVerdict(False, _minimal_violator(g, witness, d), "brute")
    return SparsityVerdict(True, None, "brute")


def is_d_tight(g: Graph, d: int) -> bool:
    """d-sparse with exactly d|V| - C(d+1,2) edges."""
    if g.n < d:
        raise ValueError("tightness needs |V| >= d")
    if len(g.edges) != d * g.n - d * (d + 1) // 2:
        return False
    verdict = is_3_sparse(g) if d == 3 else is_d_sparse_brute(g, d)
    return verdict.sparse


# ---------------------------------------------------------------------------
# Polynomial 3-sparsity: triple-anchored edge-to-endpoint assignment


def _four_core(g: Graph) -> int:
    """Largest set in which every vertex keeps induced degree >= 4.

    Any minimal set violating the 3-sparsity count has induced minimum degree
    at least 4, so restricting the anchored-flow test to the 4-core preserves
    the verdict.
    """
    mask = g.full_mask
    changed = True
    while changed:
        changed = False
        for v in bits(mask):
            if (g.adj[v] & mask).bit_count() < 4:
                mask ^= 1 << v
                changed = True
    return mask


def _fit_orientation(edges, n, caps) -> tuple[list[int], list[int]] | tuple[None, int]:
    """Assign each edge to an endpoint with at most caps[v] edges at v.

    Returns (owner, loads) on success, or (None, visited_mask) where the
    visited set is a Hall violator: i(visited) > sum of caps over visited.
    """
    owner = [0] * len(edges)
    loads = [0] * n
    owned = [[] for _ in range(n)]  # edge indices currently assigned to v
    for idx, (u, v) in enumerate(edges):
        if loads[u] < caps[u]:
            owner[idx] = u
        elif loads[v] < caps[v]:
            owner[idx] = v
        else:
            # augment: find a chain of reassignments freeing u or v
            parent: dict[int, tuple[int, int]] = {u: (-1, -1), v: (-1, -1)}
            queue = [u, v]
            qi = 0
            target = -1
            while qi < len(queue):
                w = queue[qi]
                qi += 1
                for eidx in owned[w]:
                    a, b = edges[eidx]
                    z = b if a == w else a
                    if z in parent:
                        continue
                    parent[z] = (w, eidx)
                    if loads[z] < caps[z]:
                        target = z
                        queue = []
                        break
                    queue.append(z)
                if target >= 0:
                    break
            if target < 0:
                return None, bitmask(parent)
            # walk back flipping ownership along the chain
            z = target
            while True:
                w, eidx = parent[z]
                if w < 0:
                    break
                owned[w].remove(eidx)
                owned[z].append(eidx)
                owner[eidx] = z
                loads[w] -= 1
                loads[z] += 1
                z = w
            owner[idx] = z  # z is u or v, now under capacity
        w = owner[idx]
        loads[w] += 1
        owned[w].append(idx)
    return owner, loads


def _demote_anchors(edges, n, base_owner, base_loads, triple) -> int | None:
    """Reduce loads at the three anchors to <= 1; None on success, else violator mask."""
    owner = list(base_owner)
    loads = list(base_loads)
    owned = [[] for _ in range(n)]
    for idx, w in enumerate(owner):
        owned[w].append(idx)
    tset = set(triple)
    for t in triple:
        while loads[t] > 1:
            parent = {t: (-1, -1)}
            queue = [t]
            qi = 0
            target = -1
            while qi < len(queue):
                w = queue[qi]
                qi += 1
                for eidx in owned[w]:
                    a, b = edges[eidx]
                    z = b if a == w else a
                    if z in parent:
                        continue
                    parent[z] = (w, eidx)
                    cap = 1 if z in tset else 3
                    if loads[z] < cap:
                        target = z
                        queue = []
                        break
                    queue.append(z)
                if target >= 0:
                    break
            if target < 0:
                return bitmask(parent)
            z = target
            while True:
                w, eidx = parent[z]
                if w < 0:
                    break
                owned[w].remove(eidx)
                owned[z].append(eidx)
                owner[eidx] = z
                loads[w] -= 1
                loads[z] += 1
                z = w
    return None


def is_3_sparse(g: Graph) -> SparsityVerdict:
    """Polynomial 3-sparsity test via triple-anchored assignment (any n)."""
    n = g.n
    m = len(g.edges)
    if n >= 3 and m > 3 * n - 6:
        return SparsityVerdict(False, _minimal_violator(g, g.full_mask, 3), "flow")
    core = _four_core(g)
    core_vertices = list(bits(core))
    if len(core_vertices) < 5:
        # a violating set has >= 5 vertices, all of induced degree >= 4
        return SparsityVerdict(True, None, "flow")
    sub, labels = g.subgraph(core)
    edges = sub.edges
    owner, aux = _fit_orientation(edges, sub.n, [3] * sub.n)
    if owner is None:
        witness = bitmask(labels[v] for v in bits(aux))
        return SparsityVerdict(False, _minimal_violator(g, witness, 3), "flow")
    loads = aux
    k = sub.n
    for a in range(k - 2):
        for b in range(a + 1, k - 1):
            for c in range(b + 1, k):
                bad = _demote_anchors(edges, k, owner, loads, (a, b, c))
                if bad is not None:
                    witness = bitmask(labels[v] for v in bits(bad))
                    return SparsityVerdict(False, _minimal_violator(g, witness, 3), "flow")
    return SparsityVerdict(True, None, "flow")


# ---------------------------------------------------------------------------
# k-sets, cores, closure


def k_set_value(g: Graph, x: int) -> KSetReport:
    """Report k = 3|X| - i(X) plus core and boundary statistics for X."""
    size = x.bit_count()
    if size < 1:
        raise ValueError("k_set_value needs a nonempty set")
    i = induced_edge_count(g, x)
    return KSetReport(
        members=x,
        size=size,
        k=3 * size - i,
        is_core=is_core(g, x),
        boundary_degree=cross_edge_count(g, x, g.full_mask & ~x),
    )


def enumerate_k_sets(g: Graph, k_max: int, min_size: int) -> list[KSetReport]:
    """All X with |X| >= min_size and k(X) <= k_max, ordered by (size, mask)."""
    found: list[tuple[int, int]] = []
    for masks, sizes, icounts in _iter_subset_counts(g):
        sel = (sizes >= max(min_size, 1)) & (3 * sizes - icounts <= k_max)
        for m, s in zip(masks[sel], sizes[sel]):
            found.append((int(s), int(m)))
    found.sort()
    return [k_set_value(g, mask) for _, mask in found]


def is_core(g: Graph, x: int) -> bool:
    """Min induced degree >= 3 and every outside vertex has <= 2 neighbours in X."""
    if x == 0:
        raise ValueError("is_core needs a nonempty set")
    for v in bits(x):
        if (g.adj[v] & x).bit_count() < 3:
            return False
    for w in bits(g.full_mask & ~x):
        if (g.adj[w] & x).bit_count() > 2:
            return False
    return True


def proper_cores(g: Graph) -> list[int]:
    """All proper cores of g as bitmasks, ordered by (size, mask). Exhaustive."""
    if g.n > 20:
        raise OracleSizeError("core enumeration limited to n <= 20")
    out = []
    for x in range(1, g.full_mask):
        ok = True
        for v in bits(x):
            if (g.adj[v] & x).bit_count() < 3:
                ok = False
                break
        if not ok:
            continue
        for w in bits(g.full_mask & ~x):
            if (g.adj[w] & x).bit_count() > 2:
                ok = False
                break
        if ok:
            out.append(x)
    out.sort(key=lambda m: (m.bit_count(), m))
    return out


def closure(g: Graph, x: int) -> int:
    """Recursively absorb outside vertices with >= 3 neighbours in the set."""
    changed = True
    while changed:
        changed = False
        for w in bits(g.full_mask & ~x):
            if (g.adj[w] & x).bit_count() >= 3:
                x |= 1 << w
                changed = True
    return x
