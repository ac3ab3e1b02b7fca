"""Reducibility, admissibility, blocker search, and independence certificates.

An edge is *reducible* when it lies in one or two triangles; a non-adjacent
pair is reducible when it has one to three common neighbours.  A reducible
move is *admissible* when the corresponding contraction stays 3-sparse.

Non-admissibility always has a small witness.  Contracting u,v maps a set
X containing both onto X' with i(X') = i(X) - 1 - t (edge) or i(X) - t
(pair), where t counts the common neighbours of u and v inside X.  Writing
k(X) = 3|X| - i(X), the contraction violates 3-sparsity through X exactly
when k(X) + t <= 7 (edge) or k(X) + t <= 8 (pair) with |X| >= 4, and every
violation in the contracted graph arises this way.  ``find_blocker`` searches
that characterisation exhaustively, so it agrees with ``is_admissible`` by
construction of the arithmetic, not by luck.

``certify_independent`` turns the reduction strategy into a replayable
certificate: contract admissible moves (preferring ones that cross a maximal
proper core) until a bounded-degree leaf applies, then record the inverse
splits.  Every structural inference is cross-checked by the rank oracle, so
the engine is sound for any input.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .graphs import (
    Graph,
    bitmask,
    bits,
    common_neighbors,
    connectivity,
    Connectivity,
    is_connected,
    parse_graph6,
    write_graph6,
)
from .moves import (
    ContractionSpec,
    InverseSplit,
    SplitSpec,
    apply_inverse_split,
    edge_contract,
    inverse_split_of_contraction,
    one_extension,
    spider_contract,
    zero_extension,
)
from .rigidity import RankResult, is_independent
from .sparsity import (
    _iter_subset_counts,
    is_3_sparse,
    is_d_sparse_brute,
    proper_cores,
)


class InternalInconsistencyError(RuntimeError):
    """A structural inference and the rank oracle disagree; treat as a bug."""


@dataclass(frozen=True)
class Blocker:
    members: int  # bitmask, contains both move endpoints
    k: int  # 6, 7 or 8
    case_label: str  # clause of the non-admissibility characterisation

    def vertex_list(self) -> list[int]:
        return list(bits(self.members))


@dataclass(frozen=True)
class ReductionMove:
    kind: str  # "edge" | "spider"
    target: tuple[int, int]
    triangles_or_common: int
    admissible: bool | None = None
    blocker: Blocker | None = None


def reducible_edges(g: Graph) -> list[ReductionMove]:
    """Edges lying in at least one and at most two triangles."""
    out = []
    for u, v in g.edges:
        t = (g.adj[u] & g.adj[v]).bit_count()
        if 1 <= t <= 2:
            out.append(ReductionMove("edge", (u, v), t))
    return out


def reducible_pairs(g: Graph) -> list[ReductionMove]:
    """Non-adjacent pairs with at least one and at most three common neighbours."""
    out = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.adj[u] >> v & 1:
                continue
            c = (g.adj[u] & g.adj[v]).bit_count()
            if 1 <= c <= 3:
                out.append(ReductionMove("spider", (u, v), c))
    return out


def contract_move(g: Graph, move: ReductionMove) -> Graph:
    """Contract per the move kind, with degree bookkeeping on 5-regular inputs."""
    u, v = move.target
    commons = common_neighbors(g, u, v)
    was_5regular = g.is_regular(5)
    if move.kind == "edge":
        h = edge_contract(g, move.target)
        merged_expect = 8 - commons.bit_count()
    else:
        h = spider_contract(g, move.target)
        merged_expect = 10 - 2 * commons.bit_count()
    if was_5regular:
        lo = min(u, v)
        hi = max(u, v)
        if h.degree(lo) != merged_expect:
            raise InternalInconsistencyError(
                f"merged vertex degree {h.degree(lo)}, expected {merged_expect}"
            )
        for w in bits(commons):
            w_new = w - (w > hi)
            if h.degree(w_new) != 4:
                raise InternalInconsistencyError(
                    f"triangle partner {w} has degree {h.degree(w_new)} after contraction"
                )
    return h


def is_admissible(g: Graph, move: ReductionMove) -> bool:
    """Contract and test 3-sparsity of the result."""
    _require_reducible(g, move)
    return is_3_sparse(contract_move(g, move)).sparse


def _require_reducible(g: Graph, move: ReductionMove) -> int:
    u, v = move.target
    c = common_neighbors(g, u, v).bit_count()
    if move.kind == "edge":
        if not g.has_edge(u, v):
            raise ValueError(f"({u},{v}) is not an edge")
        if not 1 <= c <= 2:
            raise ValueError(f"edge ({u},{v}) lies in {c} triangles, not reducible")
    else:
        if g.has_edge(u, v) or u == v:
            raise ValueError(f"({u},{v}) is not a non-adjacent pair")
        if not 1 <= c <= 3:
            raise ValueError(f"pair ({u},{v}) has {c} common neighbours, not reducible")
    return c


_K_LETTER = {6: "a", 7: "b", 8: "c"}


def find_blocker(g: Graph, move: ReductionMove) -> Blocker | None:
    """Smallest witness set certifying non-admissibility, or None.

    The witness is the (size, mask)-minimal X containing both endpoints with
    k(X) + |common neighbours inside X| at most 7 (edge) or 8 (pair); such an
    X exists iff the contraction breaks 3-sparsity.
    """
    c_total = _require_reducible(g, move)
    u, v = move.target
    uv = 1 << u | 1 << v
    commons = common_neighbors(g, u, v)
    limit = 7 if move.kind == "edge" else 8
    best: tuple[int, int] | None = None
    for masks, sizes, icounts in _iter_subset_counts(g):
        k = 3 * sizes - icounts
        tin = np.bitwise_count((masks & commons).astype(np.uint64)).astype(np.int64)
        sel = ((masks & uv) == uv) & (sizes >= 4) & (k + tin <= limit)
        if sel.any():
            cand_sizes = sizes[sel]
            cand_masks = masks[sel]
            i = np.lexsort((cand_masks, cand_sizes))[0]
            cand = (int(cand_sizes[i]), int(cand_masks[i]))
            if best is None or cand < best:
                best = cand
    if best is None:
        return None
    size, mask = best
    k = 3 * size - _induced(g, mask)
    return Blocker(members=mask, k=k, case_label=f"{c_total}({_K_LETTER[k]})")


def _induced(g: Graph, mask: int) -> int:
    total = 0
    for w in bits(mask):
        total += (g.adj[w] & mask).bit_count()
    return total // 2


def evaluate_move(g: Graph, move: ReductionMove) -> ReductionMove:
    """Fill in admissibility and (when non-admissible) the blocker witness."""
    adm = is_admissible(g, move)
    blk = None if adm else find_blocker(g, move)
    if adm == (blk is not None):
        raise InternalInconsistencyError(
            f"blocker search and contraction disagree on {move.kind} {move.target}"
        )
    return replace(move, admissible=adm, blocker=blk)


def has_no_reducible_move(g: Graph) -> bool:
    """For connected 5-regular 3-sparse graphs this characterises K_{6,6} minus
    a perfect matching, the unique reduction-free graph in that family."""
    return not reducible_edges(g) and not reducible_pairs(g)


def find_reducible_crossing_core(g: Graph, core: int) -> ReductionMove:
    """A reducible edge or pair with one endpoint inside a proper core.

    Guaranteed to exist for connected, 5-regular, 3-sparse graphs other than
    K_{6,6} minus a perfect matching; precondition violations raise distinct
    ValueErrors and a missing move raises InternalInconsistencyError.
    """
    if not is_connected(g):
        raise ValueError("graph must be connected")
    if not g.is_regular(5):
        raise ValueError("graph must be 5-regular")
    if not is_3_sparse(g).sparse:
        raise ValueError("graph must be 3-sparse")
    if core == g.full_mask:
        raise ValueError("core must be proper")
    from .sparsity import is_core

    if not is_core(g, core):
        raise ValueError("the given set is not a core")
    moves = reducible_edges(g) + reducible_pairs(g)
    if not moves:
        raise ValueError(
            "graph has no reducible edge or vertex-pair; it is the K_{6,6}-minus"
            "-perfect-matching exception"
        )
    crossing = [
        m
        for m in moves
        if (core >> m.target[0] & 1) != (core >> m.target[1] & 1)
    ]
    crossing.sort(key=lambda m: (m.target, m.kind))
    if not crossing:
        raise InternalInconsistencyError("no reducible move crosses the proper core")
    return crossing[0]


# ---------------------------------------------------------------------------
# Bounded-degree inference rules


def bounded_degree_independent(g: Graph, d: int, designated: int | None = None) -> str:
    """Apply the bounded-degree independence criteria as a certified predicate.

    Returns "independent" when the graph is d-sparse and either every degree
    is at most d+2 (with minimum degree at most d+1), or the graph is
    2-connected and all vertices except one designated vertex obey the d+2
    bound.  Returns "not-applicable" otherwise, never "dependent".
    """
    if g.n == 0 or not is_connected(g):
        return "not-applicable"
    degs = g.degrees()
    if min(degs) > d + 1:
        return "not-applicable"
    high = [w for w in range(g.n) if degs[w] > d + 2]
    if designated is None:
        if len(high) > 1:
            return "not-applicable"
    else:
        if any(w != designated for w in high):
            return "not-applicable"
    if high and connectivity(g) is not Connectivity.BICONNECTED:
        return "not-applicable"
    sparse = is_3_sparse(g).sparse if d == 3 else is_d_sparse_brute(g, d).sparse
    if not sparse:
        return "not-applicable"
    return "independent"


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class CertStep:
    rule: str
    move: dict
    graph_after: Graph


@dataclass(frozen=True)
class Certificate:
    base_graph: Graph
    base_rule: str  # small-case | bounded-degree-theorem | rank-certified
    base_info: dict
    steps: tuple[CertStep, ...]
    final_graph: Graph

    def to_json_dict(self) -> dict:
        base = {
            "graph6": write_graph6(self.base_graph),
            "rule": self.base_rule,
            "rank": self.base_info.get("rank", len(self.base_graph.edges)),
            "seed": str(self.base_info.get("seed", "")),
        }
        if "designated" in self.base_info:
            base["designated"] = self.base_info["designated"]
        return {
            "base": base,
            "steps": [
                {
                    "rule": s.rule,
                    "move": s.move,
                    "graph6_after": write_graph6(s.graph_after),
                }
                for s in self.steps
            ],
            "final_graph6": write_graph6(self.final_graph),
        }


@dataclass(frozen=True)
class CertificationFailure:
    reason: str
    rank: RankResult | None = None
    witness: int | None = None

    def to_json_dict(self) -> dict:
        out = {"certified": False, "reason": self.reason}
        if self.rank is not None:
            out["rank"] = self.rank.to_json_dict()
        if self.witness is not None:
            out["witness"] = list(bits(self.witness))
        return out


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    failed_step: int | None = None  # -1 for the base, 0.. for steps, None when ok
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


_SPLIT_RULES = ("vertex-split", "spider-split", "subgraph-of-split")


def _split_step(g: Graph, move: ReductionMove, inv: InverseSplit) -> CertStep:
    if move.kind == "edge":
        rule = "vertex-split" if inv.exact else "subgraph-of-split"
    else:
        rule = "spider-split" if inv.exact else "subgraph-of-split"
    payload = {
        "kind": inv.kind,
        "pair": list(move.target),
        "v": inv.spec.v,
        "shared": list(inv.spec.shared),
        "n1": list(inv.spec.n1),
        "v2_index": inv.spec.v2_index,
        "deleted_edges": [list(e) for e in inv.deleted_edges],
    }
    return CertStep(rule=rule, move=payload, graph_after=g)


def _maximal_proper_core(g: Graph) -> int | None:
    if g.n > 16:
        return None
    cores = proper_cores(g)
    if not cores:
        return None
    return max(cores, key=lambda m: (m.bit_count(), -m))


def _ordered_moves(g: Graph) -> list[ReductionMove]:
    moves = reducible_edges(g) + reducible_pairs(g)
    core = _maximal_proper_core(g)
    if core is None:
        return sorted(moves, key=lambda m: (m.target, m.kind))
    def crossing(m: ReductionMove) -> bool:
        return (core >> m.target[0] & 1) != (core >> m.target[1] & 1)
    return sorted(moves, key=lambda m: (not crossing(m), m.target, m.kind))


_MAX_CONTRACTION_ATTEMPTS = 8


def certify_independent(g: Graph, seed: object = 0) -> Certificate | CertificationFailure:
    """Build a replayable independence certificate, or a failure report.

    Refuses non-3-sparse inputs outright (they cannot be independent).  The
    reduction strategy: bounded-degree leaf when applicable, otherwise
    contract an admissible reducible move (preferring moves that cross a
    maximal proper core) and recurse; with no admissible move left the current
    graph becomes a rank-certified base.  Certificates are double-checked by
    an independent rank evaluation of the input; disagreement raises
    InternalInconsistencyError.
    """
    sv = is_3_sparse(g)
    if not sv.sparse:
        return CertificationFailure("not-3-sparse", witness=sv.witness)
    result = _certify(g, seed)
    if isinstance(result, CertificationFailure):
        return result
    confirm = is_independent(g, 3, seed=(seed, "confirm"))
    if not confirm.independent:
        raise InternalInconsistencyError(
            "certificate constructed for a graph the rank oracle reports dependent"
        )
    return result


def _certify(g: Graph, seed: object) -> Certificate | CertificationFailure:
    if g.n <= 4:
        return Certificate(g, "small-case", {"rank": len(g.edges), "seed": seed}, (), g)
    if bounded_degree_independent(g, 3) == "independent":
        info = {"rank": len(g.edges), "seed": seed, "designated": None}
        return Certificate(g, "bounded-degree-theorem", info, (), g)
    attempts = 0
    for move in _ordered_moves(g):
        if attempts >= _MAX_CONTRACTION_ATTEMPTS:
            break
        if not is_admissible(g, move):
            continue
        attempts += 1
        h = contract_move(g, move)
        sub = _certify(h, (seed, move.target))
        if isinstance(sub, CertificationFailure):
            continue
        inv = inverse_split_of_contraction(g, ContractionSpec(move.kind, move.target))
        step = _split_step(g, move, inv)
        return Certificate(sub.base_graph, sub.base_rule, sub.base_info, sub.steps + (step,), g)
    res = is_independent(g, 3, seed=(seed, "base"))
    if res.independent:
        info = {"rank": res.rank.rank, "seed": (seed, "base")}
        return Certificate(g, "rank-certified", info, (), g)
    return CertificationFailure("rank-dependent", rank=res.rank)


def _apply_step(current: Graph, step: CertStep) -> Graph:
    rule = step.rule
    m = step.move
    if rule in _SPLIT_RULES:
        inv = InverseSplit(
            kind=m["kind"],
            spec=SplitSpec(
                v=m["v"],
                shared=tuple(m["shared"]),
                n1=tuple(m["n1"]),
                v2_index=m["v2_index"],
            ),
            deleted_edges=tuple(tuple(e) for e in m["deleted_edges"]),
        )
        if rule == "vertex-split" and (inv.kind != "vertex" or inv.deleted_edges):
            raise ValueError("vertex-split step must be an exact vertex split")
        if rule == "spider-split" and (inv.kind != "spider" or inv.deleted_edges):
            raise ValueError("spider-split step must be an exact spider split")
        return apply_inverse_split(current, inv, d=3)
    if rule == "0-extension":
        return zero_extension(current, m["neighbours"], m.get("d", 3))
    if rule == "1-extension":
        return one_extension(current, tuple(m["removed_edge"]), m["neighbours"], m.get("d", 3))
    if rule == "isostatic-substitution":
        from .rigidity import isostatic_substitute

        return isostatic_substitute(
            current, bitmask(m["h_vertices"]), [tuple(e) for e in m["h_prime_edges"]]
        )
    raise ValueError(f"unknown certificate rule {rule!r}")


def verify_certificate(cert: Certificate, g: Graph, seed: object = None) -> VerificationResult:
    """Replay a certificate from its base and re-check every rule's premises.

    Rank-certified bases are re-evaluated with fresh randomness (or the given
    seed), so verification does not depend on the seed used at build time.
    """
    base = cert.base_graph
    if cert.base_rule == "small-case":
        if base.n > 4:
            return VerificationResult(False, -1, "small-case base has more than 4 vertices")
    elif cert.base_rule == "bounded-degree-theorem":
        designated = cert.base_info.get("designated")
        if bounded_degree_independent(base, 3, designated) != "independent":
            return VerificationResult(False, -1, "bounded-degree hypotheses do not hold")
    elif cert.base_rule == "rank-certified":
        fresh = seed if seed is not None else ("verify", write_graph6(base))
        if not is_independent(base, 3, seed=fresh).independent:
            return VerificationResult(False, -1, "base graph fails the rank certificate")
    else:
        return VerificationResult(False, -1, f"unknown base rule {cert.base_rule!r}")
    current = base
    for i, step in enumerate(cert.steps):
        try:
            current = _apply_step(current, step)
        except ValueError as exc:
            return VerificationResult(False, i, f"step raised: {exc}")
        if current != step.graph_after:
            return VerificationResult(False, i, "replayed graph differs from recorded graph")
    if current != cert.final_graph:
        return VerificationResult(False, len(cert.steps), "replay does not reach the final graph")
    if current != g:
        return VerificationResult(False, len(cert.steps), "final graph differs from the target")
    return VerificationResult(True)


def certificate_to_json(cert) -> dict:
    return cert.to_json_dict()


def certificate_from_json(doc: dict) -> Certificate:
    base = doc["base"]
    steps = tuple(
        CertStep(rule=s["rule"], move=s["move"], graph_after=parse_graph6(s["graph6_after"]))
        for s in doc["steps"]
    )
    info = {"rank": base.get("rank"), "seed": base.get("seed")}
    if "designated" in base:
        info["designated"] = base["designated"]
    return Certificate(
        base_graph=parse_graph6(base["graph6"]),
        base_rule=base["rule"],
        base_info=info,
        steps=steps,
        final_graph=parse_graph6(doc["final_graph6"]),
    )
