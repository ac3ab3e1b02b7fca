"""The generic rigidity matroid as an exact numeric oracle.

The rigidity matrix of a graph with a placement p in d-space has one row per
edge uv: the d-block of columns at u holds p(u) - p(v), the block at v holds
p(v) - p(u), everything else is zero.  The rank of that matrix at a *generic*
placement is an isomorphism invariant; a graph is R_d-independent when the
generic rank equals its edge count.

Genericity is replaced operationally by random evaluation: the rank at any
specialisation is a certified lower bound on the generic rank, and random
points over a 62-bit prime field attain the generic rank except with
probability at most (matrix size)/p < 2**-55 per trial (Schwartz-Zippel).
``independent`` verdicts are therefore exact certificates, while ``dependent``
verdicts are re-checked with a second prime and once with exact integer
arithmetic before being reported.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graphs import Graph, bits

PRIME_A = 4611686018427387847  # largest prime below 2**62
PRIME_B = 4611686018427387817  # next prime below that
COORD_BITS = 40
DEFAULT_TRIALS = 3


@dataclass(frozen=True)
class Configuration:
    """A placement of vertices: integer coordinates over GF(p) or the rationals."""

    d: int
    points: tuple[tuple[int, ...], ...]
    field: tuple  # ("gf", p) or ("qq",)
    seed: object = None

    def __post_init__(self):
        for pt in self.points:
            if len(pt) != self.d:
                raise ValueError("every point needs exactly d coordinates")


@dataclass(frozen=True)
class RigidityMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]
    field: tuple


@dataclass(frozen=True)
class RankResult:
    rank: int
    trials: int
    certainty: str  # certified-lower-bound | multi-trial-probabilistic | exact-rational
    seed: object

    def to_json_dict(self) -> dict:
        return {
            "rank": self.rank,
            "method": self.certainty,
            "primes": [PRIME_A, PRIME_B],
            "seed": repr(self.seed),
            "trials": self.trials,
        }


@dataclass(frozen=True)
class IndependenceResult:
    independent: bool
    rank: RankResult

    def __bool__(self) -> bool:
        return self.independent


def random_configuration(n: int, d: int, rng: random.Random, field: tuple) -> Configuration:
    """Draw coordinates uniformly: from [0, p) over GF(p), 40-bit ints otherwise."""
    if field[0] == "gf":
        p = field[1]
        pts = tuple(tuple(rng.randrange(p) for _ in range(d)) for _ in range(n))
    else:
        pts = tuple(tuple(rng.getrandbits(COORD_BITS) for _ in range(d)) for _ in range(n))
    return Configuration(d, pts, field)


def build_rigidity_matrix(g: Graph, config: Configuration) -> RigidityMatrix:
    """The |E| x d|V| matrix with the edge-row rule above; deterministic in (g, config)."""
    if len(config.points) != g.n:
        raise ValueError(f"configuration has {len(config.points)} points for {g.n} vertices")
    d = config.d
    p = config.field[1] if config.field[0] == "gf" else None
    rows = []
    for u, v in g.edges:
        row = [0] * (d * g.n)
        pu, pv = config.points[u], config.points[v]
        for k in range(d):
            diff = pu[k] - pv[k]
            if p is not None:
                diff %= p
            row[d * u + k] = diff
            row[d * v + k] = -diff % p if p is not None else -diff
        rows.append(tuple(row))
    return RigidityMatrix(len(g.edges), d * g.n, tuple(rows), config.field)


def rank_mod_p(rows, p: int) -> int:
    """Row-reduction rank over GF(p)."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    if nrows == 0:
        return 0
    ncols = len(mat[0])
    rank = 0
    for c in range(ncols):
        pivot = -1
        for i in range(rank, nrows):
            if mat[i][c] % p:
                pivot = i
                break
        if pivot < 0:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        prow = mat[rank]
        inv = pow(prow[c], -1, p)
        for i in range(rank + 1, nrows):
            a = mat[i][c] % p
            if a:
                f = a * inv % p
                row = mat[i]
                for j in range(c, ncols):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_exact_integer(rows) -> int:
    """Fraction-free (Bareiss) rank of an integer matrix."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    if nrows == 0:
        return 0
    ncols = len(mat[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        pivot = -1
        for i in range(rank, nrows):
            if mat[i][c]:
                pivot = i
                break
        if pivot < 0:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        prow = mat[rank]
        pv = prow[c]
        for i in range(rank + 1, nrows):
            row = mat[i]
            a = row[c]
            for j in range(c, ncols):
                row[j] = (row[j] * pv - a * prow[j]) // prev
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def _rank_cap(g: Graph, d: int) -> int:
    """Upper bound on the generic rank: d|V| - C(d+1,2) once |V| >= d."""
    m = len(g.edges)
    if g.n < d:
        return m
    return min(m, d * g.n - d * (d + 1) // 2)


def _rank_at_random(g: Graph, d: int, rng: random.Random, field: tuple) -> int:
    config = random_configuration(g.n, d, rng, field)
    mat = build_rigidity_matrix(g, config)
    if field[0] == "gf":
        return rank_mod_p(mat.entries, field[1])
    return rank_exact_integer(mat.entries)


def generic_rank(
    g: Graph,
    d: int,
    trials: int = DEFAULT_TRIALS,
    seed: object = 0,
    field: tuple = ("gf", PRIME_A),
) -> RankResult:
    """Best rank over `trials` random configurations: a certified lower bound.

    With ``field=("qq",)`` a single exact integer evaluation is performed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(_mix_seed(seed))
    cap = _rank_cap(g, d)
    if field[0] == "qq":
        return RankResult(_rank_at_random(g, d, rng, field), 1, "exact-rational", seed)
    best = 0
    done = 0
    for _ in range(trials):
        best = max(best, _rank_at_random(g, d, rng, field))
        done += 1
        if best == cap:
            break
    return RankResult(best, done, "certified-lower-bound", seed)


def _mix_seed(seed: object) -> int:
    if isinstance(seed, int):
        return seed
    return int.from_bytes(repr(seed).encode(), "little") % (1 << 63)


def is_independent(
    g: Graph, d: int, trials: int = DEFAULT_TRIALS, seed: object = 0
) -> IndependenceResult:
    """True iff the generic rank equals |E|.

    A ``True`` verdict is an exact certificate (a rank lower bound meeting
    |E|).  A candidate ``False`` verdict escalates: `trials` runs over a second
    prime, then one exact integer evaluation.
    """
    m = len(g.edges)
    if m == 0:
        return IndependenceResult(True, RankResult(0, 0, "certified-lower-bound", seed))
    res = generic_rank(g, d, trials, seed, ("gf", PRIME_A))
    if res.rank == m:
        return IndependenceResult(True, res)
    best = res.rank
    if _rank_cap(g, d) >= m:
        res_b = generic_rank(g, d, trials, (seed, "b"), ("gf", PRIME_B))
        best = max(best, res_b.rank)
        if res_b.rank == m:
            return IndependenceResult(True, res_b)
        res_q = generic_rank(g, d, 1, (seed, "qq"), ("qq",))
        best = max(best, res_q.rank)
        if res_q.rank == m:
            return IndependenceResult(True, res_q)
        trials_total = res.trials + res_b.trials + 1
    else:
        trials_total = res.trials
    return IndependenceResult(False, RankResult(best, trials_total, "multi-trial-probabilistic", seed))


def is_rigid(g: Graph, d: int, trials: int = DEFAULT_TRIALS, seed: object = 0) -> bool:
    """Asimow-Roth: |V| < d and complete, or |V| >= d and rank = d|V| - C(d+1,2)."""
    if g.n < d:
        return len(g.edges) == g.n * (g.n - 1) // 2
    target = d * g.n - d * (d + 1) // 2
    return generic_rank(g, d, trials, seed).rank == target


def is_circuit(g: Graph, d: int, trials: int = DEFAULT_TRIALS, seed: object = 0) -> bool:
    """Dependent, and every single-edge deletion is independent."""
    if len(g.edges) < 1:
        raise ValueError("a circuit needs at least one edge")
    if is_independent(g, d, trials, seed):
        return False
    for e in g.edges:
        smaller = Graph(g.n, [f for f in g.edges if f != e])
        if not is_independent(smaller, d, trials, (seed, e)):
            return False
    return True


def isostatic_substitute(
    g: Graph,
    h_vertices: int,
    h_prime_edges,
    d: int = 3,
    trials: int = DEFAULT_TRIALS,
    seed: object = 0,
) -> Graph:
    """Swap a minimally rigid induced subgraph for another on the same vertices.

    ``h_vertices`` is a bitmask of a proper subset; both the induced subgraph
    and the replacement edge set must be minimally R_d-rigid on that vertex
    set, which keeps the rank of the host unchanged.
    """
    if h_vertices == 0 or h_vertices == g.full_mask:
        raise ValueError("substitution needs a proper nonempty vertex subset")
    keep = list(bits(h_vertices))
    index = {v: i for i, v in enumerate(keep)}
    h_edges = [e for e in g.edges if h_vertices >> e[0] & 1 and h_vertices >> e[1] & 1]
    h = Graph(len(keep), [(index[u], index[v]) for u, v in h_edges])
    if not (is_rigid(h, d, trials, seed) and is_independent(h, d, trials, seed)):
        raise ValueError("induced subgraph on h_vertices is not minimally rigid")
    hp_edges = []
    for u, v in h_prime_edges:
        if not (h_vertices >> u & 1 and h_vertices >> v & 1):
            raise ValueError(f"replacement edge ({u},{v}) leaves the vertex set")
        hp_edges.append((index[u], index[v]))
    hp = Graph(len(keep), hp_edges)
    if not (is_rigid(hp, d, trials, seed) and is_independent(hp, d, trials, seed)):
        raise ValueError("replacement edge set is not minimally rigid")
    new_edges = [e for e in g.edges if e not in set(h_edges)]
    for u, v in h_prime_edges:
        new_edges.append((u, v) if u < v else (v, u))
    return Graph(g.n, sorted(set(new_edges)))
