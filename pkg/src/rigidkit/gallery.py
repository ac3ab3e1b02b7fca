"""Named fixture graphs with their expected-property tables.

Every fixture used in the literature around 5-regular 3-sparse graphs lives
here: K_{6,6} minus a perfect matching (the unique reduction-free graph of
the family), the double banana (equivalently the 2-sum of two copies of K_5,
3-sparse yet flexible), K_{5,5} (a circuit that is not even 3-sparse), the
octahedron, and the parametrised families K_n and K_{d+2,d+2}.

``gallery(name)`` re-verifies the cheap structural expectations on load;
``verify="full"`` additionally runs the rank oracle entries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .graphs import Graph, triangles_on_edge
from .reduction import reducible_edges, reducible_pairs
from .rigidity import generic_rank, is_circuit, is_independent, is_rigid
from .sparsity import is_3_sparse, is_d_sparse_brute, is_d_tight


@dataclass(frozen=True)
class Fixture:
    name: str
    graph: Graph
    expected: dict


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def octahedron() -> Graph:
    """K_{2,2,2}: vertices 2k and 2k+1 are the three antipodal pairs."""
    edges = [
        (u, v)
        for u in range(6)
        for v in range(u + 1, 6)
        if u // 2 != v // 2
    ]
    return Graph(6, edges)


def k66_minus() -> Graph:
    """K_{6,6} minus the perfect matching a_i b_i; a_i = i, b_i = 6 + i."""
    edges = [(i, 6 + j) for i in range(6) for j in range(6) if i != j]
    return Graph(12, edges)


def double_banana() -> Graph:
    """Two copies of K_5 minus an edge glued along the missing edge 0-1."""
    edges = []
    for block in ({0, 1, 2, 3, 4}, {0, 1, 5, 6, 7}):
        vs = sorted(block)
        edges += [
            (u, v) for i, u in enumerate(vs) for v in vs[i + 1 :] if {u, v} != {0, 1}
        ]
    return Graph(8, sorted(set(edges)))


def two_sum_k5() -> Graph:
    """2-sum of two K_5's: glue along an edge, then delete the glued edge."""
    k5a = complete_graph(5).edges
    k5b = [(u if u < 2 else u + 3, v if v < 2 else v + 3) for u, v in complete_graph(5).edges]
    merged = set(k5a) | set(k5b)
    merged.discard((0, 1))
    return Graph(8, sorted(merged))


_PARAM = re.compile(r"^([a-z0-9_]+)\((\d+)\)$")


def gallery(name: str, verify: str = "fast") -> Fixture:
    """Fetch a named fixture; expected properties re-verify on load.

    ``verify`` is "none", "fast" (structural counts; default) or "full"
    (also the rank-oracle entries).
    """
    param = None
    base = name
    m = _PARAM.match(name)
    if m:
        base, param = m.group(1), int(m.group(2))
    builders = {
        "k66minus": _fx_k66minus,
        "double-banana": _fx_double_banana,
        "two-sum-k5": _fx_two_sum_k5,
        "k55": _fx_k55,
        "octahedron": _fx_octahedron,
        "k_n": _fx_kn,
        "k_d2_d2": _fx_kd2d2,
    }
    if base not in builders:
        raise KeyError(f"unknown fixture {name!r}")
    if (param is None) == (base in ("k_n", "k_d2_d2")):
        raise KeyError(f"fixture {base!r} parametrisation mismatch in {name!r}")
    fx = builders[base](param) if param is not None else builders[base]()
    if verify != "none":
        _verify_fixture(fx, full=(verify == "full"))
    return fx


def _fx_k66minus() -> Fixture:
    g = k66_minus()
    return Fixture(
        "k66minus",
        g,
        {
            "n": 12,
            "m": 30,
            "regular": 5,
            "sparse3": True,
            "tight3": True,
            "triangle_free": True,
            "reducible_moves": 0,
            "rank3": 30,
            "independent3": True,
            "rigid3": True,
        },
    )


def _banana_expected() -> dict:
    return {
        "n": 8,
        "m": 18,
        "sparse3": True,
        "independent3": False,
        "rank3": 17,
        "rigid3": False,
        "circuit3": True,
    }


def _fx_double_banana() -> Fixture:
    return Fixture("double-banana", double_banana(), _banana_expected())


def _fx_two_sum_k5() -> Fixture:
    return Fixture("two-sum-k5", two_sum_k5(), _banana_expected())


def _fx_k55() -> Fixture:
    return Fixture(
        "k55",
        complete_bipartite(5, 5),
        {
            "n": 10,
            "m": 25,
            "regular": 5,
            "sparse3": False,
            "independent3": False,
            "rank3": 24,
            "circuit3": True,
        },
    )


def _fx_octahedron() -> Fixture:
    return Fixture(
        "octahedron",
        octahedron(),
        {
            "n": 6,
            "m": 12,
            "regular": 4,
            "sparse3": True,
            "tight3": True,
            "rank3": 12,
            "independent3": True,
            "rigid3": True,
        },
    )


def _fx_kn(n: int) -> Fixture:
    g = complete_graph(n)
    expected = {"n": n, "m": n * (n - 1) // 2}
    if n >= 3:
        expected["rank3"] = min(len(g.edges), 3 * n - 6)
        expected["independent3"] = len(g.edges) <= 3 * n - 6
    return Fixture(f"k_n({n})", g, expected)


def _fx_kd2d2(d: int) -> Fixture:
    g = complete_bipartite(d + 2, d + 2)
    return Fixture(
        f"k_d2_d2({d})",
        g,
        {
            "n": 2 * d + 4,
            "m": (d + 2) ** 2,
            "regular": d + 2,
            f"sparse{d}": True,
            f"independent{d}": False,
            "d": d,
        },
    )


def _verify_fixture(fx: Fixture, full: bool) -> None:
    g = fx.graph
    exp = fx.expected
    checks: list[tuple[str, object, object]] = []
    if "n" in exp:
        checks.append(("n", g.n, exp["n"]))
    if "m" in exp:
        checks.append(("m", len(g.edges), exp["m"]))
    if "regular" in exp:
        checks.append(("regular", g.is_regular(exp["regular"]), True))
    if "triangle_free" in exp:
        tf = all(triangles_on_edge(g, e) == 0 for e in g.edges)
        checks.append(("triangle_free", tf, exp["triangle_free"]))
    if "reducible_moves" in exp:
        count = len(reducible_edges(g)) + len(reducible_pairs(g))
        checks.append(("reducible_moves", count, exp["reducible_moves"]))
    for key, value in exp.items():
        if key.startswith("sparse"):
            d = int(key[len("sparse"):])
            verdict = is_3_sparse(g) if d == 3 else is_d_sparse_brute(g, d)
            checks.append((key, verdict.sparse, value))
        elif key.startswith("tight"):
            d = int(key[len("tight"):])
            checks.append((key, is_d_tight(g, d), value))
    if full:
        for key, value in exp.items():
            if key.startswith("rank"):
                d = int(key[len("rank"):])
                checks.append((key, generic_rank(g, d, seed=("fixture", fx.name)).rank, value))
            elif key.startswith("independent"):
                d = int(key[len("independent"):])
                checks.append((key, is_independent(g, d, seed=("fixture", fx.name)).independent, value))
            elif key.startswith("rigid"):
                d = int(key[len("rigid"):])
                checks.append((key, is_rigid(g, d, seed=("fixture", fx.name)), value))
            elif key.startswith("circuit"):
                d = int(key[len("circuit"):])
                checks.append((key, is_circuit(g, d, seed=("fixture", fx.name)), value))
    bad = [(name, got, want) for name, got, want in checks if got != want]
    if bad:
        raise AssertionError(f"fixture {fx.name} failed expectations: {bad}")
