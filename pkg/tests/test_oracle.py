import networkx as nx
import numpy as np
import pytest

from qfclique.algebra import make_field, make_residue_ring
from qfclique.errors import OracleLimitError, PreconditionError
from qfclique.oracle import (
    brute_clique_stats,
    brute_orthogonal_order,
    build_graph,
    max_clique_stats,
    oracle_stats,
    vector_coords,
    vector_index,
)
from qfclique.qform import binary_block, diagonal, evaluate, hyperbolic_plane, orthogonal_sum


def to_networkx(g) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.order))
    out.add_edges_from(g.edges())
    return out


def nx_stats(g: nx.Graph) -> tuple[int, int]:
    cliques = list(nx.find_cliques(g))
    best = max(len(c) for c in cliques)
    return best, sum(1 for c in cliques if len(c) == best)


def test_vector_index_roundtrip():
    F = make_field(3)
    coords = vector_coords(F, 3)
    assert coords[5].tolist() == [0, 1, 2]
    assert np.array_equal(vector_index(F, coords), np.arange(27))


def test_edges_follow_definition():
    F = make_field(5)
    q = diagonal(F, [1, 2])
    g = build_graph(q, 3)
    for u, v in g.edges():
        diff = tuple((int(x) - int(y)) % 5 for x, y in zip(g.coords[u], g.coords[v]))
        assert evaluate(q, diff) == 3
    assert all(g.degrees() == len(g.connection_set))


@pytest.mark.parametrize(
    "q,a,expected",
    [
        (diagonal(make_field(5), [1, 1, 2]), 1, (5, 250)),
        (orthogonal_sum(hyperbolic_plane(make_field(2)), hyperbolic_plane(make_field(2))), 1, (4, 8)),
        (diagonal(make_residue_ring(3, 2), [1, 1]), 1, (2, 486)),
        (hyperbolic_plane(make_field(2)), 1, (2, 2)),
        (diagonal(make_field(5), [1]), 1, (2, 5)),
        (diagonal(make_field(3), [1, 1]), 1, (3, 6)),
    ],
)
def test_oracle_against_networkx(q, a, expected):
    g = build_graph(q, a)
    assert nx_stats(to_networkx(g)) == expected
    stats = oracle_stats(q, a)
    assert (stats.omega, stats.count) == expected


@pytest.mark.parametrize("a", [1, 2])
def test_full_equals_reduced_plus_one(a):
    q = diagonal(make_field(7), [1, 3])
    full = brute_clique_stats(build_graph(q, a), direct_limit=0)
    direct = max_clique_stats(build_graph(q, a).adjacency)
    red = max_clique_stats(build_graph(q, a, "reduced").adjacency)
    assert full.omega == direct.omega == red.omega + 1
    assert full.count == direct.count


def test_translation_preserves_adjacency():
    F = make_field(3)
    q = diagonal(F, [1, 2, 2])
    g = build_graph(q, 1)
    rng = np.random.default_rng(1)
    for _ in range(5):
        v = rng.integers(0, 3, size=3)
        shifted = vector_index(F, F.add_table[g.coords, v[None, :]])
        for a_, b_ in list(g.edges())[:200]:
            assert shifted[b_] in g.neighbours(int(shifted[a_]))


def test_isotropic_full_graph():
    F = make_field(3)
    q = orthogonal_sum(binary_block(F, 0, 0), diagonal(F, [1]))
    assert oracle_stats(q, 0).omega == 3


def test_cap_and_mode_errors():
    q = diagonal(make_field(7), [1, 1, 1, 1])
    with pytest.raises(OracleLimitError):
        build_graph(q, 1, cap=100)
    with pytest.raises(PreconditionError):
        build_graph(q, 1, mode="other")


def test_export_formats():
    g = build_graph(diagonal(make_field(3), [1]), 1)
    assert g.export("edge-list") == "0 1\n0 2\n1 2\n"
    dot = g.export("dot")
    assert dot.startswith("graph G {") and '0 -- 1;' in dot
    with pytest.raises(PreconditionError):
        g.export("gml")


def test_parallel_workers_deterministic():
    q = diagonal(make_field(5), [1, 2, 2])
    assert oracle_stats(q, 2, workers=1) == oracle_stats(q, 2, workers=4)


def test_brute_orthogonal_order_hyperbolic_plane():
    assert brute_orthogonal_order(hyperbolic_plane(make_field(3))) == 4
