import itertools
import os
import subprocess
import sys

import networkx as nx
import numpy as np
import pytest

from qfclique import _kernels
from qfclique.oracle import max_clique_stats


def bitset_adjacency(g: nx.Graph) -> np.ndarray:
    n = g.number_of_nodes()
    adj = np.zeros((n, max(1, (n + 63) // 64)), dtype=np.uint64)
    for u, v in g.edges():
        adj[u, v >> 6] |= np.uint64(1) << np.uint64(v & 63)
        adj[v, u >> 6] |= np.uint64(1) << np.uint64(u & 63)
    return adj


_REFERENCE: dict = {}


def nx_stats(g: nx.Graph) -> tuple[int, int]:
    """(clique number, number of maximum cliques) from networkx, memoised per graph."""
    key = (g.number_of_nodes(), tuple(sorted(g.edges())))
    if key not in _REFERENCE:
        cliques = list(nx.find_cliques(g))
        best = max(len(c) for c in cliques)
        _REFERENCE[key] = (best, sum(1 for c in cliques if len(c) == best))
    return _REFERENCE[key]


# dense large graphs make the networkx reference itself slow, so density drops with size
SIZES = [(1, 0.5), (7, 0.1), (7, 0.5), (7, 0.85), (40, 0.1), (40, 0.5), (40, 0.85), (70, 0.5), (70, 0.7), (130, 0.1), (130, 0.4)]
GRAPHS = [
    nx.gnp_random_graph(n, p, seed=seed) for (n, p), seed in itertools.product(SIZES, (0, 1))
] + [nx.complete_graph(9), nx.empty_graph(5), nx.cycle_graph(8), nx.paley_graph(13).to_undirected()]


@pytest.mark.parametrize("g", GRAPHS, ids=lambda g: f"n{g.number_of_nodes()}m{g.number_of_edges()}")
@pytest.mark.parametrize("use_numba", [True, False], ids=["numba", "fallback"])
@pytest.mark.parametrize("workers", [1, 3])
def test_kernel_matches_networkx(g, use_numba, workers):
    g = nx.convert_node_labels_to_integers(nx.Graph(g))
    stats = max_clique_stats(bitset_adjacency(g), workers=workers, use_numba=use_numba)
    assert (stats.omega, stats.count) == nx_stats(g)


def test_kernels_agree_from_arbitrary_roots():
    g = nx.gnp_random_graph(90, 0.6, seed=5)
    adj = bitset_adjacency(g)
    ints = _kernels.adjacency_to_ints(adj)
    W = adj.shape[1]
    rng = np.random.default_rng(0)
    for _ in range(20):
        p0 = rng.integers(0, 2**63, size=W, dtype=np.uint64)
        p0[-1] &= np.uint64((1 << (90 - 64)) - 1)
        x0 = np.zeros(W, dtype=np.uint64)
        a = _kernels.count_from_root(adj, ints, p0, x0, 2, 92, 0, True)
        b = _kernels.count_from_root(adj, ints, p0, x0, 2, 92, 0, False)
        assert a == b


def test_node_limit_reports_abort():
    g = nx.gnp_random_graph(120, 0.7, seed=3)
    stats = max_clique_stats(bitset_adjacency(g), max_nodes=10)
    assert stats.nodes_limited


def test_env_flag_selects_fallback():
    code = "from qfclique import _kernels; print(_kernels.USE_NUMBA)"
    env = dict(os.environ, **{_kernels.DISABLE_ENV: "1"})
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
    env[_kernels.DISABLE_ENV] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == str(_kernels.NUMBA_AVAILABLE)


def test_fallback_process_gives_same_oracle_values():
    code = (
        "from qfclique.algebra import make_field;from qfclique.qform import diagonal;"
        "from qfclique.oracle import oracle_stats;s=oracle_stats(diagonal(make_field(5),[1,1,2]),1);"
        "print(s.omega, s.count)"
    )
    env = dict(os.environ, **{_kernels.DISABLE_ENV: "1"})
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["5", "250"]


def test_benchmark_script_runs(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    assert bench.main(["--repeat", "1", "--only", "GF(5) <1,1,2>"]) == 0
    assert "250" in capsys.readouterr().out
