"""Brute-force ground truth for representation graphs.

Vertices are the vectors of ``ring^n`` in canonical order (index
``sum x_i * s^(n-1-i)`` for ring size ``s``).  ``x ~ y`` iff ``q(x - y) = a``.
The reduced graph is induced on ``{v : q(v) = a}``.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from qfclique import _kernels
from qfclique.algebra import FiniteRing
from qfclique.errors import InconsistencyError, OracleLimitError, PreconditionError
from qfclique.qform import QForm

DEFAULT_CAP = 10**6
# full graphs above this size are counted through the reduced graph only
DIRECT_COUNT_LIMIT = 4096


def vector_coords(ring: FiniteRing, n: int) -> np.ndarray:
    """``(s^n, n)`` array of all vectors in canonical order."""
    s = ring.size
    idx = np.arange(s**n, dtype=np.int64)
    out = np.empty((s**n, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[:, i] = idx % s
        idx //= s
    return out


def vector_index(ring: FiniteRing, coords: np.ndarray) -> np.ndarray:
    s = ring.size
    idx = np.zeros(coords.shape[0], dtype=np.int64)
    for i in range(coords.shape[1]):
        idx = idx * s + coords[:, i]
    return idx


def evaluate_all(q: QForm, coords: np.ndarray) -> np.ndarray:
    """q evaluated at every row of ``coords`` (vectorised through ring tables)."""
    r = q.ring
    add, mul = r.add_table, r.mul_table
    vals = np.zeros(coords.shape[0], dtype=np.int64)
    for i in range(q.n):
        for j in range(i, q.n):
            c = q.U[i][j]
            if c:
                vals = add[vals, mul[c, mul[coords[:, i], coords[:, j]]]]
    return vals


def coords_add(ring: FiniteRing, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return ring.add_table[x, y]


def coords_sub(ring: FiniteRing, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return ring.add_table[x, ring.neg_table[y]]


def row_popcounts(adj: np.ndarray) -> np.ndarray:
    return np.unpackbits(np.ascontiguousarray(adj).view(np.uint8), axis=1).sum(axis=1).astype(np.int64)


@dataclass
class RepGraph:
    q: QForm
    a: int
    mode: str  # "full" | "reduced"
    vertices: np.ndarray  # canonical vector indices, increasing
    coords: np.ndarray
    values: np.ndarray = field(repr=False)  # q at every vector of ring^n

    @property
    def ring(self) -> FiniteRing:
        return self.q.ring

    @property
    def n(self) -> int:
        return self.q.n

    @property
    def order(self) -> int:
        return int(self.vertices.shape[0])

    def vector(self, i: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.coords[i])

    @cached_property
    def connection_set(self) -> np.ndarray:
        """Indices of ``{s != 0 : q(s) = a}``; full adjacency is ``x ~ x + s``."""
        hits = np.nonzero(self.values == self.a)[0]
        return hits[hits != 0]

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Bitset rows ``(order, ceil(order/64))`` of uint64 words."""
        N = self.order
        W = max(1, (N + 63) // 64)
        adj = np.zeros((N, W), dtype=np.uint64)
        if N == 0:
            return adj
        rows = np.arange(N)
        if self.mode == "full":
            r = self.ring
            for s in self.coords[self.connection_set]:
                targets = vector_index(r, coords_add(r, self.coords, s[None, :]))
                np.bitwise_or.at(adj, (rows, targets >> 6), np.left_shift(np.uint64(1), (targets & 63).astype(np.uint64)))
            return adj
        # reduced: x ~ y iff q(x - y) = a
        r = self.ring
        for i in range(N):
            diff = vector_index(r, coords_sub(r, self.coords, self.coords[i][None, :]))
            hit = np.nonzero((self.values[diff] == self.a) & (rows != i))[0]
            for j in hit:
                adj[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
        return adj

    def neighbours(self, i: int) -> list[int]:
        row = self.adjacency[i]
        return [j for j in range(self.order) if (int(row[j >> 6]) >> (j & 63)) & 1]

    def degrees(self) -> np.ndarray:
        return row_popcounts(self.adjacency)

    def edges(self):
        for i in range(self.order):
            for j in self.neighbours(i):
                if j > i:
                    yield i, j

    def export(self, fmt: str = "edge-list") -> str:
        if fmt == "edge-list":
            return "".join(f"{u} {v}\n" for u, v in self.edges())
        if fmt == "dot":
            lines = ["graph G {"]
            for i in range(self.order):
                label = "(" + ",".join(self.ring.format(int(c)) for c in self.coords[i]) + ")"
                lines.append(f'  {i} [label="{label}"];')
            for u, v in self.edges():
                lines.append(f"  {u} -- {v};")
            lines.append("}")
            return "\n".join(lines) + "\n"
        raise PreconditionError(f"unknown export format {fmt!r}")


def build_graph(q: QForm, a: int, mode: str = "full", cap: int = DEFAULT_CAP) -> RepGraph:
    ring = q.ring
    ring.check(a)
    if mode not in ("full", "reduced"):
        raise PreconditionError(f"unknown graph mode {mode!r}")
    total = ring.size**q.n
    if total > cap:
        raise OracleLimitError(f"{ring}^{q.n} has {total} vertices, above the cap of {cap}")
    coords = vector_coords(ring, q.n)
    values = evaluate_all(q, coords)
    if mode == "full":
        return RepGraph(q, a, mode, np.arange(total, dtype=np.int64), coords, values)
    keep = np.nonzero(values == a)[0]
    return RepGraph(q, a, mode, keep, coords[keep], values)


@dataclass(frozen=True)
class CliqueStats:
    omega: int
    count: int
    nodes_limited: bool = False


def _root_tasks(adj: np.ndarray):
    """One search root per vertex: cliques whose lowest-ordered member is ``v``."""
    N, W = adj.shape
    seen = np.zeros(W, dtype=np.uint64)
    for v in range(N):
        later = ~seen.copy()
        later[v >> 6] &= ~(np.uint64(1) << np.uint64(v & 63))
        p = adj[v] & later
        x = adj[v] & seen
        yield p.copy(), x.copy()
        seen[v >> 6] |= np.uint64(1) << np.uint64(v & 63)


def max_clique_stats(adj: np.ndarray, workers: int = 1, max_nodes: int = 0, use_numba: bool | None = None) -> CliqueStats:
    """Exact clique number and number of maximum cliques of a bitset graph."""
    if use_numba is None:
        use_numba = _kernels.USE_NUMBA
    N = adj.shape[0]
    if N == 0:
        return CliqueStats(0, 1)
    adj = np.ascontiguousarray(adj, dtype=np.uint64)
    adj_ints = None if use_numba else _kernels.adjacency_to_ints(adj)
    degmax = int(row_popcounts(adj).max())
    depth = min(N, degmax + 1) + 1
    if workers <= 1:
        p0 = np.zeros(adj.shape[1], dtype=np.uint64)
        for v in range(N):
            p0[v >> 6] |= np.uint64(1) << np.uint64(v & 63)
        best, count, aborted = _kernels.count_from_root(
            adj, adj_ints, p0, np.zeros_like(p0), 0, depth, max_nodes, use_numba
        )
        return CliqueStats(best, count, aborted)

    tasks = list(_root_tasks(adj))
    chunks = [tasks[i::workers] for i in range(workers)]

    def run(chunk):
        out = []
        for p, x in chunk:
            out.append(_kernels.count_from_root(adj, adj_ints, p, x, 1, depth, max_nodes, use_numba))
        return out

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = [r for part in pool.map(run, chunks) for r in part]
    best = max(r[0] for r in results)
    count = sum(r[1] for r in results if r[0] == best)
    return CliqueStats(best, count, any(r[2] for r in results))


def brute_clique_stats(
    g: RepGraph,
    workers: int = 1,
    max_nodes: int = 0,
    budget_s: float | None = None,
    direct_limit: int = DIRECT_COUNT_LIMIT,
) -> CliqueStats:
    """(omega, number of maximum cliques) of a representation graph.

    For full graphs with ``a != 0`` the count is also derived from the reduced
    graph as ``|V| * N_red / omega``; both routes must agree when both run.
    """
    t0 = time.perf_counter()

    def checked(stats: CliqueStats) -> CliqueStats:
        if stats.nodes_limited:
            raise OracleLimitError(f"clique search exceeded {max_nodes} nodes")
        if budget_s is not None and time.perf_counter() - t0 > budget_s:
            raise OracleLimitError(f"clique search exceeded the {budget_s}s budget")
        return stats

    if g.mode == "reduced" or g.a == 0:
        if g.mode == "full" and g.order > direct_limit:
            raise OracleLimitError("isotropic full graph too large for direct search")
        return checked(max_clique_stats(g.adjacency, workers, max_nodes))

    red = build_graph(g.q, g.a, "reduced", cap=g.ring.size**g.n)
    rs = checked(max_clique_stats(red.adjacency, workers, max_nodes))
    omega = rs.omega + 1
    num = g.order * rs.count
    if num % omega:
        raise InconsistencyError(f"|V|*N_red/omega is not integral for {g.q} over {g.ring}, a={g.a}")
    via_reduced = CliqueStats(omega, num // omega)
    if g.order <= direct_limit:
        direct = checked(max_clique_stats(g.adjacency, workers, max_nodes))
        if (direct.omega, direct.count) != (via_reduced.omega, via_reduced.count):
            raise InconsistencyError(
                f"direct {direct} vs reduced {via_reduced} for {g.q} over {g.ring}, a={g.a}"
            )
        return direct
    return via_reduced


def oracle_stats(q: QForm, a: int, workers: int = 1, cap: int = DEFAULT_CAP, **kw) -> CliqueStats:
    return brute_clique_stats(build_graph(q, a, "full", cap=cap), workers=workers, **kw)


def brute_orthogonal_order(q: QForm) -> int:
    """|O(q)| by testing every n x n matrix S for ``q(S x) = q(x)`` on all x.

    Only sensible for tiny instances (``size^(n^2)`` candidates).
    """
    ring = q.ring
    n = q.n
    coords = vector_coords(ring, n)
    target = evaluate_all(q, coords)
    add, mul = ring.add_table, ring.mul_table
    count = 0
    for flat in np.ndindex(*([ring.size] * (n * n))):
        images = np.zeros_like(coords)
        for i in range(n):
            acc = np.zeros(coords.shape[0], dtype=np.int64)
            for j in range(n):
                c = flat[i * n + j]
                if c:
                    acc = add[acc, mul[c, coords[:, j]]]
            images[:, i] = acc
        if np.array_equal(evaluate_all(q, images), target):
            count += 1
    return count
