"""Maximum-clique counting kernels over bitset adjacency.

Two implementations of one algorithm (Bron-Kerbosch with Tomita pivoting and
a greedy-colouring bound, counting maximal cliques of the largest size):

* a numba ``@njit`` kernel on ``uint64`` word arrays, used by default;
* a pure-Python kernel on arbitrary-precision ``int`` bitsets, selected by
  setting ``QFCLIQUE_DISABLE_NUMBA=1`` (or when numba is not importable).

Both return ``(best, count, aborted)`` for one search root and must agree
exactly; ``tests/test_kernels.py`` checks that.
"""

from __future__ import annotations

import os

import numpy as np

DISABLE_ENV = "QFCLIQUE_DISABLE_NUMBA"

try:  # pragma: no cover - import guard
    import numba
except ImportError:  # pragma: no cover
    numba = None


def numba_requested() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() not in {"1", "true", "yes", "on"}


NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and numba_requested()


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


_ONE = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)
_DEBRUIJN_TABLE = np.array(
    [
        0, 1, 48, 2, 57, 49, 28, 3, 61, 58, 50, 42, 38, 29, 17, 4,
        62, 55, 59, 36, 53, 51, 43, 22, 45, 39, 33, 30, 24, 18, 12, 5,
        63, 47, 56, 27, 60, 41, 37, 16, 54, 35, 52, 21, 44, 32, 23, 11,
        46, 26, 40, 15, 34, 20, 31, 10, 25, 14, 19, 9, 13, 8, 7, 6,
    ],
    dtype=np.int64,
)


@_njit
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@_njit
def _count_bits(s):
    c = 0
    for w in range(s.shape[0]):
        if s[w] != 0:
            c += _popcount(s[w])
    return c


@_njit
def _lowest(s):
    """Index of the lowest set bit of a bitset, or -1."""
    for w in range(s.shape[0]):
        x = s[w]
        if x != 0:
            b = x & (~x + _ONE)
            return w * 64 + _DEBRUIJN_TABLE[np.int64((b * _DEBRUIJN) >> np.uint64(58))]
    return -1


@_njit
def _is_empty(s):
    for w in range(s.shape[0]):
        if s[w] != 0:
            return False
    return True


@_njit
def _colour_bound(p, adj, q, avail):
    """Number of colours used by greedy sequential colouring of ``p``."""
    W = p.shape[0]
    for w in range(W):
        q[w] = p[w]
    colours = 0
    while not _is_empty(q):
        colours += 1
        for w in range(W):
            avail[w] = q[w]
        while True:
            v = _lowest(avail)
            if v < 0:
                break
            vw = v >> 6
            bit = _ONE << np.uint64(v & 63)
            q[vw] &= ~bit
            avail[vw] &= ~bit
            for w in range(W):
                avail[w] &= ~adj[v, w]
    return colours


@_njit
def _choose_pivot(p, x, adj):
    W = p.shape[0]
    best_u = -1
    best_deg = -1
    for w in range(W):
        word = p[w] | x[w]
        while word != 0:
            b = word & (~word + _ONE)
            u = w * 64 + _DEBRUIJN_TABLE[np.int64((b * _DEBRUIJN) >> np.uint64(58))]
            word &= ~b
            d = 0
            for z in range(W):
                t = p[z] & adj[u, z]
                if t != 0:
                    d += _popcount(t)
            if d > best_deg:
                best_deg = d
                best_u = u
    return best_u


@_njit
def count_maximum_cliques_nb(adj, p0, x0, r0, max_depth, max_nodes):
    """Largest maximal clique size reachable from (R, P, X) = (|R|=r0, p0, x0)
    and the number of such cliques.  ``max_nodes`` <= 0 means unlimited."""
    W = adj.shape[1]
    best = 0
    count = 0
    if _is_empty(p0):
        if _is_empty(x0):
            return r0, 1, 0
        return 0, 0, 0
    D = max_depth + 1
    Ps = np.zeros((D, W), dtype=np.uint64)
    Xs = np.zeros((D, W), dtype=np.uint64)
    Cs = np.zeros((D, W), dtype=np.uint64)
    newp = np.zeros(W, dtype=np.uint64)
    newx = np.zeros(W, dtype=np.uint64)
    q = np.zeros(W, dtype=np.uint64)
    avail = np.zeros(W, dtype=np.uint64)
    for w in range(W):
        Ps[0, w] = p0[w]
        Xs[0, w] = x0[w]
    u = _choose_pivot(Ps[0], Xs[0], adj)
    for w in range(W):
        Cs[0, w] = Ps[0, w] & ~adj[u, w]
    depth = 0
    nodes = 0
    while depth >= 0:
        v = _lowest(Cs[depth])
        if v < 0:
            depth -= 1
            continue
        vw = v >> 6
        bit = _ONE << np.uint64(v & 63)
        Cs[depth, vw] &= ~bit
        r = r0 + depth + 1
        pempty = True
        xempty = True
        for w in range(W):
            newp[w] = Ps[depth, w] & adj[v, w]
            newx[w] = Xs[depth, w] & adj[v, w]
            if newp[w] != 0:
                pempty = False
            if newx[w] != 0:
                xempty = False
        Ps[depth, vw] &= ~bit
        Xs[depth, vw] |= bit
        nodes += 1
        if max_nodes > 0 and nodes > max_nodes:
            return best, count, 1
        if pempty:
            if xempty:
                if r > best:
                    best = r
                    count = 1
                elif r == best:
                    count += 1
            continue
        if r + _count_bits(newp) < best:
            continue
        if r + _colour_bound(newp, adj, q, avail) < best:
            continue
        depth += 1
        for w in range(W):
            Ps[depth, w] = newp[w]
            Xs[depth, w] = newx[w]
        u = _choose_pivot(Ps[depth], Xs[depth], adj)
        for w in range(W):
            Cs[depth, w] = Ps[depth, w] & ~adj[u, w]
    return best, count, 0


# -- pure-Python fallback -----------------------------------------------------


def _lowbit_index(x: int) -> int:
    return (x & -x).bit_length() - 1


def _colour_bound_py(p: int, adj: list[int]) -> int:
    colours = 0
    q = p
    while q:
        colours += 1
        avail = q
        while avail:
            v = _lowbit_index(avail)
            bit = 1 << v
            q &= ~bit
            avail &= ~bit & ~adj[v]
    return colours


def count_maximum_cliques_py(adj: list[int], p0: int, x0: int, r0: int, max_nodes: int = 0):
    """Same search as :func:`count_maximum_cliques_nb` on Python-int bitsets."""
    if not p0:
        return (r0, 1, 0) if not x0 else (0, 0, 0)
    state = {"best": 0, "count": 0, "nodes": 0}

    class _Abort(Exception):
        pass

    def pivot(p, x):
        best_u, best_deg = -1, -1
        px = p | x
        while px:
            u = _lowbit_index(px)
            px &= px - 1
            d = (p & adj[u]).bit_count()
            if d > best_deg:
                best_u, best_deg = u, d
        return best_u

    def expand(r, p, x):
        cand = p & ~adj[pivot(p, x)]
        while cand:
            v = _lowbit_index(cand)
            bit = 1 << v
            cand &= ~bit
            newp, newx = p & adj[v], x & adj[v]
            p &= ~bit
            x |= bit
            state["nodes"] += 1
            if max_nodes > 0 and state["nodes"] > max_nodes:
                raise _Abort
            s = r + 1
            if not newp:
                if not newx:
                    if s > state["best"]:
                        state["best"], state["count"] = s, 1
                    elif s == state["best"]:
                        state["count"] += 1
                continue
            if s + newp.bit_count() < state["best"]:
                continue
            if s + _colour_bound_py(newp, adj) < state["best"]:
                continue
            expand(s, newp, newx)

    try:
        expand(r0, p0, x0)
    except _Abort:
        return state["best"], state["count"], 1
    return state["best"], state["count"], 0


def bitset_to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(row, dtype="<u8").tobytes(), "little")


def adjacency_to_ints(adj: np.ndarray) -> list[int]:
    return [bitset_to_int(adj[i]) for i in range(adj.shape[0])]


def count_from_root(adj, adj_ints, p0, x0, r0, max_depth, max_nodes, use_numba):
    """Dispatch one search root to the selected kernel."""
    if use_numba:
        best, count, aborted = count_maximum_cliques_nb(adj, p0, x0, r0, max_depth, max_nodes)
        return int(best), int(count), bool(aborted)
    best, count, aborted = count_maximum_cliques_py(adj_ints, bitset_to_int(p0), bitset_to_int(x0), r0, max_nodes)
    return best, count, bool(aborted)
