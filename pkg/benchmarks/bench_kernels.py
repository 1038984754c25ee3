"""Time the numba clique kernel against the pure-Python fallback.

Both kernels run on the same representation graphs; their results must agree
and the script exits with status 1 if they do not.

    python benchmarks/bench_kernels.py --repeat 3
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from qfclique import _kernels
from qfclique.algebra import make_field, make_residue_ring
from qfclique.oracle import build_graph, max_clique_stats
from qfclique.qform import diagonal, hyperbolic_plane, orthogonal_sum

# (label, form factory, scalar, graph mode)
CASES = [
    ("GF(5) <1,1,2> full", lambda: diagonal(make_field(5), [1, 1, 2]), 1, "full"),
    ("GF(7) <1,1,1> full", lambda: diagonal(make_field(7), [1, 1, 1]), 1, "full"),
    ("Z/25 <1,2> full", lambda: diagonal(make_residue_ring(5, 2), [1, 2]), 1, "full"),
    ("GF(5) <1,1,1,2> reduced", lambda: diagonal(make_field(5), [1, 1, 1, 2]), 1, "reduced"),
    ("GF(4) H+H reduced", lambda: orthogonal_sum(hyperbolic_plane(make_field(2, 2)), hyperbolic_plane(make_field(2, 2))), 1, "reduced"),
    ("GF(3) <1,1,1,1,2> reduced", lambda: diagonal(make_field(3), [1, 1, 1, 1, 2]), 1, "reduced"),
]


def _time(adj, use_numba: bool, repeat: int) -> tuple[list[float], tuple[int, int]]:
    times = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        stats = max_clique_stats(adj, use_numba=use_numba)
        times.append(time.perf_counter() - t0)
        result = (stats.omega, stats.count)
    return times, result


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timed runs per kernel")
    parser.add_argument("--only", help="substring filter on case labels")
    parser.add_argument("--json", dest="json_path", help="also write results to this file")
    args = parser.parse_args(argv)

    if not _kernels.NUMBA_AVAILABLE:
        print("numba is not importable; nothing to compare", file=sys.stderr)
        return 2

    cases = [c for c in CASES if not args.only or args.only in c[0]]
    # compile once outside the timings
    warm = build_graph(diagonal(make_field(3), [1]), 1).adjacency
    max_clique_stats(warm, use_numba=True)

    rows = []
    mismatch = False
    print(f"{'case':<28} {'vertices':>8} {'omega':>5} {'count':>9} {'numba s':>9} {'python s':>9} {'speedup':>8}")
    for label, make, a, mode in cases:
        g = build_graph(make(), a, mode)
        t_nb, r_nb = _time(g.adjacency, True, args.repeat)
        t_py, r_py = _time(g.adjacency, False, args.repeat)
        if r_nb != r_py:
            mismatch = True
        nb, py = statistics.median(t_nb), statistics.median(t_py)
        rows.append({
            "case": label, "vertices": g.order, "omega": r_nb[0], "count": r_nb[1],
            "numba_s": nb, "python_s": py, "speedup": py / nb if nb else None, "agree": r_nb == r_py,
        })
        flag = "" if r_nb == r_py else "  MISMATCH"
        print(f"{label:<28} {g.order:>8} {r_nb[0]:>5} {r_nb[1]:>9} {nb:>9.4f} {py:>9.4f} {py / nb:>7.1f}x{flag}")

    if args.json_path:
        with open(args.json_path, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
