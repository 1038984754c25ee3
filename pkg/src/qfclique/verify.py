"""Formula-versus-oracle comparisons on single instances and named sweeps.

Every record carries the library values, the literal case-table values and
the brute-force graph values.  A record is a mismatch when the library
disagrees with the oracle; table disagreements are kept as warnings.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product

from qfclique.algebra import FiniteField, FiniteRing, make_field, make_residue_ring
from qfclique.cliques import classify_case, count_max_cliques, group_orders
from qfclique.oracle import DEFAULT_CAP, brute_orthogonal_order, oracle_stats
from qfclique.qform import QForm, binary_block, is_nondegenerate, make_form, orthogonal_sum


@dataclass
class Record:
    ring: str
    form: str
    scalar: int
    n: int | None = None
    oracle_omega: int | None = None
    oracle_count: int | None = None
    omega: int | None = None
    count: int | None = None
    table_omega: int | None = None
    table_count: str | None = None
    case: str | None = None
    o_order: int | None = None
    brute_o_order: int | None = None
    ok: bool = True
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def verify_instance(q: QForm, a: int, *, counts: bool = True, workers: int = 1, cap: int = DEFAULT_CAP) -> Record:
    """Compare clique number (and count, over fields with a != 0) with the oracle."""
    rec = Record(str(q.ring), str(q), a, q.n)
    stats = oracle_stats(q, a, workers=workers, cap=cap)
    rec.oracle_omega, rec.oracle_count = stats.omega, stats.count
    case = classify_case(q, a)
    rec.case, rec.omega, rec.table_omega = case.label, case.omega, case.table_omega
    rec.warnings.extend(case.warnings)
    rec.ok = case.omega == stats.omega
    if counts and a != 0 and isinstance(q.ring, FiniteField):
        report = count_max_cliques(q, a)
        rec.count = report.omega_max
        rec.table_count = _fmt_fraction(report.table_count)
        rec.o_order = report.o_order
        rec.warnings.extend(w for w in report.warnings if w not in rec.warnings)
        rec.ok = rec.ok and report.omega_max == stats.count
    return rec


def verify_group_order(q: QForm) -> Record:
    rec = Record(str(q.ring), str(q), 0, q.n)
    rec.o_order = group_orders(q)[0]
    rec.brute_o_order = brute_orthogonal_order(q)
    rec.ok = rec.o_order == rec.brute_o_order
    return rec


# -- instance families --------------------------------------------------------


def diagonal_forms(ring: FiniteRing, n: int):
    """Nondegenerate diagonal forms with unit entries."""
    units = [x for x in ring.elements() if ring.is_unit(x)]
    for d in product(units, repeat=n):
        q = make_form(ring, diag=list(d))
        if is_nondegenerate(q):
            yield q


def block_forms(field: FiniteField, n: int):
    """Orthogonal sums of binary blocks ``[a, b]`` (nondegenerate in char 2)."""
    blocks = list(product(field.elements(), repeat=2))
    for bs in product(blocks, repeat=n // 2):
        yield orthogonal_sum(*[binary_block(field, a, b) for a, b in bs])


def odd_instances():
    for p in (3, 5, 7):
        f = make_field(p)
        for n in (1, 2, 3):
            for q in diagonal_forms(f, n):
                for a in range(1, p):
                    yield q, a


def char2_instances():
    for f in (make_field(2), make_field(2, 2)):
        for n in (2, 4):
            for q in block_forms(f, n):
                for a in range(1, f.size):
                    yield q, a


def isotropic_instances():
    for p in (3, 5, 7):
        f = make_field(p)
        for n in (1, 2, 3):
            for q in diagonal_forms(f, n):
                yield q, 0
    for f in (make_field(2), make_field(2, 2)):
        for n in (2, 4):
            for q in block_forms(f, n):
                yield q, 0


def zmod_instances():
    for ring in (make_residue_ring(3, 2), make_residue_ring(5, 2)):
        units = [x for x in ring.elements() if ring.is_unit(x)]
        for n in (1, 2):
            for q in diagonal_forms(ring, n):
                for a in units:
                    yield q, a


def binary_forms(field: FiniteField):
    """All nondegenerate binary forms ``a x^2 + c x y + b y^2``."""
    for a, c, b in product(field.elements(), repeat=3):
        q = make_form(field, upper=[[a, c], [0, b]])
        if is_nondegenerate(q):
            yield q


SUITES = {
    "odd": lambda: ((q, a, True) for q, a in odd_instances()),
    "char2": lambda: ((q, a, True) for q, a in char2_instances()),
    "isotropic": lambda: ((q, a, False) for q, a in isotropic_instances()),
    "zmod": lambda: ((q, a, False) for q, a in zmod_instances()),
}
ORDER_SUITE = "orders"
SUITE_NAMES = sorted([*SUITES, ORDER_SUITE, "all"])


def run_suite(name: str, workers: int = 1, cap: int = DEFAULT_CAP) -> tuple[list[Record], float]:
    """Records for a named sweep and the elapsed wall time in seconds."""
    t0 = time.perf_counter()
    names = [n for n in SUITE_NAMES if n != "all"] if name == "all" else [name]
    out: list[Record] = []
    for nm in names:
        if nm == ORDER_SUITE:
            for f in (make_field(3), make_field(5)):
                out.extend(verify_group_order(q) for q in binary_forms(f))
            continue
        if nm not in SUITES:
            raise KeyError(nm)
        for q, a, counts in SUITES[nm]():
            out.append(verify_instance(q, a, counts=counts, workers=workers, cap=cap))
    return out, time.perf_counter() - t0
