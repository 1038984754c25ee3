"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

import itertools
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import primefactors

from conftest import ACCEPTANCE_LINES
from qfclique.algebra import hilbert_symbol, make_field
from qfclique.charzero import INF, RationalForm, local_omega, rational_omega, real_omega, sos_fastpath, sum_of_squares
from qfclique.cliques import classify_case, count_max_cliques, group_orders
from qfclique.construct import validate_clique
from qfclique.qform import diagonal, hyperbolic_plane
from qfclique.testform import gamma_arf_formula, gamma_det_formula, make_gamma


def record(num: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append((num, ok, detail))
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _fraction_matches(table: str | None, value: int | None) -> bool:
    return table is not None and Fraction(table) == value


def test_criterion_01_finite_field_example():
    t0 = time.perf_counter()
    q = diagonal(make_field(5), [1, 1, 2])
    case = classify_case(q, 1)
    report = count_max_cliques(q, 1)
    clique = [(0, 0, 0), (1, 0, 0), (3, 0, 1), (3, 3, 2), (3, 2, 2)]
    valid = bool(validate_clique(q, 1, clique))
    elapsed = time.perf_counter() - t0
    checks = {
        "omega=5": case.omega == 5,
        "case=E": case.label == "E",
        "count=1250": report.omega_max == 1250,
        "|O|=240": report.o_order == 240,
        "|iso|=30000": report.iso_order == 30000,
        "clique valid": valid,
        "time<1s": elapsed < 1,
    }
    failed = [k for k, ok in checks.items() if not ok]
    detail = f"omega={case.omega} case={case.label} count={report.omega_max} |O|={report.o_order} |iso|={report.iso_order} {elapsed:.2f}s"
    if failed:
        detail += " failed: " + ", ".join(failed)
    record(1, not failed, detail)


@pytest.mark.slow
def test_criterion_02_odd_sweep(suite):
    records, seconds = suite("odd")
    bad = [
        r for r in records
        if r.table_omega != r.oracle_omega or not _fraction_matches(r.table_count, r.oracle_count)
    ]
    ok = not bad and len(records) <= 2000 and seconds < 300
    record(2, ok, f"{len(records)} instances, {len(bad)} table/oracle mismatches, {seconds:.1f}s")


@pytest.mark.slow
def test_criterion_03_char2_sweep(suite):
    records, seconds = suite("char2")
    n4 = [r for r in records if r.n == 4]
    n4_bad = [
        r for r in n4
        if r.table_omega != r.oracle_omega or not _fraction_matches(r.table_count, r.oracle_count)
    ]
    n2 = [r for r in records if r.n == 2]
    n2_a = [r for r in n2 if r.case == "A"]
    a_recorded = all(r.warnings and r.table_omega != r.oracle_omega for r in n2_a)
    cd_match = all(
        r.table_omega == r.oracle_omega and _fraction_matches(r.table_count, r.oracle_count)
        for r in n2 if r.case in ("C", "D")
    )
    library_ok = all(r.ok for r in records)
    ok = not n4_bad and a_recorded and cd_match and library_ok and seconds < 300
    cases = sorted({r.case for r in n4_bad})
    record(
        3,
        ok,
        f"n=4: {len(n4)} instances, {len(n4_bad)} table/oracle mismatches (cases {','.join(cases) or '-'}); "
        f"n=2: {len(n2_a)} case-A discrepancies recorded, C/D match={cd_match}; "
        f"library vs oracle all equal={library_ok}; {seconds:.1f}s",
    )


@pytest.mark.slow
def test_criterion_04_isotropic(suite):
    records, seconds = suite("isotropic")
    bad = [r for r in records if r.omega != r.oracle_omega]
    record(4, not bad, f"{len(records)} instances with a=0, {len(bad)} mismatches, {seconds:.1f}s")


@pytest.mark.slow
def test_criterion_05_residue_rings(suite):
    records, seconds = suite("zmod")
    bad = [r for r in records if r.table_omega != r.oracle_omega]
    library_bad = [r for r in records if not r.ok]
    rings = sorted({r.ring for r in bad})
    ok = not bad and seconds < 60
    record(
        5,
        ok,
        f"{len(records)} instances, {len(bad)} residue-table/oracle mismatches ({', '.join(rings) or '-'}), "
        f"{len(library_bad)} library/oracle mismatches, {seconds:.1f}s",
    )


def test_criterion_06_group_orders(suite):
    records, seconds = suite("orders")
    bad = [r for r in records if r.o_order != r.brute_o_order]
    h3 = group_orders(hyperbolic_plane(make_field(3)))[0]
    record(6, not bad and h3 == 4, f"{len(records)} binary forms, {len(bad)} mismatches, |O(H/GF3)|={h3}, {seconds:.1f}s")


def test_criterion_07_test_form_identities():
    bad = []
    for F in (make_field(3), make_field(5), make_field(2), make_field(2, 2)):
        for a, n in itertools.product(range(1, F.size), range(1, 9)):
            g = make_gamma(F, a, n)
            if g.det != gamma_det_formula(F, a, n):
                bad.append(("det", str(F), a, n))
            if F.p == 2 and n % 2 == 0 and g.arf != gamma_arf_formula(F, n):
                bad.append(("arf", str(F), a, n))
    record(7, not bad, f"{len(bad)} identity failures")


def test_criterion_08_rational_example():
    res = rational_omega(RationalForm((1, 2, 3, -7)), 1)
    places = ",".join("inf" if v == INF else str(v) for v in res.blocking_places)
    ok = res.omega == 3 and 3 in res.blocking_places
    record(8, ok, f"omega={res.omega} blocked_at={res.blocked_at} blocking places {places}")


def test_criterion_09_sum_of_squares():
    t0 = time.perf_counter()
    bad = [n for n in range(1, 21) if sos_fastpath(n) != rational_omega(sum_of_squares(n), 1).omega]
    spots = (sos_fastpath(4), sos_fastpath(8))
    elapsed = time.perf_counter() - t0
    ok = not bad and spots == (4, 9) and elapsed < 10
    record(9, ok, f"n<=20 disagreements {bad or 'none'}, omega(s4)={spots[0]}, omega(s8)={spots[1]}, {elapsed:.2f}s")


GRID = [1, -1, 2, -2, 3, -3, 5, -5, 7, -7, 10, -10]


def _hilbert_product(a: int, b: int) -> int:
    places = [INF, 2] + [p for p in primefactors(abs(a * b)) if p != 2]
    prod = 1
    for v in places:
        prod *= hilbert_symbol(a, b, v)
    return prod


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(GRID), st.sampled_from(GRID))
def test_hilbert_product_formula_property(a, b):
    assert _hilbert_product(a, b) == 1


def test_criterion_10_hilbert_product_formula():
    # the grid is small, so cover it exhaustively too
    bad = [(a, b) for a, b in itertools.product(GRID, repeat=2) if _hilbert_product(a, b) != 1]
    record(10, not bad, f"{len(GRID) ** 2} pairs, {len(bad)} violations")


def test_criterion_11_real_rule():
    bad = []
    for r_pos, r_neg in itertools.product(range(7), repeat=2):
        if r_pos + r_neg == 0:
            continue
        q = RationalForm((1,) * r_pos + (-1,) * r_neg)
        for a in (1, -1, 3, -6):
            expect = (r_pos if a > 0 else r_neg) + 1
            got = real_omega((r_pos, r_neg), 1 if a > 0 else -1)
            local = local_omega(q, a, INF)
            if not got == local == expect:
                bad.append((r_pos, r_neg, a, got, local))
    record(11, not bad, f"48 signatures x 4 scalars, {len(bad)} disagreements with the Witt-index computation at infinity")
