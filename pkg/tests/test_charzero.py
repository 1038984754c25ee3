import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qfclique.charzero import (
    INF,
    RationalForm,
    diagonalize_symmetric,
    form_from_gram,
    form_from_upper,
    gamma_rational_diag,
    local_omega,
    local_witt_index,
    rational_omega,
    rational_subform_test,
    real_omega,
    represents_rational,
    sos_fastpath,
    sum_of_squares,
    witt_index_by_invariants,
    witt_index_by_residues,
)
from qfclique.algebra import squarefree_part
from qfclique.errors import PreconditionError

squarefree = st.integers(-60, 60).filter(lambda x: x != 0 and squarefree_part(x) == x)


def test_real_omega_examples():
    assert real_omega((3, 1), 1) == 4
    assert real_omega((3, 1), -1) == 2
    assert real_omega((0, 2), 1) == 1
    with pytest.raises(PreconditionError):
        real_omega((1, 1), 0)
    with pytest.raises(PreconditionError):
        real_omega((0, 0), 1)


def test_gamma_rational_diagonalisation():
    assert gamma_rational_diag(1, 3).entries == (1, 3, 6)
    assert gamma_rational_diag(-1, 2).entries == (-1, -3)
    # <2a * i(i+1)> is congruent to the test form's polar matrix over Q
    for n in range(1, 7):
        gram = [[2 if i == j else 1 for j in range(n)] for i in range(n)]
        assert form_from_gram(gram) == gamma_rational_diag(1, n)


def test_rational_form_validation():
    with pytest.raises(PreconditionError):
        RationalForm((4,))
    with pytest.raises(PreconditionError):
        RationalForm(())
    assert RationalForm.of([Fraction(8, 3), -12]).entries == (6, -3)


def test_local_witt_examples():
    s4 = sum_of_squares(4)
    assert local_witt_index(s4, 7) == 2
    assert local_witt_index(s4, 2) == 0
    assert local_witt_index(s4, INF) == 0
    assert local_witt_index(RationalForm((1, -1, 1, -1)), INF) == 2


@settings(max_examples=150, deadline=None)
@given(st.lists(squarefree, min_size=1, max_size=6), st.sampled_from([3, 5, 7, 11, 13]))
def test_invariants_agree_with_residue_split(entries, p):
    form = RationalForm(tuple(entries))
    assert witt_index_by_invariants(form, p) == witt_index_by_residues(form, p)


@settings(max_examples=60, deadline=None)
@given(st.lists(squarefree, min_size=1, max_size=5), st.sampled_from([INF, 2, 3, 5, 7]), st.randoms())
def test_local_witt_is_permutation_invariant(entries, place, rnd):
    shuffled = list(entries)
    rnd.shuffle(shuffled)
    assert local_witt_index(RationalForm(tuple(entries)), place) == local_witt_index(RationalForm(tuple(shuffled)), place)


def test_subform_test():
    assert rational_subform_test(RationalForm((1,)), RationalForm((1, 1)))
    assert rational_subform_test(RationalForm((2,)), RationalForm((1, 1)))  # 2 = 1 + 1
    assert not rational_subform_test(RationalForm((3,)), RationalForm((1, 1)))
    assert not rational_subform_test(RationalForm((1, 1, 1)), RationalForm((1, 1)))
    assert represents_rational(sum_of_squares(4), 7)
    assert not represents_rational(sum_of_squares(3), 7)


def test_rational_example_certificate():
    res = rational_omega(RationalForm((1, 2, 3, -7)), 1)
    assert (res.omega, res.d, res.blocked_at) == (3, 2, 3)
    assert 3 in res.blocking_places and 7 in res.blocking_places
    assert res.profile[INF] >= 3 and res.profile[2] >= 3


def test_sum_of_squares_values():
    expected = [2, 2, 2, 4, 4, 6, 8, 9, 9, 10, 10, 12, 12, 14, 14, 16, 18, 18, 18, 20]
    assert [sos_fastpath(n) for n in range(1, 21)] == expected
    for n in (1, 4, 8, 11):
        assert rational_omega(sum_of_squares(n), 1).omega == sos_fastpath(n)


def test_rational_omega_is_minimum_of_local_values():
    # every prime dividing an entry of q or of the diagonalised test forms is among these
    places = (INF, 2, 3, 5)
    for entries in itertools.product([1, -1, 2, 3, -5], repeat=3):
        q = RationalForm(entries)
        for a in (1, -1, 2):
            assert rational_omega(q, a).omega == min(local_omega(q, a, v) for v in places)


def test_rational_omega_rejects_zero():
    with pytest.raises(PreconditionError):
        rational_omega(sum_of_squares(2), 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_diagonalisation_preserves_invariants(rows):
    n = len(rows)
    S = [[rows[i][j] + rows[j][i] for j in range(n)] for i in range(n)]
    det = sympy.Matrix(S).det()
    if det == 0:
        return
    d = diagonalize_symmetric(S)
    assert np.prod([Fraction(x) for x in d]) == det
    eig = np.linalg.eigvalsh(np.array(S, dtype=float))
    assert sum(1 for x in d if x > 0) == int((eig > 0).sum())


def test_form_from_upper():
    # x^2 + xy + y^2 has polar determinant 3 and is positive definite
    f = form_from_upper([[1, 1], [0, 1]])
    assert f.signature == (2, 0)
    assert squarefree_part(int(np.prod(f.entries))) == 3
