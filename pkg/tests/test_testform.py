import itertools
import random

import pytest

from qfclique import linalg
from qfclique.algebra import make_field, make_residue_ring
from qfclique.construct import extend_gram
from qfclique.errors import DegenerateFormError, PreconditionError
from qfclique.qform import binary_block, diagonal, hyperbolic_plane, is_isometric, orthogonal_sum, polar_matrix, scale
from qfclique.testform import (
    bordered_det_formula,
    bordered_matrix,
    gamma_arf_formula,
    gamma_det_formula,
    make_gamma,
    max_embedded_dimension,
    realises_gamma,
)
from qfclique.verify import block_forms, diagonal_forms


def test_gamma_examples():
    F5 = make_field(5)
    g = make_gamma(F5, 1, 2)
    assert polar_matrix(g.form) == ((2, 1), (1, 2)) and g.det == 3
    g2 = make_gamma(make_field(2), 1, 2)
    assert g2.form == binary_block(make_field(2), 1, 1) and g2.arf == 1
    assert make_gamma(make_field(2), 1, 8).arf == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_gamma_determinant_closed_form(p):
    F = make_field(p)
    for a, n in itertools.product(range(1, p), range(1, 9)):
        g = make_gamma(F, a, n)
        assert g.det == gamma_det_formula(F, a, n)
        assert g.nondegenerate == ((n + 1) % p != 0)


@pytest.mark.parametrize("F", [make_field(2), make_field(2, 2), make_field(2, 3)], ids=str)
def test_gamma_arf_closed_form(F):
    for a, n in itertools.product(range(1, F.size), range(2, 11, 2)):
        assert make_gamma(F, a, n).arf == gamma_arf_formula(F, n)


def test_gamma_scaling():
    F = make_field(7)
    for a, n in itertools.product(range(1, 7), range(1, 6)):
        if (n + 1) % 7:
            assert is_isometric(make_gamma(F, a, n).form, scale(make_gamma(F, 1, n).form, a))


def test_gamma_needs_unit():
    with pytest.raises(PreconditionError):
        make_gamma(make_field(5), 0, 2)
    with pytest.raises(PreconditionError):
        make_gamma(make_residue_ring(3, 2), 3, 2)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_bordered_determinant_law(p):
    F = make_field(p)
    rng = random.Random(p)
    for n in range(p, 7, p):
        for _ in range(30):
            a = rng.randrange(1, p)
            v = [rng.randrange(p) for _ in range(n - 1)]
            x = rng.randrange(p)
            assert linalg.det(F, bordered_matrix(F, a, v, x)) == bordered_det_formula(F, a, v)


def test_embedding_examples():
    assert max_embedded_dimension(diagonal(make_field(5), [1, 1, 2]), 1).k == 3
    assert max_embedded_dimension(diagonal(make_field(3), [1, 1, 1, 1, 2]), 1).k == 4
    # char 2, n = 2 mod 4: gamma_{a,n-1} sits in q on a degenerate span
    rep = max_embedded_dimension(hyperbolic_plane(make_field(2)), 1)
    assert (rep.k, rep.mode) == (1, "dominated")
    h = hyperbolic_plane(make_field(2))
    rep = max_embedded_dimension(orthogonal_sum(h, h), 1)
    assert (rep.k, rep.mode) == (2, "subform")


def test_embedding_rejects_bad_input():
    with pytest.raises(DegenerateFormError):
        max_embedded_dimension(diagonal(make_field(5), [1, 0]), 1)
    with pytest.raises(PreconditionError):
        max_embedded_dimension(diagonal(make_field(5), [1, 2]), 0)


def _instances():
    # exhaustive non-extension is exponential; keep to sizes that finish quickly
    for p, top in ((3, 4), (5, 3)):
        for n in range(1, top + 1):
            for q in diagonal_forms(make_field(p), n):
                yield q, 1
    for F, n in ((make_field(2), 2), (make_field(2), 4), (make_field(2, 2), 2)):
        for q in block_forms(F, n):
            yield q, 1


def test_reported_dimension_is_realised_and_maximal():
    for q, a in _instances():
        rep = max_embedded_dimension(q, a)
        xs = extend_gram(q, a, rep.k)
        assert xs is not None and realises_gamma(q, a, xs)
        if rep.k < q.n:
            assert extend_gram(q, a, rep.k + 1) is None, (q, rep)


def test_char2_witness_decomposes_form():
    for F in (make_field(2), make_field(2, 2)):
        for q in block_forms(F, 4):
            rep = max_embedded_dimension(q, 1)
            if rep.witness_b is None:
                continue
            rebuilt = orthogonal_sum(make_gamma(F, 1, 2).form, binary_block(F, 1, rep.witness_b))
            assert is_isometric(q, rebuilt)
