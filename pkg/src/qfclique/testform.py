"""The test form gamma_{a,n} and the largest test form sitting inside a form.

``gamma_{a,n}`` has ``q(e_i) = a`` and polar Gram matrix ``a(I + J)``, so a set
``{0, x_1, ..., x_k}`` is a clique of the representation graph exactly when the
``x_i`` realise ``gamma_{a,k}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from qfclique import linalg
from qfclique.algebra import FiniteField, FiniteRing, ResidueRing
from qfclique.errors import PreconditionError
from qfclique.qform import (
    QForm,
    arf,
    arf_class,
    evaluate,
    is_isometric_ff,
    make_form,
    polar_det,
    polar_matrix,
    reduce_residue_form,
    require_nondegenerate,
)


@dataclass(frozen=True)
class TestForm:
    __test__ = False  # keep pytest from collecting this class

    a: int
    n: int
    form: QForm
    det: int | None
    arf: int | None

    @property
    def nondegenerate(self) -> bool:
        r = self.form.ring
        return r.is_unit(self.a) and r.is_unit(r.from_int(self.n + 1))


def gamma_upper(ring: FiniteRing, a: int, n: int) -> list[list[int]]:
    return [[a if j >= i else 0 for j in range(n)] for i in range(n)]


@lru_cache(maxsize=4096)
def make_gamma(ring: FiniteRing, a: int, n: int) -> TestForm:
    ring.check(a)
    if not ring.is_unit(a):
        raise PreconditionError(f"test form needs a unit, got {ring.format(a)} in {ring}")
    if n < 1:
        raise PreconditionError("test form dimension must be at least 1")
    form = make_form(ring, upper=gamma_upper(ring, a, n))
    det = polar_det(form) if ring.is_field else None
    arf_value = None
    if isinstance(ring, FiniteField) and ring.p == 2 and n % 2 == 0:
        arf_value = arf(form)
    return TestForm(a, n, form, det, arf_value)


def gamma_det_formula(ring: FiniteRing, a: int, n: int) -> int:
    """Closed form ``(n+1) a^n`` of the polar determinant."""
    return ring.mul(ring.from_int(n + 1), ring.power(a, n))


def gamma_arf_formula(field: FiniteField, n: int) -> int:
    """Arf class of gamma_{a,n} in characteristic 2: the class of 1 when
    ``n = 2, 4 mod 8`` and of 0 when ``n = 0, 6 mod 8`` (independent of a)."""
    if n % 2:
        raise PreconditionError("Arf invariant needs even dimension")
    return arf_class(field, field.one if n % 8 in (2, 4) else 0)


def bordered_matrix(ring: FiniteRing, a: int, v, x) -> list[list[int]]:
    """The n x n matrix ``[[a(I+J), v], [v^T, x]]`` for ``v`` of length n - 1."""
    n = len(v)
    rows = [[ring.add(a, a) if i == j else a for j in range(n)] + [v[i]] for i in range(n)]
    rows.append(list(v) + [x])
    return rows


def bordered_det_formula(ring: FiniteRing, a: int, v) -> int:
    """``-(sum v)^2 (n-1) a^(n-2)`` for the n x n bordered matrix, valid when the
    characteristic divides n."""
    n = len(v) + 1
    s = 0
    for c in v:
        s = ring.add(s, c)
    val = ring.mul(ring.mul(s, s), ring.mul(ring.from_int(n - 1), ring.power(a, n - 2)))
    return ring.neg(val)


@dataclass(frozen=True)
class EmbeddingReport:
    k: int
    mode: str  # "subform" or "dominated"
    witness_b: int | None = None  # char 2: q ~ gamma_{a,n-2} + [a, b]


def _residue_instance(q: QForm, a: int) -> tuple[QForm, int]:
    ring = q.ring
    if isinstance(ring, ResidueRing):
        if not ring.is_unit(a):
            raise PreconditionError(f"{ring.format(a)} is not a unit of {ring}")
        return reduce_residue_form(q), ring.residue(a)
    if not isinstance(ring, FiniteField):
        raise PreconditionError(f"{ring} is neither a finite field nor Z/p^k")
    if a == 0:
        raise PreconditionError("the embedded test form needs a unit scalar")
    return q, a


def char2_witness(q: QForm, a: int) -> int:
    """Some ``b`` with ``q ~ gamma_{a,n-2} + [a, b]`` (char 2, n >= 2)."""
    f = q.ring
    target = f.sub(arf(q), 0 if q.n == 2 else arf(make_gamma(f, a, q.n - 2).form))
    c = arf_class(f, target)
    return f.mul(f.inv(a), c)


def gamma_isometric(q: QForm, a: int) -> bool:
    """Whether a nondegenerate form over a finite field is isometric to gamma_{a,n}."""
    g = make_gamma(q.ring, a, q.n)
    return g.nondegenerate and is_isometric_ff(q, g.form)


def max_embedded_dimension(q: QForm, a: int) -> EmbeddingReport:
    """Largest k such that k independent vectors realise gamma_{a,k} in q.

    Forms over Z/p^k are decided on their residue form.
    """
    require_nondegenerate(q)
    qf, af = _residue_instance(q, a)
    f: FiniteField = qf.ring
    n = qf.n
    if gamma_isometric(qf, af):
        return EmbeddingReport(n, "subform")
    if f.p != 2:
        return EmbeddingReport(n - 1 if n % f.p else n - 2, "subform")
    b = char2_witness(qf, af)
    if n % 4 == 2:
        # gamma_{a,n-1} = gamma_{a,n-2} + <a> sits inside with a degenerate span
        return EmbeddingReport(n - 1, "dominated", b)
    return EmbeddingReport(n - 2, "subform", b)


def gamma_gram(ring: FiniteRing, a: int, k: int) -> list[list[int]]:
    """Polar Gram matrix ``a(I+J)`` of gamma_{a,k}."""
    two_a = ring.add(a, a)
    return [[two_a if i == j else a for j in range(k)] for i in range(k)]


def realises_gamma(q: QForm, a: int, xs) -> bool:
    """True iff ``q(x_i) = a`` and ``b(x_i, x_j) = a`` for the given vectors."""
    r = q.ring
    B = polar_matrix(q)
    for i, x in enumerate(xs):
        if evaluate(q, x) != a:
            return False
        bx = linalg.matvec(r, B, x)
        for y in xs[i + 1 :]:
            if linalg.dot(r, y, bx) != a:
                return False
    return True
