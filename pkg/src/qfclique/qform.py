"""Quadratic forms over finite fields and Z/p^k.

A form is stored as its upper-triangular coefficient matrix ``U`` so that
``q(x) = sum_{i<=j} U[i][j] x_i x_j``.  That representation is valid in every
characteristic; the polar Gram matrix ``B = U + U^T`` is always derived.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from qfclique import linalg
from qfclique.algebra import FiniteField, FiniteRing, ResidueRing, make_field
from qfclique.errors import DegenerateFormError, PreconditionError

Vector = tuple[int, ...]


@dataclass(frozen=True)
class QForm:
    ring: FiniteRing
    U: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.U)
        if n == 0:
            raise PreconditionError("a quadratic form needs dimension at least 1")
        for i, row in enumerate(self.U):
            if len(row) != n:
                raise PreconditionError("coefficient matrix must be square")
            for j, c in enumerate(row):
                self.ring.check(c)
                if j < i and c:
                    raise PreconditionError("coefficient matrix must be upper triangular")

    @property
    def n(self) -> int:
        return len(self.U)

    def __call__(self, x) -> int:
        return evaluate(self, x)

    def __str__(self):
        if all(self.U[i][j] == 0 for i in range(self.n) for j in range(i + 1, self.n)):
            return "<" + ", ".join(self.ring.format(self.U[i][i]) for i in range(self.n)) + ">"
        return "upper" + str([list(r) for r in self.U])


def make_form(ring: FiniteRing, *, diag=None, upper=None, gram=None) -> QForm:
    """Build a form from exactly one of a diagonal, an upper-triangular
    coefficient matrix, or a symmetric polar Gram matrix (2 invertible)."""
    given = [s is not None for s in (diag, upper, gram)]
    if sum(given) != 1:
        raise PreconditionError("give exactly one of diag, upper, gram")
    if diag is not None:
        d = [ring.check(c) for c in diag]
        n = len(d)
        if n == 0:
            raise PreconditionError("a quadratic form needs dimension at least 1")
        return QForm(ring, tuple(tuple(d[i] if i == j else 0 for j in range(n)) for i in range(n)))
    if upper is not None:
        _square(upper)
        n = len(upper)
        rows = []
        for i in range(n):
            for j in range(i):
                if upper[i][j]:
                    raise PreconditionError("upper matrix has entries below the diagonal")
            rows.append(tuple(ring.check(upper[i][j]) for j in range(n)))
        return QForm(ring, tuple(rows))
    _square(gram)
    if ring.p == 2:
        raise PreconditionError("a Gram matrix does not determine a form in characteristic 2")
    n = len(gram)
    g = [[ring.check(c) for c in row] for row in gram]
    for i in range(n):
        for j in range(n):
            if g[i][j] != g[j][i]:
                raise PreconditionError("Gram matrix must be symmetric")
    half = ring.inv(ring.from_int(2))
    rows = tuple(
        tuple(ring.mul(half, g[i][i]) if i == j else (g[i][j] if j > i else 0) for j in range(n))
        for i in range(n)
    )
    return QForm(ring, rows)


def _square(m):
    if not m or any(len(r) != len(m) for r in m):
        raise PreconditionError("matrix must be square and nonempty")


def diagonal(ring: FiniteRing, entries) -> QForm:
    """Diagonal form from integer entries mapped through the integers."""
    return make_form(ring, diag=[ring.from_int(int(e)) for e in entries])


def binary_block(ring: FiniteRing, a: int, b: int) -> QForm:
    """The binary form ``[a, b] = a x^2 + x y + b y^2``."""
    return make_form(ring, upper=[[a, ring.one], [0, b]])


def hyperbolic_plane(ring: FiniteRing) -> QForm:
    return make_form(ring, upper=[[0, ring.one], [0, 0]])


def orthogonal_sum(*forms: QForm) -> QForm:
    ring = forms[0].ring
    if any(f.ring != ring for f in forms):
        raise PreconditionError("orthogonal sum of forms over different rings")
    n = sum(f.n for f in forms)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for f in forms:
        for i in range(f.n):
            for j in range(f.n):
                rows[off + i][off + j] = f.U[i][j]
        off += f.n
    return QForm(ring, tuple(tuple(r) for r in rows))


def scale(q: QForm, c: int) -> QForm:
    r = q.ring
    return QForm(r, tuple(tuple(r.mul(c, x) for x in row) for row in q.U))


def transform(q: QForm, S) -> QForm:
    """The form ``x -> q(S x)``, upper-triangularised."""
    r = q.ring
    n = q.n
    m = linalg.matmul(r, linalg.matmul(r, linalg.transpose(S), [list(row) for row in q.U]), S)
    rows = tuple(
        tuple(m[i][i] if i == j else (r.add(m[i][j], m[j][i]) if j > i else 0) for j in range(n))
        for i in range(n)
    )
    return QForm(r, rows)


def evaluate(q: QForm, x) -> int:
    r = q.ring
    if len(x) != q.n:
        raise PreconditionError(f"vector of length {len(x)} for a form of dimension {q.n}")
    s = 0
    for i in range(q.n):
        if not x[i]:
            continue
        row = q.U[i]
        for j in range(i, q.n):
            if row[j] and x[j]:
                s = r.add(s, r.mul(row[j], r.mul(x[i], x[j])))
    return s


def polar_matrix(q: QForm) -> tuple[tuple[int, ...], ...]:
    r = q.ring
    n = q.n
    return tuple(
        tuple(r.add(q.U[i][j], q.U[j][i]) if i != j else r.add(q.U[i][i], q.U[i][i]) for j in range(n))
        for i in range(n)
    )


def polar(q: QForm, x, y) -> int:
    b = polar_matrix(q)
    return linalg.dot(q.ring, x, linalg.matvec(q.ring, b, y))


def polar_det(q: QForm) -> int:
    """Determinant of the polar Gram matrix (over a field)."""
    return linalg.det(q.ring, [list(r) for r in polar_matrix(q)])


def is_nondegenerate(q: QForm) -> bool:
    if isinstance(q.ring, ResidueRing):
        return is_nondegenerate(reduce_residue_form(q))
    return polar_det(q) != 0


def require_nondegenerate(q: QForm) -> None:
    if not is_nondegenerate(q):
        raise DegenerateFormError(f"{q} over {q.ring} is degenerate")


def reduce_residue_form(q: QForm) -> QForm:
    """Coefficientwise reduction of a form over Z/p^k to GF(p)."""
    ring = q.ring
    if isinstance(ring, FiniteField):
        if ring.k != 1:
            raise PreconditionError(f"{ring} has no residue reduction")
        return q
    if not isinstance(ring, ResidueRing):
        raise PreconditionError(f"cannot reduce a form over {ring}")
    field = ring.residue_field
    return QForm(field, tuple(tuple(ring.residue(c) for c in row) for row in q.U))


def residue_field_of(ring: FiniteRing) -> FiniteField:
    if isinstance(ring, ResidueRing):
        return ring.residue_field
    return ring


# -- invariants over finite fields ------------------------------------------


@dataclass(frozen=True)
class FormInvariants:
    n: int
    nondegenerate: bool
    det_class: int | None
    arf: int | None
    witt_index: int
    hyperbolic: bool


def _require_field(q: QForm) -> FiniteField:
    if not isinstance(q.ring, FiniteField):
        raise PreconditionError(f"{q.ring} is not a finite field; reduce the form first")
    return q.ring


def det_class(q: QForm) -> int:
    """Square class of det(B): 1 or the field's smallest non-square."""
    f = _require_field(q)
    if f.p == 2:
        raise PreconditionError("determinant classes carry no information in characteristic 2")
    d = polar_det(q)
    if d == 0:
        raise DegenerateFormError(f"{q} over {f} is degenerate")
    return f.one if f.is_square(d) else f.nonsquare


def symplectic_blocks(q: QForm) -> list[tuple[int, int]]:
    """Split a nondegenerate char-2 form into binary blocks ``[a_i, b_i]``.

    Builds a symplectic basis for the alternating polar form by elimination;
    each hyperbolic pair ``(u, v)`` with ``b(u, v) = 1`` yields ``[q(u), q(v)]``.
    """
    f = _require_field(q)
    if f.p != 2:
        raise PreconditionError("symplectic splitting is for characteristic 2")
    B = polar_matrix(q)
    bil = lambda x, y: linalg.dot(f, x, linalg.matvec(f, B, y))
    vecs = [tuple(f.one if i == j else 0 for j in range(q.n)) for i in range(q.n)]
    blocks = []
    while vecs:
        u = vecs.pop(0)
        idx = next((i for i, w in enumerate(vecs) if bil(u, w)), None)
        if idx is None:
            raise DegenerateFormError(f"{q} over {f} is degenerate")
        v = vecs.pop(idx)
        v = linalg.vec_scale(f, f.inv(bil(u, v)), v)
        blocks.append((evaluate(q, u), evaluate(q, v)))
        # char 2: w + b(w,v) u + b(w,u) v is orthogonal to u and v
        vecs = [
            linalg.vec_add(f, w, linalg.vec_add(f, linalg.vec_scale(f, bil(w, v), u), linalg.vec_scale(f, bil(w, u), v)))
            for w in vecs
        ]
    return blocks


def arf_element(q: QForm) -> int:
    f = _require_field(q)
    s = 0
    for a, b in symplectic_blocks(q):
        s = f.add(s, f.mul(a, b))
    return s


def arf_class(f: FiniteField, c: int) -> int:
    """Canonical representative of ``c`` in F / {x^2 + x}."""
    if f.trace(c) == 0:
        return 0
    return next(x for x in f.elements() if f.trace(x) != 0)


def arf(q: QForm) -> int:
    return arf_class(_require_field(q), arf_element(q))


def invariants_ff(q: QForm) -> FormInvariants:
    f = _require_field(q)
    n = q.n
    if f.p == 2:
        if n % 2:
            raise DegenerateFormError("odd-dimensional forms are degenerate in characteristic 2")
        a = arf(q)  # raises on degenerate input
        hyp = a == 0
        return FormInvariants(n, True, None, a, n // 2 if hyp else n // 2 - 1, hyp)
    dc = det_class(q)
    if n % 2:
        return FormInvariants(n, True, dc, None, (n - 1) // 2, False)
    sign = f.one if (n // 2) % 2 == 0 else f.neg(f.one)
    hyp = f.is_square(f.mul(sign, dc))
    return FormInvariants(n, True, dc, None, n // 2 if hyp else n // 2 - 1, hyp)


def witt_index_ff(q: QForm) -> int:
    return invariants_ff(q).witt_index


def witt_index(q: QForm) -> int:
    """Witt index over a finite field or, through its residue form, over Z/p^k."""
    return witt_index_ff(reduce_residue_form(q) if isinstance(q.ring, ResidueRing) else q)


def is_hyperbolic(q: QForm) -> bool:
    return invariants_ff(q).hyperbolic


def is_isometric_ff(q1: QForm, q2: QForm) -> bool:
    if q1.ring != q2.ring:
        raise PreconditionError(f"forms over {q1.ring} and {q2.ring}")
    if q1.n != q2.n:
        return False
    i1, i2 = invariants_ff(q1), invariants_ff(q2)
    if q1.ring.p == 2:
        return i1.arf == i2.arf
    return i1.det_class == i2.det_class


def is_isometric(q1: QForm, q2: QForm) -> bool:
    """Isometry over a finite field, or over Z/p^k via residue forms."""
    if isinstance(q1.ring, ResidueRing):
        if q1.ring != q2.ring:
            raise PreconditionError(f"forms over {q1.ring} and {q2.ring}")
        return is_isometric_ff(reduce_residue_form(q1), reduce_residue_form(q2))
    return is_isometric_ff(q1, q2)


# -- value representation ----------------------------------------------------


def scan_order(ring: FiniteRing, n: int):
    """Deterministic vector scan: vectors supported on the first coordinate,
    then on the first two, and so on; lexicographic within each stage."""
    yield (0,) * n
    for m in range(1, n + 1):
        for head in product(range(ring.size), repeat=m - 1):
            for last in range(1, ring.size):
                yield head + (last,) + (0,) * (n - m)


def represent_value(q: QForm, a: int) -> Vector | None:
    """First vector in :func:`scan_order` with ``q(x) = a``, or ``None``."""
    for x in scan_order(q.ring, q.n):
        if evaluate(q, x) == a:
            return x
    return None


def isotropic_vectors(q: QForm):
    return (x for x in product(range(q.ring.size), repeat=q.n) if any(x) and evaluate(q, x) == 0)

