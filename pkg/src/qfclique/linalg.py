"""Dense linear algebra over finite fields and Z/p^k (unit pivots only)."""

from __future__ import annotations

from qfclique.algebra import FiniteRing
from qfclique.errors import PreconditionError

Matrix = list[list[int]]


def identity(ring: FiniteRing, n: int) -> Matrix:
    return [[ring.one if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> Matrix:
    return [list(r) for r in zip(*m)] if m else []


def matmul(ring: FiniteRing, a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[dot(ring, row, col) for col in bt] for row in a]


def matvec(ring: FiniteRing, a: Matrix, x) -> list[int]:
    return [dot(ring, row, x) for row in a]


def dot(ring: FiniteRing, x, y) -> int:
    s = 0
    for a, b in zip(x, y):
        if a and b:
            s = ring.add(s, ring.mul(a, b))
    return s


def vec_add(ring, x, y):
    return tuple(ring.add(a, b) for a, b in zip(x, y))


def vec_sub(ring, x, y):
    return tuple(ring.sub(a, b) for a, b in zip(x, y))


def vec_scale(ring, c, x):
    return tuple(ring.mul(c, a) for a in x)


def vec_neg(ring, x):
    return tuple(ring.neg(a) for a in x)


def det(ring: FiniteRing, m: Matrix) -> int:
    """Determinant over a field (Gaussian elimination)."""
    if not ring.is_field:
        raise PreconditionError("determinant by elimination needs a field; reduce to the residue field first")
    a = [list(r) for r in m]
    n = len(a)
    d = ring.one
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = ring.neg(d)
        d = ring.mul(d, a[c][c])
        inv = ring.inv(a[c][c])
        for r in range(c + 1, n):
            if a[r][c]:
                f = ring.mul(a[r][c], inv)
                a[r] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(a[r], a[c])]
    return d


def solve_affine(ring: FiniteRing, a: Matrix, b) -> tuple[tuple[int, ...], list[tuple[int, ...]]] | None:
    """All solutions of ``a x = b`` as ``(particular, kernel_basis)``.

    Over Z/p^k every nonzero row must contain a unit after elimination;
    that holds whenever the rows are independent modulo p.  Returns
    ``None`` for an inconsistent system.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [list(r) + [v] for r, v in zip(a, b)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if ring.is_unit(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ring.inv(rows[r][c])
        rows[r] = [ring.mul(inv, x) for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if any(rows[i][:n]):
            raise PreconditionError("system has no unit pivot; rows are dependent modulo the maximal ideal")
        if rows[i][n]:
            return None
    free = [c for c in range(n) if c not in pivots]
    x0 = [0] * n
    for i, c in enumerate(pivots):
        x0[c] = rows[i][n]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = ring.one
        for i, c in enumerate(pivots):
            v[c] = ring.neg(rows[i][f])
        basis.append(tuple(v))
    return tuple(x0), basis


def rank(ring: FiniteRing, vectors) -> int:
    """Rank of a list of vectors over a field."""
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    n = len(rows[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ring.inv(rows[r][c])
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = ring.mul(rows[i][c], inv)
                rows[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
    return r
