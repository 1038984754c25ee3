"""Clique numbers over the reals, the p-adic fields and the rationals.

Rational forms are diagonal with squarefree integer entries.  Over Q_p the
Witt index is read off the invariants (dimension, discriminant, Hasse
invariant): a form is isotropic according to the classical criteria for
dimensions 2 to 4 and always from dimension 5 on, and an isotropic form
splits off a hyperbolic plane with computable invariants of the remainder.
Over Q the largest embedded test form is the largest k for which the local
Witt index of ``q + (-gamma_{a,k})`` reaches k at every relevant place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from sympy import primefactors

from qfclique.algebra import (
    hilbert_symbol,
    make_field,
    split_unit,
    square_class,
    squarefree_part,
)
from qfclique.errors import InconsistencyError, PreconditionError
from qfclique.qform import diagonal, witt_index_ff

INF = math.inf
Place = int | float  # a prime, or math.inf


def place_name(place: Place) -> str:
    return "inf" if place == INF else str(int(place))


@dataclass(frozen=True)
class RationalForm:
    entries: tuple[int, ...]

    def __post_init__(self):
        if not self.entries:
            raise PreconditionError("a rational form needs dimension at least 1")
        for e in self.entries:
            if e == 0:
                raise PreconditionError("diagonal entries must be nonzero")
            if squarefree_part(e) != e:
                raise PreconditionError(f"entry {e} is not squarefree; use RationalForm.of")

    @classmethod
    def of(cls, entries) -> "RationalForm":
        """Form from arbitrary nonzero rationals, each reduced to its square class."""
        return cls(tuple(squarefree_part(Fraction(e)) for e in entries))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def signature(self) -> tuple[int, int]:
        pos = sum(1 for e in self.entries if e > 0)
        return pos, self.n - pos

    def __neg__(self) -> "RationalForm":
        return RationalForm(tuple(-e for e in self.entries))

    def __add__(self, other: "RationalForm") -> "RationalForm":
        return RationalForm(self.entries + other.entries)

    def __str__(self):
        return "<" + ", ".join(str(e) for e in self.entries) + ">"


def diagonalize_symmetric(S) -> list[Fraction]:
    """Diagonal of a congruent diagonal matrix (exact symmetric elimination)."""
    a = [[Fraction(x) for x in row] for row in S]
    n = len(a)
    if any(len(r) != n for r in a) or any(a[i][j] != a[j][i] for i in range(n) for j in range(n)):
        raise PreconditionError("matrix must be square and symmetric")
    out = []
    for c in range(n):
        if a[c][c] == 0:
            j = next((j for j in range(c + 1, n) if a[c][j] != 0), None)
            if j is None:
                raise PreconditionError("degenerate form")
            if a[j][j] != 0:
                a[c], a[j] = a[j], a[c]
                for row in a:
                    row[c], row[j] = row[j], row[c]
            else:
                # replace e_c by e_c + e_j, whose value is 2 a[c][j] != 0
                for k in range(n):
                    a[c][k] += a[j][k]
                for k in range(n):
                    a[k][c] += a[k][j]
        piv = a[c][c]
        out.append(piv)
        for r in range(c + 1, n):
            f = a[r][c] / piv
            if f:
                for k in range(n):
                    a[r][k] -= f * a[c][k]
                for k in range(n):
                    a[k][r] -= f * a[k][c]
    return out


def form_from_upper(U) -> RationalForm:
    """Diagonal representative of ``x -> sum_{i<=j} U[i][j] x_i x_j`` over Q."""
    n = len(U)
    S = [[Fraction(U[i][j]) if i == j else Fraction(U[min(i, j)][max(i, j)], 2) for j in range(n)] for i in range(n)]
    return RationalForm.of(diagonalize_symmetric(S))


def form_from_gram(B) -> RationalForm:
    """Diagonal representative of the form with polar matrix B (q(x) = x^T B x / 2)."""
    return RationalForm.of(diagonalize_symmetric([[Fraction(x, 2) for x in row] for row in B]))


def sum_of_squares(n: int) -> RationalForm:
    return RationalForm((1,) * n)


def real_omega(signature: tuple[int, int], a_sign: int) -> int:
    """Clique number over the reals: ``r+ + 1`` for a > 0, ``r- + 1`` for a < 0."""
    r_pos, r_neg = signature
    if r_pos < 0 or r_neg < 0 or r_pos + r_neg < 1:
        raise PreconditionError(f"invalid signature {signature}")
    if a_sign == 0:
        raise PreconditionError("a = 0 gives infinite cliques over the reals")
    return (r_pos if a_sign > 0 else r_neg) + 1


def gamma_rational_diag(a, n: int) -> RationalForm:
    """Diagonalisation ``<2a * i * (i+1)>`` of gamma_{a,n} over Q."""
    a = Fraction(a)
    if a == 0:
        raise PreconditionError("test form needs a nonzero scalar")
    if n < 1:
        raise PreconditionError("test form dimension must be at least 1")
    return RationalForm.of(2 * a * i * (i + 1) for i in range(1, n + 1))


# -- local invariants ---------------------------------------------------------


def _is_local_square(x, place: Place) -> bool:
    return square_class(x, place) == 1


def discriminant(form: RationalForm) -> int:
    return squarefree_part(math.prod(form.entries))


def hasse_invariant(form: RationalForm, place: Place) -> int:
    """Product of ``(a_i, a_j)_v`` over ``i < j``."""
    e = form.entries
    s = 1
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            s *= hilbert_symbol(e[i], e[j], place)
    return s


def _isotropic_from_invariants(n: int, d: int, eps: int, p: int) -> bool:
    if n <= 1:
        return False
    if n == 2:
        return _is_local_square(-d, p)
    if n == 3:
        return hilbert_symbol(-1, -d, p) == eps
    if n == 4:
        return not _is_local_square(d, p) or eps == hilbert_symbol(-1, -1, p)
    return True


def _witt_from_invariants(n: int, d: int, eps: int, p: int) -> int:
    # split q = H + g: d(g) = -d(q), eps(g) = eps(q) * (-1, d(g))
    i = 0
    while _isotropic_from_invariants(n, d, eps, p):
        i += 1
        n -= 2
        d = squarefree_part(-d)
        eps = eps * hilbert_symbol(-1, d, p)
    return i


def witt_index_by_invariants(form: RationalForm, p: int) -> int:
    """Witt index over Q_p (any prime) from dimension, discriminant and Hasse invariant."""
    return _witt_from_invariants(form.n, discriminant(form), hasse_invariant(form, p), p)


def residue_split(form: RationalForm, p: int) -> tuple[list[int], list[int]]:
    """Unit parts mod p of the entries with even and with odd p-adic valuation."""
    even, odd = [], []
    for e in form.entries:
        v, u = split_unit(Fraction(e), p)
        (odd if v % 2 else even).append(u % p)
    return even, odd


def witt_index_by_residues(form: RationalForm, p: int) -> int:
    """Witt index over Q_p for odd p as the sum over the two residue forms."""
    if p == 2:
        raise PreconditionError("residue splitting needs an odd prime")
    field = make_field(p)
    return sum(witt_index_ff(diagonal(field, part)) for part in residue_split(form, p) if part)


def local_witt_index(form: RationalForm, place: Place) -> int:
    if place == INF:
        return min(form.signature)
    p = int(place)
    if p == 2:
        return witt_index_by_invariants(form, 2)
    return witt_index_by_residues(form, p)


def relevant_places(*forms: RationalForm) -> list[Place]:
    """Infinity, 2, and the odd primes dividing some entry."""
    primes = set()
    for f in forms:
        for e in f.entries:
            primes.update(primefactors(abs(e)))
    return [INF, 2] + sorted(p for p in primes if p != 2)


def local_profile(form: RationalForm, places=None) -> dict[Place, int]:
    if places is None:
        places = relevant_places(form)
    return {v: local_witt_index(form, v) for v in places}


def rational_subform_test(psi: RationalForm, phi: RationalForm) -> bool:
    """Whether psi is isometric to a subform of phi over Q."""
    if psi.n > phi.n:
        return False
    combined = phi + (-psi)
    return min(local_profile(combined, relevant_places(phi, psi)).values()) >= psi.n


def local_omega(q: RationalForm, a, place: Place) -> int:
    """Clique number over Q_p or R: one more than the largest k with
    ``i_W(q + (-gamma_{a,k})) >= k`` at that place."""
    a = Fraction(a)
    if a == 0:
        raise PreconditionError("a = 0 gives infinite cliques over an infinite field")
    d = 0
    for k in range(1, q.n + 1):
        if local_witt_index(q + (-gamma_rational_diag(a, k)), place) < k:
            break
        d = k
    return d + 1


@dataclass(frozen=True)
class RationalOmega:
    omega: int
    d: int
    blocked_at: int | None  # first k that fails, None if d = n
    profile: dict  # place -> Witt index of q + (-gamma_{a,k}) at k = blocked_at
    blocking_places: tuple  # places where that Witt index falls short of k


def rational_omega(q: RationalForm, a) -> RationalOmega:
    """Clique number over Q by the local-global principle, with the failing places."""
    a = Fraction(a)
    if a == 0:
        raise PreconditionError("a = 0 gives infinite cliques over Q")
    r_pos, r_neg = q.signature
    bound = r_pos if a > 0 else r_neg
    d = 0
    failed = False
    for k in range(1, q.n + 1):
        ok = rational_subform_test(gamma_rational_diag(a, k), q)
        if failed and ok:
            raise InconsistencyError(f"subform test not monotone at k={k} for {q}")
        if ok:
            if k > bound:
                raise InconsistencyError(f"gamma_{{a,{k}}} embeds above the real bound {bound}")
            d = k
        else:
            failed = True
    blocked_at = d + 1 if d < q.n else None
    profile: dict = {}
    blocking: tuple = ()
    if blocked_at is not None:
        g = gamma_rational_diag(a, blocked_at)
        profile = local_profile(q + (-g), relevant_places(q, g))
        blocking = tuple(v for v, i in profile.items() if i < blocked_at)
    return RationalOmega(d + 1, d, blocked_at, profile, blocking)


def _is_square_int(m: int) -> bool:
    return m >= 0 and isqrt(m) ** 2 == m


def represents_rational(form: RationalForm, c) -> bool:
    """Whether the rational form takes the nonzero value c."""
    extended = form + RationalForm.of([-Fraction(c)])
    return min(local_profile(extended).values()) >= 1


def sos_fastpath(n: int) -> int:
    """Clique number of the sum of n squares over Q at a = 1."""
    if n < 1:
        raise PreconditionError("dimension must be at least 1")
    if n % 2 == 0:
        return n + 1 if _is_square_int(n + 1) else n
    if n == 1:
        return 2
    if not represents_rational(RationalForm.of([1, 2 * (n - 1)]), n):
        return n - 1
    return n + 1 if _is_square_int(2 * (n + 1)) else n
