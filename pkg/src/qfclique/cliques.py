"""Case classification, clique numbers and maximum-clique counts.

The clique number is computed structurally as ``k + 1`` (plus one when the
extra vector ``-sum x_i`` fits), where ``k`` is the largest embedded test form
dimension.  The closed-form case tables are evaluated alongside; whenever the
two disagree the verified structural value is returned and the table value is
reported in ``warnings``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from qfclique.algebra import FiniteField, FiniteRing, ResidueRing
from qfclique.errors import InconsistencyError, PreconditionError
from qfclique.qform import (
    QForm,
    arf,
    arf_class,
    is_hyperbolic,
    polar_det,
    reduce_residue_form,
    require_nondegenerate,
    witt_index,
)
from qfclique.testform import gamma_isometric, make_gamma, max_embedded_dimension

# clique number minus n, per case label
ODD_TABLE_OFFSET = {"A": 0, "B": 0, "C": 1, "D": 1, "E": 2}
CHAR2_TABLE_OFFSET = {"A": -1, "B": 0, "C": 1, "D": 2}


@dataclass(frozen=True)
class CliqueCase:
    family: str  # "odd", "char2" or "isotropic"
    label: str  # "A".."E" or "isotropic"
    n: int
    k: int | None
    extra: bool
    omega: int
    table_omega: int
    witt_index: int | None = None
    warnings: tuple[str, ...] = ()


def check_scalar(ring: FiniteRing, a: int) -> None:
    ring.check(a)
    if isinstance(ring, ResidueRing) and a != 0 and not ring.is_unit(a):
        raise PreconditionError(f"scalar {ring.format(a)} is a nonzero zero divisor of {ring}")


def _divides(p: int, m: int) -> bool:
    return m % p == 0


def classify_case(q: QForm, a: int) -> CliqueCase:
    """Case label, embedded dimension and clique number of the graph of (q, a)."""
    ring = q.ring
    if not isinstance(ring, (FiniteField, ResidueRing)):
        raise PreconditionError(f"{ring} is neither a finite field nor Z/p^k")
    check_scalar(ring, a)
    require_nondegenerate(q)
    n = q.n

    if a == 0:
        if isinstance(ring, ResidueRing) and ring.k > 1:
            raise PreconditionError(
                f"isotropic cliques over {ring} are not governed by the Witt index; a = 0 needs a field"
            )
        i = witt_index(q)
        size = ring.size**i
        return CliqueCase("isotropic", "isotropic", n, None, False, size, size, i)

    qf = reduce_residue_form(q) if isinstance(ring, ResidueRing) else q
    af = ring.residue(a) if isinstance(ring, ResidueRing) else a
    p = qf.ring.p
    iso = gamma_isometric(qf, af)
    emb = max_embedded_dimension(q, a)
    k = emb.k
    if p == 2:
        family = "char2"
        if iso:
            label = "D" if n % 4 == 2 else "C"
        else:
            label = "A" if n % 4 == 2 else "B"
        extra = k % 4 == 2
        table = n + CHAR2_TABLE_OFFSET[label]
    else:
        family = "odd"
        if iso:
            label = "E" if _divides(p, n + 2) else "D"
        elif _divides(p, n):
            label = "A"
        elif _divides(p, n + 1):
            label = "C"
        else:
            label = "B"
        # -sum x_i joins the clique iff k + 2 vanishes in the ring itself
        extra = ring.from_int(k + 2) == 0
        table = n + ODD_TABLE_OFFSET[label]
    omega = k + 1 + int(extra)
    warnings = ()
    if omega != table:
        warnings = (
            f"case {label} table value {table} differs from the verified clique number {omega}",
        )
    return CliqueCase(family, label, n, k, extra, omega, table, None, warnings)


def clique_number(q: QForm, a: int) -> int:
    return classify_case(q, a).omega


def _require_field_form(q: QForm) -> FiniteField:
    if not isinstance(q.ring, FiniteField):
        raise PreconditionError(f"group orders and counts need a finite field, got {q.ring}")
    require_nondegenerate(q)
    return q.ring


def orthogonal_group_order(f: int, n: int, hyperbolic: bool) -> int:
    """|O(q)| for a nondegenerate n-dimensional form over a field of size f."""
    val = Fraction(2 * f ** (n * (n - 1) // 2))
    if n % 2 == 0:
        tail = Fraction(1, f ** (n // 2))
        val *= (1 - tail) if hyperbolic else (1 + tail)
    for i in range(1, (n + 1) // 2):
        val *= 1 - Fraction(1, f ** (2 * i))
    if val.denominator != 1:
        raise InconsistencyError(f"orthogonal group order is not an integer for f={f}, n={n}")
    return int(val)


def group_orders(q: QForm) -> tuple[int, int]:
    """``(|O(q)|, |iso(q)|)`` with ``|iso(q)| = f^n |O(q)|``."""
    f = _require_field_form(q)
    hyp = q.n % 2 == 0 and is_hyperbolic(q)
    o = orthogonal_group_order(f.size, q.n, hyp)
    return o, f.size**q.n * o


def complement_hyperbolic(q: QForm, a: int) -> bool:
    """Whether the binary complement of gamma_{a,n-2} in q is hyperbolic."""
    f = q.ring
    n = q.n
    if f.p == 2:
        rest = 0 if n == 2 else arf(make_gamma(f, a, n - 2).form)
        return arf_class(f, f.sub(arf(q), rest)) == 0
    g = make_gamma(f, a, n - 2)
    if not g.nondegenerate:
        raise InconsistencyError(f"gamma_{{a,{n - 2}}} is degenerate over {f}")
    # det B_q = det B_gamma * det B_C; C hyperbolic iff -det B_C is a square
    det_c = f.mul(polar_det(q), f.inv(g.det))
    return f.is_square(f.neg(det_c))


def alpha_value(q: QForm, a: int) -> int:
    f = q.ring.size
    return 2 * f - 2 if complement_hyperbolic(q, a) else 2 * f + 2


@dataclass(frozen=True)
class CountReport:
    case: CliqueCase
    omega: int
    omega_max: int
    o_order: int
    iso_order: int
    alpha: int | None
    orbits: tuple[tuple[str, int], ...]
    table_count: Fraction
    warnings: tuple[str, ...] = field(default=())


def _exact(num: int, den: int, what: str) -> int:
    if num % den:
        raise InconsistencyError(f"{what}: {num} is not divisible by {den}")
    return num // den


def count_max_cliques(q: QForm, a: int) -> CountReport:
    """Number of maximum cliques by orbit-stabiliser under the affine isometries."""
    f = _require_field_form(q)
    if a == 0:
        raise PreconditionError("maximum-clique counts for a = 0 are not covered")
    case = classify_case(q, a)
    o, iso = group_orders(q)
    n = q.n
    label = case.label
    alpha = None
    if (case.family, label) in {("odd", "A"), ("char2", "A"), ("char2", "B")}:
        alpha = alpha_value(q, a)

    fr = lambda d: Fraction(iso, d)  # noqa: E731
    if case.family == "odd":
        den = {
            "A": (alpha or 0) * factorial(n),
            "B": 2 * factorial(n),
            "C": 2 * factorial(n + 1),
            "D": factorial(n + 1),
            "E": factorial(n + 2),
        }[label]
        orbits = ((f"stabiliser {den}", _exact(iso, den, f"case {label}")),)
        table = fr(den)
    elif label == "A":
        # gamma_{a,n-1} on a degenerate span; stabiliser 2 * n!
        den = 2 * factorial(n)
        orbits = ((f"stabiliser {den}", _exact(iso, den, "case A")),)
        table = fr(alpha * factorial(n - 1))
    elif label == "B":
        den = alpha * factorial(n)
        orbits = ((f"stabiliser {den}", _exact(iso, den, "case B")),)
        table = fr(den) + fr(2 * factorial(n))
    else:
        den = factorial(n + 1) if label == "C" else factorial(n + 2)
        orbits = ((f"stabiliser {den}", _exact(iso, den, f"case {label}")),)
        table = fr(den)
    count = sum(v for _, v in orbits)
    warnings = list(case.warnings)
    if table != count:
        warnings.append(f"case {label} table count {table} differs from the verified count {count}")
    return CountReport(case, case.omega, count, o, iso, alpha, orbits, table, tuple(warnings))

