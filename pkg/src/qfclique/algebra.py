"""Exact arithmetic for the rings the rest of the package works over.

Finite rings (``GF(p^k)`` and ``Z/p^k``) encode their elements as integer
codes ``0 .. size-1``.  For ``GF(p^k)`` the code of ``c_0 + c_1 t + ... +
c_{k-1} t^{k-1}`` is ``sum(c_i * p**i)``, so the integer order of codes is the
canonical element order used for every deterministic scan in the package.

The characteristic-zero handles (``Q``, ``Q_p``, ``R``) carry
:class:`fractions.Fraction` values; they only exist so that ring spec strings
have something to resolve to, the real work happens in :mod:`qfclique.charzero`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np
from sympy import factorint, isprime

from qfclique.errors import PreconditionError

# add/mul tables are materialised only for rings up to this size
TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def _poly_strip(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of ``num`` by the monic polynomial ``den`` over GF(p)."""
    r = list(num)
    d = len(den) - 1
    for i in range(len(r) - 1, d - 1, -1):
        c = r[i] % p
        if c:
            for j in range(d + 1):
                r[i - d + j] = (r[i - d + j] - c * den[j]) % p
    return _poly_strip([x % p for x in r[:d]])


def _monic_polys(p: int, deg: int):
    """Monic polynomials of degree ``deg`` in increasing code order."""
    for m in range(p**deg):
        coeffs = [(m // p**i) % p for i in range(deg)]
        yield coeffs + [1]


def _is_irreducible(poly: list[int], p: int) -> bool:
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_mod(poly, g, p):
                return False
    return True


class FiniteRing:
    """Shared behaviour of ``GF(p^k)`` and ``Z/p^k``.

    Subclasses define ``p`` (residue characteristic), ``size``,
    ``characteristic`` and the scalar operations ``add``/``mul``/``neg``.
    """

    p: int
    size: int
    characteristic: int
    is_field: bool

    # -- scalar operations --------------------------------------------------
    def add(self, x: int, y: int) -> int:
        raise NotImplementedError

    def mul(self, x: int, y: int) -> int:
        raise NotImplementedError

    def neg(self, x: int) -> int:
        raise NotImplementedError

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def from_int(self, n: int) -> int:
        raise NotImplementedError

    def is_unit(self, x: int) -> bool:
        raise NotImplementedError

    def inv(self, x: int) -> int:
        if not self.is_unit(x):
            raise PreconditionError(f"{self.format(x)} is not invertible in {self}")
        return self._unit_inverse[x]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def power(self, x: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(x), -e)
        result, base = self.from_int(1), x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def elements(self) -> range:
        return range(self.size)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return self.from_int(1)

    @cached_property
    def _unit_inverse(self) -> dict[int, int]:
        inv = {}
        one = self.one
        units = [u for u in self.elements() if self.is_unit(u)]
        for u in units:
            if u in inv:
                continue
            for w in units:
                if self.mul(u, w) == one:
                    inv[u] = w
                    inv[w] = u
                    break
        return inv

    @cached_property
    def _square_roots(self) -> dict[int, int]:
        roots: dict[int, int] = {}
        for x in self.elements():
            roots.setdefault(self.mul(x, x), x)
        return roots

    def is_square(self, x: int) -> bool:
        return x in self._square_roots

    def sqrt(self, x: int) -> int:
        """Smallest square root in code order; raises for non-squares."""
        try:
            return self._square_roots[x]
        except KeyError:
            raise PreconditionError(f"{self.format(x)} is not a square in {self}") from None

    @cached_property
    def nonsquare(self) -> int:
        """Smallest unit that is not a square (odd characteristic)."""
        for x in self.elements():
            if self.is_unit(x) and not self.is_square(x):
                return x
        raise PreconditionError(f"every unit of {self} is a square")

    # -- vectorised tables --------------------------------------------------
    @cached_property
    def add_table(self) -> np.ndarray:
        return self._table(self.add)

    @cached_property
    def mul_table(self) -> np.ndarray:
        return self._table(self.mul)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(x) for x in self.elements()], dtype=np.int64)

    def _table(self, op) -> np.ndarray:
        if self.size > TABLE_LIMIT:
            raise PreconditionError(f"{self} is too large for operation tables")
        s = self.size
        t = np.empty((s, s), dtype=np.int64)
        for x in range(s):
            for y in range(s):
                t[x, y] = op(x, y)
        return t

    def check(self, x: int) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.size:
            raise PreconditionError(f"{x!r} is not an element code of {self}")
        return int(x)

    def format(self, x: int) -> str:
        return str(x)

    def residue(self, x: int) -> int:
        """Image in the residue field GF(p) (identity-like for prime fields)."""
        raise NotImplementedError

    def element(self, x: int) -> "Element":
        return Element(self, self.check(x))


@dataclass(frozen=True, eq=True)
class FiniteField(FiniteRing):
    """GF(p^k) as GF(p)[t] / (modulus)."""

    p: int
    k: int
    modulus: tuple[int, ...]  # coefficients low -> high, monic

    is_field = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise PreconditionError(f"{self.p} is not prime")
        if self.k < 1:
            raise PreconditionError("extension degree must be at least 1")
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise PreconditionError("modulus must be monic of degree k")
        if self.k > 1 and not _is_irreducible(list(self.modulus), self.p):
            raise PreconditionError(f"modulus {self.modulus} is reducible over GF({self.p})")

    def __str__(self):
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    @property
    def size(self) -> int:
        return self.p**self.k

    @property
    def characteristic(self) -> int:
        return self.p

    def _digits(self, x: int) -> list[int]:
        return [(x // self.p**i) % self.p for i in range(self.k)]

    def _code(self, digits) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(digits))

    def add(self, x, y):
        if self.k == 1:
            return (x + y) % self.p
        return self._code((a + b) % self.p for a, b in zip(self._digits(x), self._digits(y)))

    def neg(self, x):
        if self.k == 1:
            return -x % self.p
        return self._code(-a % self.p for a in self._digits(x))

    def mul(self, x, y):
        if self.k == 1:
            return x * y % self.p
        a, b = self._digits(x), self._digits(y)
        prod = [0] * (2 * self.k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        r = _poly_mod(prod, list(self.modulus), self.p)
        return self._code(r)

    def from_int(self, n: int) -> int:
        return n % self.p

    def is_unit(self, x):
        return x != 0

    def inv(self, x):
        if x == 0:
            raise PreconditionError(f"division by zero in {self}")
        if self.k == 1:
            return pow(x, -1, self.p)
        return self.power(x, self.size - 2)

    def sqrt(self, x):
        if self.p == 2:
            # inverse Frobenius: x -> x^(2^(k-1)) is the unique square root
            return self.power(x, self.size // 2)
        return super().sqrt(x)

    def is_square(self, x):
        if self.p == 2:
            return True
        if x == 0:
            return True
        return self.power(x, (self.size - 1) // 2) == 1

    def residue(self, x):
        if self.k != 1:
            raise PreconditionError(f"{self} has no residue map to a prime field")
        return x

    def trace(self, x: int) -> int:
        """Absolute trace to GF(p)."""
        t, y = 0, x
        for _ in range(self.k):
            t = self.add(t, y)
            y = self.power(y, self.p)
        return t

    def format(self, x: int) -> str:
        if self.k == 1:
            return str(x)
        terms = []
        for i, c in reversed(list(enumerate(self._digits(x)))):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(coef + mono)
        return "+".join(terms) or "0"

    def from_poly(self, coeffs) -> int:
        """Element from coefficients of 1, t, t^2, ... (reduced modulo the modulus)."""
        r = _poly_mod([int(c) for c in coeffs], list(self.modulus), self.p)
        return self._code(r)


def make_field(p: int, k: int = 1) -> FiniteField:
    """GF(p^k) with the lexicographically smallest irreducible monic modulus."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if k < 1:
        raise PreconditionError("extension degree must be at least 1")
    if k == 1:
        return FiniteField(p, 1, (0, 1))
    for poly in _monic_polys(p, k):
        if _is_irreducible(poly, p):
            return FiniteField(p, k, tuple(poly))
    raise RuntimeError(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True, eq=True)
class ResidueRing(FiniteRing):
    """Z/p^k for an odd prime p."""

    p: int
    k: int

    is_field = False

    def __post_init__(self):
        if not is_prime(self.p):
            raise PreconditionError(f"{self.p} is not prime")
        if self.p == 2:
            raise PreconditionError("Z/2^k is not supported: 2 must be invertible for residue reduction")
        if self.k < 1:
            raise PreconditionError("exponent must be at least 1")

    def __str__(self):
        return f"Z/{self.p}^{self.k}"

    @property
    def size(self) -> int:
        return self.p**self.k

    @property
    def characteristic(self) -> int:
        return self.size

    def add(self, x, y):
        return (x + y) % self.size

    def neg(self, x):
        return -x % self.size

    def mul(self, x, y):
        return x * y % self.size

    def from_int(self, n):
        return n % self.size

    def is_unit(self, x):
        return x % self.p != 0

    def inv(self, x):
        if not self.is_unit(x):
            raise PreconditionError(f"{x} is a zero divisor in {self}")
        return pow(x, -1, self.size)

    def residue(self, x):
        return x % self.p

    @cached_property
    def residue_field(self) -> FiniteField:
        return make_field(self.p, 1)


def make_residue_ring(p: int, k: int) -> ResidueRing:
    return ResidueRing(p, k)


# -- characteristic-zero handles -------------------------------------------


@dataclass(frozen=True)
class RationalField:
    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class PAdicField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise PreconditionError(f"{self.p} is not prime")

    def __str__(self):
        return f"Q_{self.p}"


@dataclass(frozen=True)
class RealField:
    def __str__(self):
        return "R"


Ring = FiniteRing | RationalField | PAdicField | RealField


# -- tagged elements ---------------------------------------------------------


@dataclass(frozen=True)
class Element:
    """A ring element that refuses to mix with elements of another ring."""

    ring: FiniteRing
    value: int = field(compare=True)

    def _other(self, other):
        if isinstance(other, Element):
            if other.ring != self.ring:
                raise PreconditionError(f"cannot combine elements of {self.ring} and {other.ring}")
            return other.value
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        y = self._other(other)
        return Element(self.ring, self.ring.add(self.value, y))

    __radd__ = __add__

    def __sub__(self, other):
        y = self._other(other)
        return Element(self.ring, self.ring.sub(self.value, y))

    def __rsub__(self, other):
        y = self._other(other)
        return Element(self.ring, self.ring.sub(y, self.value))

    def __mul__(self, other):
        y = self._other(other)
        return Element(self.ring, self.ring.mul(self.value, y))

    __rmul__ = __mul__

    def __truediv__(self, other):
        y = self._other(other)
        return Element(self.ring, self.ring.div(self.value, y))

    def __neg__(self):
        return Element(self.ring, self.ring.neg(self.value))

    def __pow__(self, e: int):
        return Element(self.ring, self.ring.power(self.value, e))

    def is_square(self) -> bool:
        return self.ring.is_square(self.value)

    def sqrt(self) -> "Element":
        return Element(self.ring, self.ring.sqrt(self.value))

    def __str__(self):
        return self.ring.format(self.value)


def arith(x: Element, y: Element | None, op: str):
    """Dispatch ``add | sub | mul | div | sqrt | is_square`` on tagged elements."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "sqrt":
        return x.sqrt()
    if op == "is_square":
        return x.is_square()
    raise ValueError(f"unknown operation {op!r}")


# -- number theory ------------------------------------------------------------


def legendre_symbol(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def squarefree_part(x: int | Fraction) -> int:
    """Squarefree integer in the same rational square class as ``x``."""
    x = Fraction(x)
    if x == 0:
        raise PreconditionError("0 has no square class")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    out = 1
    for prime, e in factorint(abs(n)).items():
        if e % 2:
            out *= prime
    return sign * out


def split_unit(x: Fraction, p: int) -> tuple[int, int]:
    """Write ``x = p^v * u`` with ``u`` an integer prime to p (up to squares)."""
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    n = num * den  # same square class as x
    v = valuation(n, p)
    return v, n // p**v


def hilbert_symbol(a, b, place) -> int:
    """(a, b)_v for nonzero rationals; ``place`` is a prime or ``math.inf``."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise PreconditionError("Hilbert symbol needs nonzero arguments")
    if place == math.inf or place == "inf":
        return -1 if (a < 0 and b < 0) else 1
    p = int(place)
    alpha, u = split_unit(a, p)
    beta, v = split_unit(b, p)
    if p == 2:
        eps = lambda w: ((w - 1) // 2) % 2
        omega = lambda w: ((w * w - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    e = (alpha * beta * ((p - 1) // 2)) % 2
    s = (-1) ** e
    if beta % 2:
        s *= legendre_symbol(u, p)
    if alpha % 2:
        s *= legendre_symbol(v, p)
    return s


def square_class(x, place) -> int:
    """Canonical integer representative of the square class of ``x`` at ``place``.

    At an odd prime: ``p^(v mod 2) * u`` with ``u`` in ``{1, nonresidue}``;
    at 2: ``2^(v mod 2) * (u mod 8)``; at infinity the sign.
    """
    x = Fraction(x)
    if place == math.inf:
        return 1 if x > 0 else -1
    p = int(place)
    v, u = split_unit(x, p)
    if p == 2:
        return 2 ** (v % 2) * (u % 8)
    unit = 1 if legendre_symbol(u, p) == 1 else _smallest_nonresidue(p)
    return p ** (v % 2) * unit


def _smallest_nonresidue(p: int) -> int:
    for u in range(2, p):
        if legendre_symbol(u, p) == -1:
            return u
    raise ValueError(p)


def all_vectors(ring: FiniteRing, n: int):
    """Every vector of ring^n in canonical (lexicographic) order."""
    return product(range(ring.size), repeat=n)
