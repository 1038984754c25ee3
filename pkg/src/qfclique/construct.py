"""Explicit maximum cliques and a pairwise clique validator.

A clique containing 0 is ``{0, x_1, ..., x_k}`` with ``q(x_i) = a`` and
``b(x_i, x_j) = a``.  The ``x_i`` are found one at a time: each new vector lies
in the affine space cut out by the linear conditions ``b(x_j, x) = a`` and is
picked from that space in scan order; dead ends backtrack.  For ``a = 0`` the
same search with target 0 grows a maximal totally isotropic subspace, whose
points form the clique.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from qfclique import linalg
from qfclique.algebra import FiniteField, ResidueRing
from qfclique.cliques import check_scalar, classify_case
from qfclique.errors import InconsistencyError, PreconditionError
from qfclique.qform import QForm, Vector, evaluate, polar_matrix, scan_order

# give up on a search branch after this many affine-space candidates
DEFAULT_SCAN_LIMIT = 2_000_000


@dataclass(frozen=True)
class Clique:
    q: QForm
    a: int
    vertices: tuple[Vector, ...]
    k: int
    extra: bool

    @property
    def n(self) -> int:
        return self.q.n

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_lines(self) -> str:
        return "".join(",".join(str(c) for c in v) + "\n" for v in self.vertices)

    def to_json(self) -> str:
        return json.dumps([list(v) for v in self.vertices])


@dataclass(frozen=True)
class Validation:
    ok: bool
    witness: tuple[Vector, Vector] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_clique(q: QForm, a: int, vertices) -> Validation:
    """Check that all vertices are distinct and every difference represents a."""
    ring = q.ring
    vs = [tuple(int(c) for c in v) for v in vertices]
    for v in vs:
        if len(v) != q.n:
            raise PreconditionError(f"vertex {v} has length {len(v)}, expected {q.n}")
        for c in v:
            ring.check(c)
    for i, x in enumerate(vs):
        for y in vs[i + 1 :]:
            if x == y:
                return Validation(False, (x, y), "repeated vertex")
            if evaluate(q, linalg.vec_sub(ring, x, y)) != a:
                return Validation(False, (x, y), "difference does not represent the scalar")
    return Validation(True)


def parse_vertices(text: str) -> list[Vector]:
    """Inverse of :meth:`Clique.to_lines`; also accepts the JSON form."""
    text = text.strip()
    if text.startswith("["):
        return [tuple(int(c) for c in v) for v in json.loads(text)]
    return [tuple(int(c) for c in line.split(",")) for line in text.splitlines() if line.strip()]


def _residue_rank(q: QForm, vectors) -> int:
    ring = q.ring
    if isinstance(ring, ResidueRing):
        return linalg.rank(ring.residue_field, [[ring.residue(c) for c in v] for v in vectors])
    return linalg.rank(ring, vectors)


def extend_gram(q: QForm, target: int, k: int, scan_limit: int = DEFAULT_SCAN_LIMIT) -> list[Vector] | None:
    """k independent vectors with ``q(x_i) = target`` and ``b(x_i, x_j) = target``.

    Depth-first extension in scan order; returns ``None`` if none exist
    within the scan limit.
    """
    ring = q.ring
    n = q.n
    B = [list(r) for r in polar_matrix(q)]
    budget = [scan_limit]

    def candidates(chosen: list[Vector]):
        if not chosen:
            yield from scan_order(ring, n)
            return
        rows = [linalg.matvec(ring, B, x) for x in chosen]  # B symmetric
        sol = linalg.solve_affine(ring, rows, [target] * len(chosen))
        if sol is None:
            return
        x0, kernel = sol
        for coeffs in product(range(ring.size), repeat=len(kernel)):
            x = x0
            for c, v in zip(coeffs, kernel):
                if c:
                    x = linalg.vec_add(ring, x, linalg.vec_scale(ring, c, v))
            yield x

    def grow(chosen: list[Vector]) -> list[Vector] | None:
        if len(chosen) == k:
            return chosen
        for x in candidates(chosen):
            budget[0] -= 1
            if budget[0] < 0:
                return None
            if evaluate(q, x) != target or not any(x):
                continue
            if _residue_rank(q, chosen + [x]) != len(chosen) + 1:
                continue
            found = grow(chosen + [x])
            if found is not None:
                return found
        return None

    return grow([])


def isotropic_clique(q: QForm, scan_limit: int = DEFAULT_SCAN_LIMIT) -> Clique:
    """All points of a maximal totally isotropic subspace (field only)."""
    ring = q.ring
    if not isinstance(ring, FiniteField):
        raise PreconditionError(f"isotropic cliques need a finite field, got {ring}")
    case = classify_case(q, 0)
    basis = extend_gram(q, 0, case.witt_index, scan_limit)
    if basis is None:
        raise InconsistencyError(f"no totally isotropic subspace of dimension {case.witt_index} found for {q}")
    points = []
    for coeffs in scan_order(ring, len(basis)):
        x = (0,) * q.n
        for c, v in zip(coeffs, basis):
            if c:
                x = linalg.vec_add(ring, x, linalg.vec_scale(ring, c, v))
        points.append(x)
    return Clique(q, 0, tuple(points), len(basis), False)


def construct_max_clique(q: QForm, a: int, scan_limit: int = DEFAULT_SCAN_LIMIT) -> Clique:
    """An explicit clique of size clique_number(q, a), validated before return."""
    check_scalar(q.ring, a)
    if a == 0:
        clique = isotropic_clique(q, scan_limit)
    else:
        case = classify_case(q, a)
        xs = extend_gram(q, a, case.k, scan_limit)
        if xs is None:
            raise InconsistencyError(f"no realisation of gamma_{{a,{case.k}}} found in {q} over {q.ring}")
        vertices = [(0,) * q.n] + xs
        if case.extra:
            total = (0,) * q.n
            for x in xs:
                total = linalg.vec_add(q.ring, total, x)
            vertices.append(linalg.vec_neg(q.ring, total))
        clique = Clique(q, a, tuple(vertices), case.k, case.extra)
        if clique.size != case.omega:
            raise InconsistencyError(f"constructed {clique.size} vertices, expected {case.omega}")
    check = validate_clique(q, a, clique.vertices)
    if not check:
        raise InconsistencyError(f"constructed clique fails validation at {check.witness}")
    return clique
