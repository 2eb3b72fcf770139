"""Explicit near-MDS(3) vector families over F_{p^2}, with exhaustive verifiers.

Bipartite family: u_a = (a, -1, 0), v_b = (b + b^2 X, 0, -1) for a, b in F_p,
and planes W_{a,b} = span(u_a, v_b).  Three distinct planes meet nontrivially
exactly when their a's all agree or their b's all agree.

Tripartite family: Reed-Solomon points (1, x, x^2) with x drawn from S,
zeta * S' and X * {1..(p-1)/2}, where S is the subgroup of cubes in F_p^*.
Any two planes, one spanned inside each part, meet only in 0.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

from mrlab.codes import mds_violation
from mrlab.field import FieldSpec, find_cube_root_of_unity, make_quadratic_extension, smallest_nonresidue
from mrlab.linalg import Matrix, annihilator, rank

Vector = tuple[int, int, int]


class ConstructionError(ValueError):
    """The requested family cannot be built for this prime."""


def _extension(p: int) -> tuple[FieldSpec, int]:
    if p == 2:
        raise ConstructionError("p = 2 has no quadratic non-residue")
    c = smallest_nonresidue(p)
    return make_quadratic_extension(p, c), c


def _plane_normal(F: FieldSpec, x: Sequence[int], y: Sequence[int]) -> list[int]:
    M = Matrix._wrap(F, [list(r) for r in zip(x, y)], 2)
    normals = annihilator(M, [0, 1])
    if len(normals) != 1:
        raise ConstructionError(f"vectors {x} and {y} do not span a plane")
    return normals[0]


def _normals_dependent(F: FieldSpec, normals: Sequence[Sequence[int]]) -> bool:
    """Three planes share a nonzero vector iff their normals are dependent."""
    return rank(Matrix._wrap(F, [list(n) for n in normals], 3)) < 3


# ---------------------------------------------------------------------------
# bipartite


@dataclass(frozen=True)
class BipartiteFamily:
    field: FieldSpec
    p: int
    c: int
    u: tuple[Vector, ...]
    v: tuple[Vector, ...]

    def plane(self, alpha: int, beta: int) -> Matrix:
        """3 x 2 matrix with columns u_alpha, v_beta."""
        return Matrix.from_columns(self.field, [self.u[alpha], self.v[beta]])

    def u_matrix(self) -> Matrix:
        return Matrix.from_columns(self.field, self.u)

    def v_matrix(self) -> Matrix:
        return Matrix.from_columns(self.field, self.v)

    def matrix(self) -> Matrix:
        """All u's followed by all v's, as columns."""
        return Matrix.from_columns(self.field, self.u + self.v)


@dataclass(frozen=True)
class BipartiteViolation:
    """Three planes W_{a,b} (given as (a, b) pairs) meeting nontrivially without
    sharing all a's or all b's; evaluates false."""

    pairs: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]

    def __bool__(self) -> bool:
        return False


def build_bipartite(p: int) -> BipartiteFamily:
    F, c = _extension(p)
    X = F.generator_X()
    minus_one = F.neg(1)
    u = tuple((a, minus_one, 0) for a in range(p))
    v = tuple((F.add(b, F.mul(b * b % p, X)), 0, minus_one) for b in range(p))
    return BipartiteFamily(F, p, c, u, v)


def is_degenerate_triple(pairs: Sequence[tuple[int, int]]) -> bool:
    """Planes that meet for any choice of u's and v's: equal a's, equal b's, or a repeated pair."""
    alphas = {a for a, _ in pairs}
    betas = {b for _, b in pairs}
    return len(alphas) == 1 or len(betas) == 1 or len(set(pairs)) < len(pairs)


def verify_bipartite(family: BipartiteFamily) -> bool | BipartiteViolation:
    """Every triple of distinct planes with a nonzero common vector must be degenerate."""
    F, p = family.field, family.p
    normals = {}
    for a in range(p):
        for b in range(p):
            normals[a, b] = _plane_normal(F, family.u[a], family.v[b])
    for triple in itertools.combinations(sorted(normals), 3):
        if is_degenerate_triple(triple):
            continue
        if _normals_dependent(F, [normals[t] for t in triple]):
            return BipartiteViolation(triple)
    return True


# ---------------------------------------------------------------------------
# tripartite


@dataclass(frozen=True)
class TripartiteFamily:
    """``coset`` is 1 when the cube subgroup avoids zeta.  Otherwise it is the
    smallest non-cube t, and the V points use t * S in place of S."""

    field: FieldSpec
    p: int
    c: int
    zeta: int
    subgroup: tuple[int, ...]
    coset: int
    U: tuple[Vector, ...]
    V: tuple[Vector, ...]
    W: tuple[Vector, ...]

    def matrix(self) -> Matrix:
        """U, V, W concatenated, as columns."""
        return Matrix.from_columns(self.field, self.U + self.V + self.W)


@dataclass(frozen=True)
class TripartiteViolation:
    """Index pairs into U, V, W of planes that meet nontrivially, or the
    columns of U + V + W found dependent; evaluates false."""

    u: tuple[int, int] | None = None
    v: tuple[int, int] | None = None
    w: tuple[int, int] | None = None
    dependent: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return False


def _rs_point(F: FieldSpec, x: int) -> Vector:
    return (1, x, F.mul(x, x))


def build_tripartite(p: int, strict: bool = False) -> TripartiteFamily:
    """Family for p = 1 mod 3.  When 9 divides p - 1 the cube subgroup contains
    zeta; ``strict`` then raises, and otherwise V is built from a non-cube coset."""
    if p % 3 != 1:
        raise ConstructionError(f"need p = 1 mod 3, got p={p}")
    F, c = _extension(p)
    zeta = int(find_cube_root_of_unity(make_quadratic_extension(p, c)))
    cubes = sorted({pow(x, 3, p) for x in range(1, p)})
    t = 1
    if zeta in cubes:
        if strict:
            raise ConstructionError(f"the index-3 subgroup of F_{p}^* contains the cube root of unity {zeta}")
        t = next(x for x in range(2, p) if x not in cubes)
    X = F.generator_X()
    U = tuple(_rs_point(F, a) for a in cubes)
    V = tuple(_rs_point(F, zeta * t * b % p) for b in cubes)
    W = tuple(_rs_point(F, F.mul(g, X)) for g in range(1, (p - 1) // 2 + 1))
    return TripartiteFamily(F, p, c, zeta, tuple(cubes), t, U, V, W)


def verify_tripartite(family: TripartiteFamily) -> bool | TripartiteViolation:
    """All span(u1,u2) ∩ span(v1,v2) ∩ span(w1,w2) are zero, and U ∪ V ∪ W is MDS."""
    F = family.field
    parts = (family.U, family.V, family.W)
    normals = [
        {pair: _plane_normal(F, part[pair[0]], part[pair[1]]) for pair in itertools.combinations(range(len(part)), 2)}
        for part in parts
    ]
    for pu, nu in normals[0].items():
        for pv, nv in normals[1].items():
            for pw, nw in normals[2].items():
                if _normals_dependent(F, [nu, nv, nw]):
                    return TripartiteViolation(pu, pv, pw)
    dependent = mds_violation(family.matrix())
    if dependent is not None:
        return TripartiteViolation(dependent=dependent)
    return True
