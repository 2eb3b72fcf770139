"""(n, k) linear codes given by a full-row-rank generator matrix.

Positions are 0-based in this API; the file formats and CLI are 1-based.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from functools import cached_property

from mrlab.field import FieldElement, FieldSpec
from mrlab.linalg import EchelonBasis, Matrix, kernel, rank, rref


class CodeError(ValueError):
    """Invalid code parameters or a degenerate generator."""


class LinearCode:
    """Row space of a k x n generator with rank k and 1 <= k < n."""

    def __init__(self, generator: Matrix):
        k, n = generator.shape
        if not 1 <= k < n:
            raise CodeError(f"need 1 <= k < n, got k={k} n={n}")
        if rank(generator) != k:
            raise CodeError("generator matrix does not have full row rank")
        self.generator = generator

    @property
    def field(self) -> FieldSpec:
        return self.generator.field

    @property
    def n(self) -> int:
        return self.generator.ncols

    @property
    def k(self) -> int:
        return self.generator.nrows

    @cached_property
    def parity_check(self) -> Matrix:
        """(n-k) x n matrix H with H G^T = 0, in reduced row echelon form."""
        return rref(kernel(self.generator).T)[0]

    def encode(self, message: Sequence[int | FieldElement]) -> list[int]:
        if len(message) != self.k:
            raise CodeError(f"message length {len(message)} != k={self.k}")
        F = self.field
        msg = [F.raw(x) for x in message]
        return self.generator.T.apply(msg)

    def contains(self, word: Sequence[int | FieldElement]) -> bool:
        F = self.field
        return not any(self.parity_check.apply([F.raw(x) for x in word]))

    def same_code(self, other: LinearCode) -> bool:
        """Row-space equality."""
        if other.field != self.field or other.n != self.n or other.k != self.k:
            return False
        return rank(self.generator.vstack(other.generator)) == self.k

    def __getstate__(self):
        return {"generator": self.generator}

    def __repr__(self) -> str:
        return f"LinearCode(n={self.n}, k={self.k}, field={self.field})"


def reed_solomon(field: FieldSpec, n: int, k: int, evals: Sequence[int | FieldElement] | None = None) -> LinearCode:
    """Vandermonde generator with columns (1, a, ..., a^(k-1)); evals default to 0..n-1."""
    if n > field.order:
        raise CodeError(f"n={n} exceeds the field size {field.order}")
    pts = [field.raw(x) for x in evals] if evals is not None else list(range(n))
    if len(pts) != n:
        raise CodeError(f"need {n} evaluation points, got {len(pts)}")
    if len(set(pts)) != n:
        raise CodeError("evaluation points must be distinct")
    rows = [[field.power(a, r) for a in pts] for r in range(k)]
    return LinearCode(Matrix._wrap(field, rows, n))


def parity_code(field: FieldSpec, n: int) -> LinearCode:
    """The (n, n-1) single-parity code, dual to the all-ones (n, 1) code."""
    if n < 2:
        raise CodeError("parity code needs n >= 2")
    minus_one = field.neg(1)
    rows = [[int(i == j) for j in range(n - 1)] + [minus_one] for i in range(n - 1)]
    return LinearCode(Matrix._wrap(field, rows, n))


def dual(code: LinearCode) -> LinearCode:
    return LinearCode(code.parity_check)


def puncture(code: LinearCode, position: int) -> LinearCode:
    """Drop coordinate ``position``."""
    if code.n < code.k + 2:
        raise CodeError("puncturing would leave k >= n")
    _check_position(code, position)
    keep = [j for j in range(code.n) if j != position]
    G = code.generator.columns(keep)
    if rank(G) != code.k:
        raise CodeError(f"puncturing at {position} drops the rank")
    return LinearCode(G)


def shorten(code: LinearCode, position: int) -> LinearCode:
    """Codewords vanishing at ``position``, with that coordinate removed.

    The first generator row with a nonzero entry at ``position`` becomes the
    pivot; it clears that column from every other row and is then discarded.
    """
    _check_position(code, position)
    if code.k < 2:
        raise CodeError("shortening needs k >= 2")
    F = code.field
    rows = code.generator.to_lists()
    pivot = next((r for r, row in enumerate(rows) if row[position]), None)
    if pivot is None:
        raise CodeError(f"column {position} is zero")
    prow = rows[pivot]
    inv = F.inv(prow[position])
    out = []
    for r, row in enumerate(rows):
        if r == pivot:
            continue
        f = F.mul(row[position], inv)
        if f:
            row = [F.sub(x, F.mul(f, y)) for x, y in zip(row, prow)]
        out.append([x for j, x in enumerate(row) if j != position])
    return LinearCode(Matrix._wrap(F, out, code.n - 1))


def _check_position(code: LinearCode, position: int) -> None:
    if not 0 <= position < code.n:
        raise IndexError(f"position {position} outside 0..{code.n - 1}")


def mds_violation(code: LinearCode | Matrix) -> tuple[int, ...] | None:
    """First (lexicographic DFS) dependent column set of size <= k, or None if MDS.

    For a raw matrix, k is its row count; a matrix whose rows are dependent is
    never MDS.
    """
    G = code.generator if isinstance(code, LinearCode) else code
    k, n = G.shape
    target = min(k, n)
    if rank(G) < target:
        return tuple(range(n)) if n <= k else _first_dependent(G, k)
    return _first_dependent(G, target)


def _first_dependent(G: Matrix, size: int) -> tuple[int, ...] | None:
    cols = [G.column(j) for j in range(G.ncols)]
    basis = EchelonBasis(G.field)
    chosen: list[int] = []

    def dfs(start: int) -> tuple[int, ...] | None:
        if len(chosen) == size:
            return None
        for j in range(start, G.ncols):
            if G.ncols - j < size - len(chosen):
                break
            if not basis.push(cols[j]):
                return (*chosen, j)
            chosen.append(j)
            found = dfs(j + 1)
            chosen.pop()
            basis.pop()
            if found is not None:
                return found
        return None

    return dfs(0)


def is_mds(code: LinearCode | Matrix) -> bool:
    """Every k columns independent (all k x k minors nonzero)."""
    return mds_violation(code) is None


def random_code(field: FieldSpec, n: int, k: int, seed: int | str = 0) -> LinearCode:
    """Uniform k x n generator, resampled until it has full row rank."""
    if not 1 <= k < n:
        raise CodeError(f"need 1 <= k < n, got k={k} n={n}")
    rng = random.Random(seed)
    while True:
        G = Matrix.random(field, k, n, rng)
        if rank(G) == k:
            return LinearCode(G)


class NotFound(Exception):
    """A randomized search exhausted its budget."""
