"""Dense exact linear algebra over a :class:`~mrlab.field.FieldSpec`.

Matrices hold raw field codes (see :mod:`mrlab.field`) in row-major tuples.
All routines are deterministic; pivots are always the leftmost/first nonzero
entry so that selected column subsets are reproducible.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from mrlab.field import GENERIC_FIELD, FieldElement, FieldError, FieldSpec

DEFAULT_TRIALS = 2


class Matrix:
    """Immutable dense matrix over a finite field."""

    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field: FieldSpec, rows: Iterable[Sequence[int | FieldElement]], ncols: int | None = None):
        data = tuple(tuple(field.raw(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged matrix rows")
        self.field = field
        self.nrows = len(data)
        self.ncols = ncols
        self.data = data

    @classmethod
    def _wrap(cls, field: FieldSpec, data: Sequence[Sequence[int]], ncols: int) -> Matrix:
        m = object.__new__(cls)
        m.field = field
        m.data = tuple(tuple(r) for r in data)
        m.nrows = len(m.data)
        m.ncols = ncols
        return m

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> Matrix:
        return cls._wrap(field, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> Matrix:
        return cls._wrap(field, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def random(cls, field: FieldSpec, nrows: int, ncols: int, rng: random.Random) -> Matrix:
        q = field.order
        return cls._wrap(field, [[rng.randrange(q) for _ in range(ncols)] for _ in range(nrows)], ncols)

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence[int | FieldElement]], nrows: int | None = None) -> Matrix:
        if nrows is None:
            nrows = len(columns[0]) if columns else 0
        cols = [[field.raw(x) for x in c] for c in columns]
        return cls._wrap(field, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx: tuple[int, int]) -> FieldElement:
        i, j = idx
        return FieldElement(self.field, self.data[i][j])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.data)

    def columns(self, idx: Iterable[int]) -> Matrix:
        idx = list(idx)
        for j in idx:
            if not 0 <= j < self.ncols:
                raise IndexError(f"column {j} out of range for {self.ncols} columns")
        return Matrix._wrap(self.field, [[row[j] for j in idx] for row in self.data], len(idx))

    def rows_(self, idx: Iterable[int]) -> Matrix:
        return Matrix._wrap(self.field, [self.data[i] for i in idx], self.ncols)

    @property
    def T(self) -> Matrix:
        return Matrix._wrap(self.field, [list(c) for c in zip(*self.data)] if self.nrows else [[] for _ in range(self.ncols)], self.nrows)

    def __matmul__(self, other: Matrix) -> Matrix:
        if other.field != self.field:
            raise FieldError("matrix fields differ")
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        cols = list(zip(*other.data)) if other.nrows else [() for _ in range(other.ncols)]
        out = [[_dot(F, row, c) for c in cols] for row in self.data]
        return Matrix._wrap(F, out, other.ncols)

    def apply(self, vector: Sequence[int]) -> list[int]:
        """Matrix-vector product on raw codes."""
        if len(vector) != self.ncols:
            raise ValueError("vector length does not match column count")
        return [_dot(self.field, row, vector) for row in self.data]

    def hstack(self, other: Matrix) -> Matrix:
        if other.nrows != self.nrows:
            raise ValueError("row counts differ")
        return Matrix._wrap(self.field, [a + b for a, b in zip(self.data, other.data)], self.ncols + other.ncols)

    def vstack(self, other: Matrix) -> Matrix:
        if other.ncols != self.ncols:
            raise ValueError("column counts differ")
        return Matrix._wrap(self.field, self.data + other.data, self.ncols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.field, self.ncols, self.data))

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols} over {self.field})"


def _dot(F: FieldSpec, u: Sequence[int], v: Sequence[int]) -> int:
    if F.is_prime:
        return sum(a * b for a, b in zip(u, v)) % F.p
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# elimination kernels


def _rank_rows(F: FieldSpec, rows: list[list[int]], ncols: int) -> int:
    """Fraction-free forward elimination; pivot = first nonzero entry in column."""
    rows = [r[:] for r in rows]
    m = len(rows)
    prow = 0
    p = F.p
    prime = F.is_prime
    for col in range(ncols):
        if prow == m:
            break
        for r in range(prow, m):
            if rows[r][col]:
                break
        else:
            continue
        rows[prow], rows[r] = rows[r], rows[prow]
        piv_row = rows[prow]
        piv = piv_row[col]
        for r in range(prow + 1, m):
            f = rows[r][col]
            if f:
                row = rows[r]
                if prime:
                    rows[r] = [(piv * x - f * y) % p for x, y in zip(row, piv_row)]
                else:
                    rows[r] = [F.sub(F.mul(piv, x), F.mul(f, y)) for x, y in zip(row, piv_row)]
        prow += 1
    return prow


def _rref(F: FieldSpec, rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form with normalised pivots.  Returns (rows, pivot columns)."""
    rows = [r[:] for r in rows]
    m = len(rows)
    pivots: list[int] = []
    prow = 0
    p = F.p
    prime = F.is_prime
    for col in range(ncols):
        if prow == m:
            break
        for r in range(prow, m):
            if rows[r][col]:
                break
        else:
            continue
        rows[prow], rows[r] = rows[r], rows[prow]
        inv = F.inv(rows[prow][col])
        if prime:
            piv_row = [x * inv % p for x in rows[prow]]
        else:
            piv_row = [F.mul(x, inv) for x in rows[prow]]
        rows[prow] = piv_row
        for r in range(m):
            if r != prow:
                f = rows[r][col]
                if f:
                    if prime:
                        rows[r] = [(x - f * y) % p for x, y in zip(rows[r], piv_row)]
                    else:
                        rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], piv_row)]
        pivots.append(col)
        prow += 1
    return rows[:prow], pivots


def rank(M: Matrix) -> int:
    return _rank_rows(M.field, [list(r) for r in M.data], M.ncols)


def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    rows, pivots = _rref(M.field, [list(r) for r in M.data], M.ncols)
    return Matrix._wrap(M.field, rows, M.ncols), pivots


def _kernel_vectors(F: FieldSpec, rows: list[list[int]], ncols: int) -> list[list[int]]:
    red, pivots = _rref(F, rows, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for r, pc in zip(red, pivots):
            if r[free]:
                v[pc] = F.neg(r[free])
        basis.append(v)
    return basis


def kernel(M: Matrix) -> Matrix:
    """Columns of the result form a basis of {x : Mx = 0}."""
    basis = _kernel_vectors(M.field, [list(r) for r in M.data], M.ncols)
    return Matrix._wrap(M.field, [[v[i] for v in basis] for i in range(M.ncols)], len(basis))


def solve(M: Matrix, b: Sequence[int | FieldElement]) -> list[int] | None:
    """Some x with Mx = b (raw codes), or None when the system is inconsistent."""
    F = M.field
    if len(b) != M.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {M.nrows}")
    aug = [list(row) + [F.raw(bi)] for row, bi in zip(M.data, b)]
    red, pivots = _rref(F, aug, M.ncols + 1)
    if pivots and pivots[-1] == M.ncols:
        return None
    x = [0] * M.ncols
    for r, pc in zip(red, pivots):
        x[pc] = r[M.ncols]
    return x


def kronecker(A: Matrix, B: Matrix) -> Matrix:
    if A.field != B.field:
        raise FieldError("kronecker factors live over different fields")
    F = A.field
    out = []
    for arow in A.data:
        for brow in B.data:
            out.append([F.mul(x, y) for x in arow for y in brow])
    return Matrix._wrap(F, out, A.ncols * B.ncols)


def independent_columns(M: Matrix, idx: Iterable[int]) -> list[int]:
    """Leftmost-pivot maximal independent subset of the columns in ``idx``."""
    idx = list(idx)
    if not idx:
        return []
    sub = M.columns(idx)
    _, pivots = _rref(M.field, [list(r) for r in sub.data], sub.ncols)
    return [idx[c] for c in pivots]


def annihilator(M: Matrix, idx: Iterable[int]) -> list[list[int]]:
    """Basis of {y : y^T M_idx = 0}, the defining equations of the span of columns idx."""
    idx = list(idx)
    F = M.field
    if not idx:
        return [[int(i == j) for j in range(M.nrows)] for i in range(M.nrows)]
    rows = [[M.data[i][j] for i in range(M.nrows)] for j in idx]
    return _kernel_vectors(F, rows, M.nrows)


def span_dim(field: FieldSpec, vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    return _rank_rows(field, [list(v) for v in vectors], len(vectors[0]))


def span_intersection(field: FieldSpec, U: Sequence[Sequence[int]], V: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Basis of span(U) ∩ span(V) inside F^dim, via the stacked-equation kernel."""
    eqs: list[list[int]] = []
    for vecs in (U, V):
        if vecs:
            eqs.extend(_kernel_vectors(field, [list(v) for v in vecs], dim))
        else:
            return []
    if not eqs:
        return [[int(i == j) for j in range(dim)] for i in range(dim)]
    return _kernel_vectors(field, eqs, dim)


# ---------------------------------------------------------------------------
# set families and the intersection formula


@dataclass(frozen=True)
class SetFamily:
    """Ordered subsets A_1..A_l of the 0-based ground set {0..n-1}."""

    n: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        norm = tuple(tuple(sorted(set(s))) for s in self.sets)
        object.__setattr__(self, "sets", norm)
        if not norm:
            raise ValueError("a set family needs at least one set")
        for s in norm:
            if s and (s[0] < 0 or s[-1] >= self.n):
                raise IndexError(f"set {s} not inside ground set of size {self.n}")

    @classmethod
    def from_one_based(cls, n: int, sets: Iterable[Iterable[int]]) -> SetFamily:
        return cls(n, tuple(tuple(j - 1 for j in s) for s in sets))

    def one_based(self) -> list[list[int]]:
        return [[j + 1 for j in s] for s in self.sets]

    @property
    def ell(self) -> int:
        return len(self.sets)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)

    def common(self) -> set[int]:
        out = set(self.sets[0])
        for s in self.sets[1:]:
            out &= set(s)
        return out

    def __iter__(self):
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)


def block_matrix(V: Matrix, family: SetFamily) -> tuple[Matrix, int]:
    """The (l-1)k-row block matrix [[V_A1 V_A2 0 ..], [V_A1 0 V_A3 ..], ..] after
    dropping redundant columns of each V_Ai.  Returns (matrix, sum of dims)."""
    k = V.nrows
    reduced = [independent_columns(V, s) for s in family.sets]
    widths = [len(r) for r in reduced]
    total = sum(widths)
    ell = len(reduced)
    cols_of = [V.columns(r).data for r in reduced]
    rows = []
    offsets = [sum(widths[:i]) for i in range(ell)]
    for blk in range(ell - 1):
        target = blk + 1
        for i in range(k):
            row = [0] * total
            row[offsets[0]:offsets[0] + widths[0]] = cols_of[0][i]
            row[offsets[target]:offsets[target] + widths[target]] = cols_of[target][i]
            rows.append(row)
    return Matrix._wrap(V.field, rows, total), total


def intersection_dim(V: Matrix, family: SetFamily) -> int:
    """dim(V_A1 ∩ ... ∩ V_Al) as the sum of span dimensions minus the rank of the
    block matrix.  A single set gives dim V_A1."""
    if family.n != V.ncols:
        raise ValueError(f"family ground set {family.n} != matrix columns {V.ncols}")
    if family.ell == 1:
        return len(independent_columns(V, family.sets[0]))
    M, total = block_matrix(V, family)
    return total - rank(M)


@lru_cache(maxsize=4096)
def generic_matrix(nrows: int, ncols: int, seed: int = 0, trial: int = 0) -> Matrix:
    """Uniform matrix over F_(2^61-1), reproducible from (shape, seed, trial)."""
    rng = random.Random(f"generic:{nrows}x{ncols}:{seed}:{trial}")
    return Matrix.random(GENERIC_FIELD, nrows, ncols, rng)


def generic_intersection_dim(k: int, n: int, family: SetFamily, trials: int = DEFAULT_TRIALS, seed: int = 0) -> int:
    """Intersection dimension for a generic k x n matrix: the minimum over
    ``trials`` independent instantiations over F_(2^61-1)."""
    if family.n != n:
        raise ValueError("family ground set does not match n")
    if trials < 1:
        raise ValueError("trials must be positive")
    return min(intersection_dim(generic_matrix(k, n, seed, t), family) for t in range(trials))


def _basis_vectors(field: FieldSpec, space: Matrix | Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    if isinstance(space, Matrix):
        if space.field != field:
            raise FieldError("subspace basis over a different field")
        if space.nrows != dim and space.ncols:
            raise ValueError(f"basis vectors have length {space.nrows}, expected {dim}")
        return [list(space.column(j)) for j in range(space.ncols)]
    vecs = [[field.raw(x) for x in v] for v in space]
    if any(len(v) != dim for v in vecs):
        raise ValueError(f"basis vectors must have length {dim}")
    return vecs


def tensor_span_dim(field: FieldSpec, terms, dims: tuple[int, int]) -> int:
    """dim of sum_i span_i1 ⊗ span_i2, by stacking Kronecker products of basis vectors."""
    d1, d2 = dims
    vectors = []
    for left, right in terms:
        L = _basis_vectors(field, left, d1)
        R = _basis_vectors(field, right, d2)
        for u in L:
            for v in R:
                vectors.append([field.mul(x, y) for x in u for y in v])
    if not vectors:
        return 0
    return _rank_rows(field, vectors, d1 * d2)


def tensor_span_full(field: FieldSpec, terms, dims: tuple[int, int]) -> bool:
    """True iff the spans of the terms' Kronecker products fill F^d1 ⊗ F^d2."""
    return tensor_span_dim(field, terms, dims) == dims[0] * dims[1]


# ---------------------------------------------------------------------------
# incremental echelon basis


class EchelonBasis:
    """Basis kept in echelon form so vectors can be pushed/popped in DFS order.

    Each stored vector has a normalised pivot and zeros at the pivots of all
    earlier vectors, so reducing a candidate is a single pass.
    """

    __slots__ = ("field", "vectors", "pivots")

    def __init__(self, field: FieldSpec):
        self.field = field
        self.vectors: list[list[int]] = []
        self.pivots: list[int] = []

    def __len__(self) -> int:
        return len(self.vectors)

    def reduce(self, v: Sequence[int]) -> list[int]:
        F = self.field
        v = list(v)
        if F.is_prime:
            p = F.p
            for piv, b in zip(self.pivots, self.vectors):
                c = v[piv]
                if c:
                    v = [(x - c * y) % p for x, y in zip(v, b)]
        else:
            for piv, b in zip(self.pivots, self.vectors):
                c = v[piv]
                if c:
                    v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, b)]
        return v

    def push(self, v: Sequence[int]) -> bool:
        """Add v if independent; returns whether it was added."""
        r = self.reduce(v)
        for piv, x in enumerate(r):
            if x:
                break
        else:
            return False
        F = self.field
        inv = F.inv(r[piv])
        if F.is_prime:
            r = [y * inv % F.p for y in r]
        else:
            r = [F.mul(y, inv) for y in r]
        self.vectors.append(r)
        self.pivots.append(piv)
        return True

    def pop(self) -> None:
        self.vectors.pop()
        self.pivots.pop()

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))
