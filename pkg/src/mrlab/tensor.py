"""(m, n, a, b) tensor codes C_col ⊗ C_row and erasure patterns on the m x n grid.

Codewords are m x n arrays whose rows lie in the (n, n-b) row code and whose
columns lie in the (m, m-a) column code.  Cell (i, j) (0-based) is flat index
``i * n + j``; the parity check is

    H = [ I_m ⊗ H_row ]
        [ H_col ⊗ D    ]

where D picks the lexicographically first information set of the row code
(the first n-b positions whenever the row code is MDS).  H has exactly
mb + na - ab rows and full row rank.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache

from mrlab.codes import CodeError, LinearCode, NotFound, is_mds
from mrlab.field import GENERIC_FIELD, FieldElement, FieldError, FieldSpec
from mrlab.linalg import (
    EchelonBasis,
    Matrix,
    _rank_rows,
    independent_columns,
    kernel,
    rank,
    rref,
    solve,
)

DEFAULT_TRIALS = 2


@dataclass(frozen=True)
class ErasurePattern:
    """Erased cells E of an m x n grid, 0-based (row, column) pairs."""

    m: int
    n: int
    cells: frozenset[tuple[int, int]] = dc_field(default_factory=frozenset)

    def __post_init__(self):
        cells = frozenset((int(i), int(j)) for i, j in self.cells)
        object.__setattr__(self, "cells", cells)
        if self.m < 1 or self.n < 1:
            raise ValueError("grid dimensions must be positive")
        for i, j in cells:
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise ValueError(f"cell ({i},{j}) outside a {self.m}x{self.n} grid")

    @classmethod
    def from_mask(cls, m: int, n: int, mask: int) -> ErasurePattern:
        """Bit i*n + j of ``mask`` marks cell (i, j)."""
        return cls(m, n, frozenset((b // n, b % n) for b in range(m * n) if mask >> b & 1))

    @classmethod
    def from_flat(cls, m: int, n: int, indices: Iterable[int]) -> ErasurePattern:
        return cls(m, n, frozenset(divmod(x, n) for x in indices))

    @classmethod
    def full(cls, m: int, n: int) -> ErasurePattern:
        return cls(m, n, frozenset(itertools.product(range(m), range(n))))

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell) -> bool:
        return tuple(cell) in self.cells

    @cached_property
    def mask(self) -> int:
        return sum(1 << (i * self.n + j) for i, j in self.cells)

    def flat(self) -> list[int]:
        return sorted(i * self.n + j for i, j in self.cells)

    def complement(self) -> ErasurePattern:
        return ErasurePattern(self.m, self.n, frozenset(itertools.product(range(self.m), range(self.n))) - self.cells)

    def transpose(self) -> ErasurePattern:
        return ErasurePattern(self.n, self.m, frozenset((j, i) for i, j in self.cells))

    def row_degrees(self) -> list[int]:
        deg = [0] * self.m
        for i, _ in self.cells:
            deg[i] += 1
        return deg

    def col_degrees(self) -> list[int]:
        deg = [0] * self.n
        for _, j in self.cells:
            deg[j] += 1
        return deg

    def row_sets(self) -> list[tuple[int, ...]]:
        """A_i: unerased positions of row i."""
        return [tuple(j for j in range(self.n) if (i, j) not in self.cells) for i in range(self.m)]

    def col_sets(self) -> list[tuple[int, ...]]:
        """B_j: unerased positions of column j."""
        return [tuple(i for i in range(self.m) if (i, j) not in self.cells) for j in range(self.n)]

    def row_masks(self) -> list[int]:
        """Bit j of entry i set when (i, j) is erased."""
        rows = [0] * self.m
        for i, j in self.cells:
            rows[i] |= 1 << j
        return rows


# ---------------------------------------------------------------------------
# structured parity check


def _information_set(H_row: Matrix) -> list[int]:
    """Lexicographically first n-b positions whose complement carries an invertible
    b x b block of H_row (an information set of ker H_row)."""
    b, n = H_row.shape
    # complement of the last-pivot selection: scan right to left for b independent columns
    chosen = independent_columns(H_row, range(n - 1, -1, -1))
    if len(chosen) != b:
        raise CodeError("row parity check does not have full row rank")
    drop = set(chosen)
    return [j for j in range(n) if j not in drop]


def structured_parity_check(H_col: Matrix, H_row: Matrix) -> Matrix:
    a, m = H_col.shape
    b, n = H_row.shape
    if H_col.field != H_row.field:
        raise FieldError("row and column codes live over different fields")
    F = H_row.field
    info = _information_set(H_row)
    rows: list[list[int]] = []
    for i in range(m):
        for r in range(b):
            row = [0] * (m * n)
            row[i * n:(i + 1) * n] = H_row.data[r]
            rows.append(row)
    for r in range(a):
        for j in info:
            row = [0] * (m * n)
            for i in range(m):
                row[i * n + j] = H_col.data[r][i]
            rows.append(row)
    return Matrix._wrap(F, rows, m * n)


class TensorCode:
    """C_col ⊗ C_row with its cached structured parity check."""

    def __init__(self, col_code: LinearCode, row_code: LinearCode):
        if col_code.field != row_code.field:
            raise FieldError("row and column codes live over different fields")
        self.col_code = col_code
        self.row_code = row_code
        self.m, self.n = col_code.n, row_code.n
        self.a, self.b = col_code.n - col_code.k, row_code.n - row_code.k

    @property
    def field(self) -> FieldSpec:
        return self.row_code.field

    @property
    def params(self) -> tuple[int, int, int, int]:
        return self.m, self.n, self.a, self.b

    @property
    def redundancy(self) -> int:
        return self.m * self.b + self.n * self.a - self.a * self.b

    @cached_property
    def parity_check(self) -> Matrix:
        return structured_parity_check(self.col_code.parity_check, self.row_code.parity_check)

    @cached_property
    def _columns(self) -> list[tuple[int, ...]]:
        H = self.parity_check
        return [H.column(x) for x in range(H.ncols)]

    def encode(self, message: Sequence[Sequence[int | FieldElement]]) -> list[list[int]]:
        """G_col^T · message · G_row for a (m-a) x (n-b) message."""
        F = self.field
        M = Matrix(F, message)
        if M.shape != (self.col_code.k, self.row_code.k):
            raise CodeError(f"message must be {self.col_code.k}x{self.row_code.k}")
        X = self.col_code.generator.T @ M @ self.row_code.generator
        return X.to_lists()

    def contains(self, grid: Sequence[Sequence[int]]) -> bool:
        flat = [x for row in grid for x in row]
        return not any(self.parity_check.apply(flat))

    def __repr__(self) -> str:
        return f"TensorCode(m={self.m}, n={self.n}, a={self.a}, b={self.b}, field={self.field})"


def build_tensor(col: LinearCode, row: LinearCode) -> TensorCode:
    T = TensorCode(col, row)
    if rank(T.parity_check) != T.redundancy:
        raise AssertionError("structured parity check lost rank")
    return T


def _check_dims(T: TensorCode, E: ErasurePattern) -> None:
    if (E.m, E.n) != (T.m, T.n):
        raise ValueError(f"pattern is {E.m}x{E.n} but the code is {T.m}x{T.n}")


def _independent(field: FieldSpec, columns: Sequence[Sequence[int]], indices: Sequence[int]) -> bool:
    if not indices:
        return True
    if len(indices) > len(columns[0]):
        return False
    return _rank_rows(field, [list(columns[x]) for x in indices], len(columns[0])) == len(indices)


def is_correctable(T: TensorCode, E: ErasurePattern) -> bool:
    """The parity-check columns at E are linearly independent."""
    _check_dims(T, E)
    if len(E) > T.redundancy:
        return False
    return _independent(T.field, T._columns, E.flat())


# ---------------------------------------------------------------------------
# decoding


class DecodeError(ValueError):
    pass


class UncorrectablePattern(DecodeError):
    """The erased positions cannot be recovered by this code."""


class InconsistentData(DecodeError):
    """The unerased symbols do not extend to any codeword."""


def decode_erasures(T: TensorCode, received: Sequence[Sequence[int | FieldElement | None]]) -> list[list[int]]:
    """Fill the ``None`` cells by solving H_E x_E = -H_Ē x_Ē."""
    if len(received) != T.m or any(len(r) != T.n for r in received):
        raise ValueError(f"received grid must be {T.m}x{T.n}")
    F = T.field
    erased = [i * T.n + j for i, row in enumerate(received) for j, x in enumerate(row) if x is None]
    E = ErasurePattern.from_flat(T.m, T.n, erased)
    if not is_correctable(T, E):
        raise UncorrectablePattern(f"{len(erased)} erasures are not correctable")
    flat = [0 if x is None else F.raw(x) for row in received for x in row]
    H = T.parity_check
    rhs = [F.neg(v) for v in H.apply(flat)]  # erased entries are zero in ``flat``
    x = solve(H.columns(erased), rhs)
    if x is None:
        raise InconsistentData("unerased symbols are not consistent with any codeword")
    for idx, val in zip(erased, x):
        flat[idx] = val
    return [flat[i * T.n:(i + 1) * T.n] for i in range(T.m)]


# ---------------------------------------------------------------------------
# generic correctability


@lru_cache(maxsize=256)
def _generic_instance(m: int, n: int, a: int, b: int, seed: int, trial: int) -> tuple[tuple[int, ...], ...]:
    rng = random.Random(f"tensor:{m}x{n}:{a}:{b}:{seed}:{trial}")
    H_row = Matrix.random(GENERIC_FIELD, b, n, rng)
    H_col = Matrix.random(GENERIC_FIELD, a, m, rng)
    H = structured_parity_check(H_col, H_row)
    return tuple(H.column(x) for x in range(m * n))


def _check_params(m: int, n: int, a: int, b: int) -> None:
    if not (1 <= a < m and 1 <= b < n):
        raise ValueError(f"need 1 <= a < m and 1 <= b < n, got m={m} n={n} a={a} b={b}")


def is_generically_correctable(E: ErasurePattern, m: int, n: int, a: int, b: int, trials: int = DEFAULT_TRIALS,
                               seed: int = 0) -> bool:
    """Correctable by a structured H with uniform entries over F_(2^61-1) in any of
    ``trials`` independent instances."""
    _check_params(m, n, a, b)
    if (E.m, E.n) != (m, n):
        raise ValueError("pattern dimensions do not match (m, n)")
    if len(E) > m * b + n * a - a * b:
        return False
    flat = E.flat()
    return any(_independent(GENERIC_FIELD, _generic_instance(m, n, a, b, seed, t), flat) for t in range(trials))


# ---------------------------------------------------------------------------
# MR verification


class _GenericPath:
    """Echelon bases of the generic instances for the current DFS prefix, built lazily."""

    def __init__(self, columns: list[tuple[tuple[int, ...], ...]]):
        self.columns = columns
        self.bases = [EchelonBasis(GENERIC_FIELD) for _ in columns]
        self.built = [0] * len(columns)

    def independent_with(self, prefix: Sequence[int], x: int) -> bool:
        """Whether prefix + [x] is independent in some generic instance.

        Callers must :meth:`truncate` whenever the prefix shrinks.
        """
        for t, cols in enumerate(self.columns):
            basis = self.bases[t]
            while self.built[t] < len(prefix):
                basis.push(cols[prefix[self.built[t]]])
                self.built[t] += 1
            if basis.push(cols[x]):
                basis.pop()
                return True
        return False

    def truncate(self, length: int) -> None:
        for t in range(len(self.columns)):
            while self.built[t] > length:
                self.bases[t].pop()
                self.built[t] -= 1


@dataclass(frozen=True)
class MRFailure:
    """A generically correctable pattern the code cannot correct; evaluates false."""

    pattern: ErasurePattern

    def __bool__(self) -> bool:
        return False


def verify_mr(T: TensorCode, trials: int = DEFAULT_TRIALS, seed: int = 0) -> bool | MRFailure:
    """True if T corrects every generically correctable pattern, else an
    :class:`MRFailure` holding the lexicographically first failing pattern of
    size mb + na - ab.

    Walks sorted cell sets whose H-columns are independent for T.  When adding
    cell x makes the set dependent while some generic instance keeps it
    independent, the set is completed greedily with cells > x to a generic
    basis; that basis is the first failing maximal pattern under this prefix.
    """
    m, n, a, b = T.params
    R = T.redundancy
    N = m * n
    F = T.field
    cols = T._columns
    gcols = [_generic_instance(m, n, a, b, seed, t) for t in range(trials)]
    generic = _GenericPath(gcols)
    basis = EchelonBasis(F)
    prefix: list[int] = []

    def complete(chosen: list[int], start: int) -> list[int] | None:
        for t, gc in enumerate(gcols):
            gb = EchelonBasis(GENERIC_FIELD)
            if not all(gb.push(gc[x]) for x in chosen):
                continue
            out = list(chosen)
            for y in range(start, N):
                if len(out) == R:
                    break
                if gb.push(gc[y]):
                    out.append(y)
            if len(out) == R:
                return out
        return None

    def dfs(start: int) -> list[int] | None:
        depth = len(prefix)
        if depth == R:
            return None
        for x in range(start, N):
            if depth + (N - x) < R:
                break
            if basis.push(cols[x]):
                prefix.append(x)
                found = dfs(x + 1)
                prefix.pop()
                basis.pop()
                generic.truncate(len(prefix))
                if found is not None:
                    return found
            elif generic.independent_with(prefix, x):
                found = complete(prefix + [x], x + 1)
                if found is not None:
                    return found
        return None

    failing = dfs(0)
    if failing is None:
        return True
    E = ErasurePattern.from_flat(m, n, failing)
    if is_correctable(T, E) or not is_generically_correctable(E, m, n, a, b, trials, seed):
        raise AssertionError("failing pattern did not re-verify")
    return MRFailure(E)


# ---------------------------------------------------------------------------
# minimal patterns and randomized search


def enumerate_minimal_patterns(m: int, n: int, a: int, b: int, capped: bool = False) -> Iterator[ErasurePattern]:
    """Nonempty patterns in which every nonempty row has at least b+1 cells and
    every nonempty column at least a+1.

    With ``capped`` only patterns with v <= b(u - a) nonempty columns (u rows)
    are produced; every minimal pattern that is generically correctable meets
    this bound, which is all the random search needs.
    """
    row_choices = {}
    for cols in range(b + 1, n + 1):
        for colset in itertools.combinations(range(n), cols):
            row_choices[colset] = [sum(1 << j for j in sub)
                                   for size in range(b + 1, len(colset) + 1)
                                   for sub in itertools.combinations(colset, size)]
    for u in range(a + 1, m + 1):
        for rows in itertools.combinations(range(m), u):
            vmax = n if not capped else min(n, b * (u - a))
            for v in range(b + 1, vmax + 1):
                for colset in itertools.combinations(range(n), v):
                    target = sum(1 << j for j in colset)
                    choices = row_choices[colset]
                    for masks in itertools.product(choices, repeat=u):
                        union = 0
                        for mk in masks:
                            union |= mk
                        if union != target:
                            continue
                        if any(sum(mk >> j & 1 for mk in masks) < a + 1 for j in colset):
                            continue
                        yield ErasurePattern(m, n, frozenset((i, j) for i, mk in zip(rows, masks)
                                                             for j in range(n) if mk >> j & 1))


@lru_cache(maxsize=32)
def _search_patterns(m: int, n: int, a: int, b: int, seed: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(E.flat()) for E in enumerate_minimal_patterns(m, n, a, b, capped=True)
                 if is_generically_correctable(E, m, n, a, b, seed=seed))


@dataclass(frozen=True)
class SearchResult:
    code: TensorCode
    attempts: int


def _code_from_parity(H: Matrix) -> LinearCode:
    return LinearCode(rref(kernel(H).T)[0])


def search_mr_random(m: int, n: int, a: int, b: int, field: FieldSpec, max_attempts: int,
                     seed: int | str = 0) -> SearchResult:
    """Sample H_row (b x n) and H_col (a x m) uniformly until both are MDS and
    every minimal, generically correctable pattern is corrected."""
    _check_params(m, n, a, b)
    rng = random.Random(seed)
    patterns = _search_patterns(m, n, a, b, 0)
    for attempt in range(1, max_attempts + 1):
        H_row = Matrix.random(field, b, n, rng)
        H_col = Matrix.random(field, a, m, rng)
        if not (is_mds(H_row) and is_mds(H_col)):
            continue
        T = TensorCode(_code_from_parity(H_col), _code_from_parity(H_row))
        cols = T._columns
        if all(_independent(field, cols, E) for E in patterns):
            return SearchResult(T, attempt)
    raise NotFound(f"no MR ({m},{n},{a},{b}) tensor code over {field} in {max_attempts} attempts")
