"""Deciders for higher-order MDS properties of a code's generator columns.

For a k x n generator V and subsets A_1..A_l of the positions, the code is
MDS(l) when every intersection of column spans V_A1 ∩ ... ∩ V_Al has the
dimension a generic k x n matrix would give.  The deciders below enumerate
set families depth-first, intersecting one span at a time and pruning as
soon as the running intersection is zero.  Generic dimensions always come
from :func:`mrlab.linalg.generic_intersection_dim` (or the same random
instances), and every returned witness is re-checked with the block-matrix
formula before it leaves this module.
"""

from __future__ import annotations

import itertools
from operator import mul
import os
import random
from bisect import bisect_left
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from mrlab.codes import LinearCode, NotFound, mds_violation
from mrlab.linalg import (
    DEFAULT_TRIALS,
    Matrix,
    SetFamily,
    _kernel_vectors,
    _rank_rows,
    annihilator,
    generic_intersection_dim,
    generic_matrix,
    intersection_dim,
)


@dataclass(frozen=True)
class MdsWitness:
    """A family whose span intersection differs from the generic one.

    Evaluates false so ``if not is_mds_ell(...)`` reads naturally.
    """

    family: SetFamily
    actual_dim: int
    generic_dim: int

    def __post_init__(self):
        if self.actual_dim == self.generic_dim:
            raise ValueError("a witness needs actual_dim != generic_dim")

    def __bool__(self) -> bool:
        return False


def _workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    try:
        return max(1, int(os.environ.get("MRLAB_THREADS", "1")))
    except ValueError:
        return 1


class _SpanMeet:
    """Intersects a running subspace of F^k with column spans of one matrix."""

    def __init__(self, V: Matrix):
        self.V = V
        self.field = V.field
        self.k = V.nrows
        self._ann: dict[tuple[int, ...], list[list[int]]] = {}

    def full(self) -> list[list[int]]:
        k = self.k
        return [[int(i == j) for j in range(k)] for i in range(k)]

    def equations(self, subset: tuple[int, ...]) -> list[list[int]]:
        eq = self._ann.get(subset)
        if eq is None:
            eq = self._ann[subset] = annihilator(self.V, subset)
        return eq

    def meet(self, X: list[list[int]], subset: tuple[int, ...]) -> list[list[int]]:
        """Basis of span(X) ∩ V_subset."""
        if not X:
            return X
        eqs = self.equations(subset)
        if not eqs:
            return X
        F = self.field
        p = F.p
        if F.is_prime:
            M = [[sum(map(mul, e, x)) % p for x in X] for e in eqs]
        else:
            M = [[_dot(F, e, x) for x in X] for e in eqs]
        if not any(any(r) for r in M):
            return X
        if len(M) == 1:
            coeffs = _single_equation_kernel(F, M[0])
        else:
            coeffs = _kernel_vectors(F, M, len(X))
        out = []
        for c in coeffs:
            if F.is_prime:
                v = [sum(map(mul, c, col)) % p for col in zip(*X)]
            else:
                v = [0] * self.k
                for ci, x in zip(c, X):
                    if ci:
                        v = [F.add(a, F.mul(ci, b)) for a, b in zip(v, x)]
            out.append(v)
        return out


def _single_equation_kernel(F, row: list[int]) -> list[list[int]]:
    """Kernel basis of one nonzero linear equation (same basis as full elimination)."""
    piv = next(c for c, x in enumerate(row) if x)
    inv = F.inv(row[piv])
    out = []
    for j, x in enumerate(row):
        if j == piv:
            continue
        v = [0] * len(row)
        v[j] = 1
        if x:
            v[piv] = F.neg(F.mul(x, inv))
        out.append(v)
    return out


def _dot(F, u, v) -> int:
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def _generic_meets(k: int, n: int, trials: int, seed: int) -> list[_SpanMeet]:
    return [_SpanMeet(generic_matrix(k, n, seed, t)) for t in range(trials)]


def _size_profiles(total: int, parts: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    """Nonincreasing tuples of ``parts`` ints in [lo, hi] summing to ``total``,
    largest first (descending lexicographic order)."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(hi, lo - 1, -1):
        rest = total - first
        if rest < (parts - 1) * lo or rest > (parts - 1) * first:
            continue
        for tail in _size_profiles(rest, parts - 1, lo, first):
            yield (first, *tail)


def _verified(V: Matrix, family: SetFamily, trials: int, seed: int) -> MdsWitness | None:
    actual = intersection_dim(V, family)
    generic = generic_intersection_dim(V.nrows, V.ncols, family, trials=trials, seed=seed)
    if actual == generic:
        return None
    return MdsWitness(family, actual, generic)


def _canonical(sets: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted((tuple(s) for s in sets), key=lambda s: (-len(s), s)))


# ---------------------------------------------------------------------------
# MDS(l)


def _circuit_witness(V: Matrix, dependent: tuple[int, ...], ell: int, trials: int, seed: int) -> MdsWitness:
    *head, last = dependent
    k, n = V.shape
    if any(V.column(last)):
        sets = [tuple(head), (last,)]
    else:
        sets = [(last,), (last,)]
    sets += [tuple(range(k))] * (ell - 2)
    family = SetFamily(n, _canonical(sets))
    witness = _verified(V, family, trials, seed)
    if witness is None:
        # pad sets of size k can interact with a degenerate column; fall back to l = 2
        family = SetFamily(n, _canonical(sets[:2]))
        witness = _verified(V, family, trials, seed)
    if witness is None:
        raise AssertionError(f"dependent columns {dependent} did not yield a witness")
    return witness


class _LazyGenericPath:
    """Generic-instance intersections along the current DFS path, computed on demand."""

    def __init__(self, meets: list[_SpanMeet]):
        self.meets = meets
        self.full = meets[0].full()
        self.cache: list[list | None] = []

    def push(self) -> None:
        self.cache.append(None)

    def pop(self) -> None:
        self.cache.pop()

    def dim(self, chosen: Sequence[tuple[int, ...]]) -> int:
        """min over instances of dim ∩ W_A for the sets on the path."""
        best = None
        for t, meet in enumerate(self.meets):
            X = self.full
            for depth, A in enumerate(chosen):
                slot = self.cache[depth]
                if slot is None:
                    slot = self.cache[depth] = [None] * len(self.meets)
                if slot[t] is None:
                    slot[t] = meet.meet(X, A)
                X = slot[t]
                if not X:
                    break
            best = len(X) if best is None else min(best, len(X))
            if best == 0:
                break
        return best


def _level_search(V: Matrix, j: int, comps: Sequence[tuple[int, ...]], trials: int, seed: int) -> SetFamily | None:
    """First family of j sets with sizes from ``comps`` whose actual intersection
    is nonzero while the generic one is zero.  Larger sets come first; equal-size
    sets are in increasing lexicographic order."""
    k, n = V.shape
    meet = _SpanMeet(V)
    generic = _LazyGenericPath(_generic_meets(k, n, trials, seed))
    combos = {c: list(itertools.combinations(range(n), c)) for c in range(1, k + 1)}
    bits = {A: sum(1 << x for x in A) for pool in combos.values() for A in pool}
    masks = [0] * j
    chosen: list[tuple[int, ...]] = []

    def dfs(depth: int, X: list[list[int]], comp: tuple[int, ...]) -> SetFamily | None:
        size = comp[depth]
        pool = combos[size]
        start = 0
        if depth and comp[depth - 1] == size:
            start = bisect_left(pool, chosen[-1])
        last = depth + 1 == j
        common = masks[depth - 1] if depth else 0
        for idx in range(start, len(pool)):
            A = pool[idx]
            if last and common & bits[A]:
                continue
            Y = meet.meet(X, A)
            if not Y:
                continue
            chosen.append(A)
            masks[depth] = (common & bits[A]) if depth else bits[A]
            generic.push()
            found = None
            if last:
                if generic.dim(chosen) == 0:
                    found = SetFamily(n, tuple(chosen))
            else:
                found = dfs(depth + 1, Y, comp)
            generic.pop()
            chosen.pop()
            if found is not None:
                return found
        return None

    full = meet.full()
    for comp in comps:
        found = dfs(0, full, comp)
        if found is not None:
            return found
    return None


def _level_task(args) -> SetFamily | None:
    V, j, comps, trials, seed = args
    return _level_search(V, j, comps, trials, seed)


def is_mds_ell(code: LinearCode | Matrix, ell: int, *, trials: int = DEFAULT_TRIALS, seed: int = 0,
               workers: int | None = None) -> bool | MdsWitness:
    """True when the code is MDS(ell), otherwise the first witness found.

    The code must first be MDS; a dependent column set gives a two-set witness.
    After that only sets of size 1..k-1 matter (a size-k span is the whole
    space), so each level j = 3..ell enumerates j such sets with total size
    (j-1)k and empty common intersection, and pads a hit with ell-j full sets.
    """
    if ell < 2:
        raise ValueError("ell must be at least 2")
    V = code.generator if isinstance(code, LinearCode) else code
    k, n = V.shape
    bad = mds_violation(V)
    if bad is not None:
        return _circuit_witness(V, bad, ell, trials, seed)
    nworkers = _workers(workers)
    for j in range(3, ell + 1):
        comps = list(_size_profiles((j - 1) * k, j, 1, k - 1))
        if not comps:
            continue
        if nworkers > 1 and len(comps) > 1:
            tasks = [(V, j, [c], trials, seed) for c in comps]
            with ProcessPoolExecutor(max_workers=nworkers) as pool:
                results = list(pool.map(_level_task, tasks))
            found = next((r for r in results if r is not None), None)
        else:
            found = _level_search(V, j, comps, trials, seed)
        if found is not None:
            sets = list(found.sets) + [tuple(range(k))] * (ell - j)
            witness = _verified(V, SetFamily(n, _canonical(sets)), trials, seed)
            if witness is None:
                raise AssertionError(f"family {found.sets} failed re-verification")
            return witness
    return True


# ---------------------------------------------------------------------------
# cycle and weak variants


def is_cycle_family(sets: Sequence[Sequence[int]], n: int) -> bool:
    """Each position's membership set {i : j in S_i} is empty or an interval mod l."""
    ell = len(sets)
    members = [0] * n
    for i, s in enumerate(sets):
        for j in s:
            members[j] |= 1 << i
    full = (1 << ell) - 1
    for mask in set(members):
        if mask in (0, full):
            continue
        # an interval mod l has exactly one start: i in the set, i-1 not
        rotated = ((mask << 1) | (mask >> (ell - 1))) & full
        if bin(mask & ~rotated & full).count("1") != 1:
            return False
    return True


def _dihedral_images(seq: Sequence):
    ell = len(seq)
    for r in range(ell):
        rot = [seq[(i + r) % ell] for i in range(ell)]
        yield rot
        yield rot[::-1]


def _is_dihedral_min(sets: Sequence[tuple[int, ...]]) -> bool:
    key = (tuple(len(s) for s in sets), tuple(sets))
    for img in _dihedral_images(list(sets)):
        if (tuple(len(s) for s in img), tuple(img)) < key:
            return False
    return True


def is_cycle_mds_ell(code: LinearCode | Matrix, ell: int, *, trials: int = DEFAULT_TRIALS,
                     seed: int = 0) -> bool | MdsWitness:
    """Zero/nonzero agreement with the generic matrix over all cycle families.

    Cycle families are ordered sets S_1..S_l of size at most k with total size
    at most (l-1)k, empty common intersection, and every position lying in a
    cyclic interval of the sets.  Families containing an empty set are skipped
    (both sides are zero); families are enumerated once per dihedral orbit.
    """
    if ell < 2:
        raise ValueError("ell must be at least 2")
    V = code.generator if isinstance(code, LinearCode) else code
    k, n = V.shape
    bad = mds_violation(V)
    if bad is not None:
        witness = _noncycle_shortcut(V, bad, ell, trials, seed)
        if witness is not None:
            return witness
        two_sided = True
    else:
        # for an MDS generator the actual intersection is never below the generic one
        two_sided = False

    meet = _SpanMeet(V)
    gmeets = _generic_meets(k, n, trials, seed)
    lazy = _LazyGenericPath(gmeets)
    combos = {c: list(itertools.combinations(range(n), c)) for c in range(1, k + 1)}
    bits = {A: sum(1 << x for x in A) for pool in combos.values() for A in pool}
    chosen: list[tuple[int, ...]] = []
    masks = [0] * ell

    def dfs(depth, X, Gs, comp):
        last = depth + 1 == ell
        common = masks[depth - 1] if depth else 0
        for A in combos[comp[depth]]:
            if last and common & bits[A]:
                continue
            chosen.append(A)
            # restricted to the first depth+1 sets, a cyclic interval mod l is
            # still a cyclic interval mod depth+1
            if depth and not is_cycle_family(chosen, n):
                chosen.pop()
                continue
            Y = meet.meet(X, A)
            if two_sided:
                Hs = [g.meet(G, A) for g, G in zip(gmeets, Gs)]
                gdim = min(len(H) for H in Hs)
                if not Y and gdim == 0:
                    chosen.pop()
                    continue
            elif not Y:
                chosen.pop()
                continue
            else:
                Hs = None
            masks[depth] = (common & bits[A]) if depth else bits[A]
            lazy.push()
            found = None
            if last:
                if _is_dihedral_min(chosen):
                    if not two_sided:
                        gdim = lazy.dim(chosen)
                    if bool(Y) != bool(gdim):
                        found = SetFamily(n, tuple(chosen))
            else:
                found = dfs(depth + 1, Y, Hs, comp)
            lazy.pop()
            chosen.pop()
            if found is not None:
                return found
        return None

    full = meet.full()
    for comp in _cycle_compositions(ell, k):
        found = dfs(0, full, [full] * len(gmeets), comp)
        if found is not None:
            witness = _verified(V, found, trials, seed)
            if witness is None:
                raise AssertionError(f"cycle family {found.sets} failed re-verification")
            return witness
    return True


def _cycle_compositions(ell: int, k: int) -> Iterator[tuple[int, ...]]:
    for comp in itertools.product(range(1, k + 1), repeat=ell):
        if sum(comp) > (ell - 1) * k:
            continue
        if all(tuple(img) >= comp for img in _dihedral_images(comp)):
            yield comp


def _noncycle_shortcut(V: Matrix, dependent, ell, trials, seed) -> MdsWitness | None:
    """A dependent set D with x in span(D - x) gives (D - x, {x}, ..., {x})."""
    *head, last = dependent
    if not head or not any(V.column(last)):
        return None
    sets = [tuple(head)] + [(last,)] * (ell - 1)
    return _verified(V, SetFamily(V.ncols, tuple(sets)), trials, seed)


def is_weak_mds_ell(code: LinearCode | Matrix, ell: int) -> bool | MdsWitness:
    """Pairwise-disjoint S_1..S_l with |S_i| <= k and total <= (l-1)k must have
    zero span intersection; the generic value is zero for all such families."""
    if ell < 2:
        raise ValueError("ell must be at least 2")
    V = code.generator if isinstance(code, LinearCode) else code
    k, n = V.shape
    meet = _SpanMeet(V)
    chosen: list[tuple[int, ...]] = []
    used: set[int] = set()

    def dfs(depth, X, comp):
        size = comp[depth]
        free = [j for j in range(n) if j not in used]
        for A in itertools.combinations(free, size):
            if depth and comp[depth - 1] == size and A < chosen[-1]:
                continue
            Y = meet.meet(X, A)
            if not Y:
                continue
            chosen.append(A)
            if depth + 1 == ell:
                return SetFamily(n, tuple(chosen))
            used.update(A)
            found = dfs(depth + 1, Y, comp)
            used.difference_update(A)
            chosen.pop()
            if found is not None:
                return found
        return None

    full = meet.full()
    top = min((ell - 1) * k, n)
    for total in range(top, ell - 1, -1):
        for comp in _size_profiles(total, ell, 1, k):
            found = dfs(0, full, comp)
            if found is not None:
                actual = intersection_dim(V, found)
                if actual == 0:
                    raise AssertionError(f"weak family {found.sets} failed re-verification")
                return MdsWitness(found, actual, 0)
    return True


# ---------------------------------------------------------------------------
# padding and randomized violation search


def _u_dims(V: Matrix, family: SetFamily) -> tuple[int, list[int]]:
    """rank of the (unreduced) block matrix and dim U_j for each block row j."""
    k = V.nrows
    rows, total = _full_block(V, family)
    r = _rank_rows(V.field, rows, total) if rows else 0
    dims = []
    for j in range(family.ell - 1):
        rest = rows[:j * k] + rows[(j + 1) * k:]
        dims.append(r - (_rank_rows(V.field, rest, total) if rest else 0))
    return r, dims


def _full_block(V: Matrix, family: SetFamily) -> tuple[list[list[int]], int]:
    k = V.nrows
    sets = family.sets
    widths = [len(s) for s in sets]
    total = sum(widths)
    offsets = [sum(widths[:i]) for i in range(len(sets))]
    rows = []
    for blk in range(len(sets) - 1):
        t = blk + 1
        for i in range(k):
            row = [0] * total
            for c, j in enumerate(sets[0]):
                row[offsets[0] + c] = V.data[i][j]
            for c, j in enumerate(sets[t]):
                row[offsets[t] + c] = V.data[i][j]
            rows.append(row)
    return rows, total


def pad_sets(code: LinearCode | Matrix, family: SetFamily) -> SetFamily:
    """Grow a zero-intersection family to total size (l-1)k keeping it zero.

    Each step finds a block row j whose supported subspace U_j is not all of
    F^k and adds to A_(j+1) the smallest unused position whose column lies
    outside U_j.  Added positions are fresh, so they are disjoint from each
    other and from the original sets.
    """
    V = code.generator if isinstance(code, LinearCode) else code
    k, n = V.shape
    ell = family.ell
    if ell < 2:
        raise ValueError("padding needs at least two sets")
    if family.n != n:
        raise ValueError("family ground set does not match the code length")
    if any(len(s) > k for s in family.sets):
        raise ValueError("every set must have size at most k")
    target = (ell - 1) * k
    if sum(family.sizes) > target:
        raise ValueError("total size already exceeds (l-1)k")
    if n < target:
        raise ValueError(f"n={n} is smaller than (l-1)k={target}")
    if intersection_dim(V, family) != 0:
        raise ValueError("family must have zero intersection")

    sets = [list(s) for s in family.sets]
    used = set().union(*family.sets)
    while sum(len(s) for s in sets) < target:
        cur = SetFamily(n, tuple(tuple(s) for s in sets))
        r, dims = _u_dims(V, cur)
        placed = False
        for j, d in enumerate(dims):
            if d >= k:
                continue
            for x in range(n):
                if x in used:
                    continue
                trial = [list(s) for s in sets]
                trial[j + 1].append(x)
                rows, total = _full_block(V, SetFamily(n, tuple(tuple(s) for s in trial)))
                if _rank_rows(V.field, rows, total) > r:
                    sets = trial
                    used.add(x)
                    placed = True
                    break
            if placed:
                break
        if not placed:
            raise ValueError("no fresh position enlarges the block matrix; padding impossible for this code")

    out = SetFamily(n, tuple(tuple(s) for s in sets))
    if any(len(s) > k for s in out.sets) or sum(out.sizes) != target or intersection_dim(V, out) != 0:
        raise AssertionError("padding produced a family violating its guarantees")
    return out


def find_violation(code: LinearCode | Matrix, ell: int, samples: int, seed: int | str = 0) -> MdsWitness:
    """Randomized search for a disjoint family with nonzero intersection.

    Positions are cut into ell consecutive blocks of size n // ell (leftovers
    unused).  Each sample draws x in F^k and looks, in every block, for k-1
    columns whose span contains x.  Raises :class:`NotFound` when no sample hits.
    """
    V = code.generator if isinstance(code, LinearCode) else code
    k, n = V.shape
    if not 2 <= ell <= k:
        raise ValueError("find_violation needs 2 <= ell <= k")
    s = n // ell
    if s < k - 1:
        raise ValueError(f"blocks of size {s} cannot hold k-1={k - 1} positions")
    F = V.field
    blocks = []
    for b in range(ell):
        subsets = list(itertools.combinations(range(b * s, (b + 1) * s), k - 1))
        blocks.append([(A, annihilator(V, A)) for A in subsets])
    rng = random.Random(seed)
    q = F.order
    for _ in range(samples):
        x = [rng.randrange(q) for _ in range(k)]
        if not any(x):
            continue
        family = []
        for cands in blocks:
            hit = next((A for A, eqs in cands if all(_dot(F, e, x) == 0 for e in eqs)), None)
            if hit is None:
                break
            family.append(hit)
        else:
            fam = SetFamily(n, tuple(family))
            actual = intersection_dim(V, fam)
            generic = generic_intersection_dim(k, n, fam)
            if actual >= 1 and generic == 0:
                return MdsWitness(fam, actual, generic)
    raise NotFound(f"no violation in {samples} samples")
