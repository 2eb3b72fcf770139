import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import mds_ell_by_definition, span_meet_dim
from mrlab.codes import NotFound, dual, is_mds, puncture, random_code, reed_solomon, shorten
from mrlab.field import GENERIC_FIELD, make_prime_field
from mrlab.hmds import (
    MdsWitness,
    find_violation,
    is_cycle_family,
    is_cycle_mds_ell,
    is_mds_ell,
    is_weak_mds_ell,
    pad_sets,
)
from mrlab.linalg import Matrix, SetFamily, generic_intersection_dim, intersection_dim, solve

F13 = make_prime_field(13)


def random_mds_code(F, n, k, tag):
    for attempt in range(1000):
        C = random_code(F, n, k, f"{tag}:{attempt}")
        if is_mds(C):
            return C
    raise RuntimeError("no MDS code found")


def assert_witness_checks(code, w, n):
    V = code.generator if hasattr(code, "generator") else code
    assert isinstance(w, MdsWitness) and not w
    assert w.family.n == n
    assert intersection_dim(V, w.family) == w.actual_dim
    assert generic_intersection_dim(V.nrows, n, w.family) == w.generic_dim
    assert w.actual_dim != w.generic_dim


def test_reed_solomon_8_2_is_mds4_but_dual_is_not():
    C = reed_solomon(F13, 8, 2)
    assert is_mds_ell(C, 4) is True
    w = is_mds_ell(dual(C), 4)
    assert not w
    assert w.family.one_based() == [[1, 2, 3, 4, 5], [1, 2, 3, 6, 7], [1, 2, 4, 6, 8], [5, 7, 8]]
    assert (w.actual_dim, w.generic_dim) == (1, 0)
    D = dual(C).generator
    for A in w.family:
        assert solve(D.columns(A), [5, 4, 3, 2, 8, 0]) is not None


@pytest.mark.parametrize("n", [4, 6, 9, 12])
def test_dimension_two_mds_codes_are_mds3(n):
    assert is_mds_ell(reed_solomon(F13, n, 2), 3) is True


def test_witness_requires_mismatch():
    fam = SetFamily(4, ((0,), (1,)))
    with pytest.raises(ValueError):
        MdsWitness(fam, 1, 1)


def test_non_mds_code_gives_witness_at_every_order():
    G = Matrix(F13, [[1, 1, 0, 1, 2], [2, 2, 1, 0, 5]])
    for ell in (2, 3, 4):
        w = is_mds_ell(G, ell)
        assert_witness_checks(G, w, 5)
        assert w.family.ell == ell


def test_zero_column_witness():
    G = Matrix(F13, [[1, 0, 1, 1], [0, 0, 1, 2]])
    w = is_mds_ell(G, 3)
    assert_witness_checks(G, w, 4)


DEFINITION_CASES = [(p, n, k, s) for p in (5, 7, 11, 13) for (n, k) in ((5, 2), (5, 3), (6, 3)) for s in range(2)]


@pytest.mark.parametrize("p,n,k,seed", DEFINITION_CASES)
def test_reduced_check_matches_definition(p, n, k, seed):
    F = make_prime_field(p)
    C = random_mds_code(F, n, k, f"def:{p}:{n}:{k}:{seed}") if seed == 0 else random_code(F, n, k, seed)
    expected = mds_ell_by_definition(C.generator.to_lists(), 3, p)
    got = is_mds_ell(C, 3)
    assert bool(got) == expected
    if not got:
        assert_witness_checks(C, got, n)
        fam = got.family.sets
        assert (span_meet_dim(C.generator.to_lists(), fam, p) == 0) == (got.actual_dim == 0)


@pytest.mark.parametrize("seed", range(12))
def test_order_reduction(seed):
    rng = random.Random(seed)
    F = make_prime_field(rng.choice([11, 13]))
    C = random_mds_code(F, 7, 3, f"red:{seed}")
    if is_mds_ell(C, 4):
        assert is_mds_ell(C, 3)
    if is_mds_ell(C, 3):
        assert is_mds_ell(C, 2)


def random_mds3_code(p, n, k, tag):
    F = make_prime_field(p)
    for attempt in range(2000):
        C = random_code(F, n, k, f"{tag}:{attempt}")
        if is_mds(C) and is_mds_ell(C, 3):
            return C
    raise RuntimeError("no MDS(3) code found")


@pytest.mark.parametrize("seed", range(8))
def test_puncture_and_shorten_preserve_mds3(seed):
    C = random_mds3_code(101, 7, 3, f"cl:{seed}")
    for pos in range(7):
        assert is_mds_ell(puncture(C, pos), 3)
        assert is_mds_ell(shorten(C, pos), 3)
    assert is_mds_ell(dual(C), 3)


@pytest.mark.parametrize("seed", range(6))
def test_generic_field_codes_are_mds3_and_mds4(seed):
    C = random_code(GENERIC_FIELD, 7, 3, seed)
    assert is_mds_ell(C, 3) is True
    assert is_mds_ell(dual(C), 3) is True
    assert is_mds_ell(random_code(GENERIC_FIELD, 6, 2, seed), 4) is True


def test_cycle_family_recognition():
    n = 5
    assert is_cycle_family([(0, 1), (1, 2), (2, 3)], n)
    assert is_cycle_family([(0,), (1,), (2,), (3,)], n)
    assert is_cycle_family([(0,), (), (0,)], n)  # {1, 3} wraps mod 3
    assert not is_cycle_family([(0,), (), (0,), ()], n)  # {1, 3} mod 4 has a gap
    assert is_cycle_family([(), (), ()], n)
    assert not is_cycle_family([(0, 1), (), (0,), (1,)], n)


@pytest.mark.parametrize("ell", [3, 4])
def test_cycle_family_matches_interval_definition(ell):
    rng = random.Random(ell)
    for _ in range(300):
        sets = [tuple(sorted(rng.sample(range(4), rng.randint(0, 4)))) for _ in range(ell)]
        ok = True
        for j in range(4):
            T = {i for i in range(ell) if j in sets[i]}
            if not T or len(T) == ell:
                continue
            intervals = [{(c + d) % ell for d in range(length)} for c in range(ell) for length in range(1, ell)]
            ok &= T in intervals
        assert is_cycle_family(sets, 4) == ok


@pytest.mark.parametrize("seed", range(10))
def test_cycle_equals_full_at_order_three(seed):
    rng = random.Random(seed)
    F = make_prime_field(rng.choice([13, 17]))
    n, k = rng.choice([(6, 3), (7, 3), (7, 4)])
    C = random_mds_code(F, n, k, f"cyc:{seed}")
    assert bool(is_cycle_mds_ell(C, 3)) == bool(is_mds_ell(C, 3))


@pytest.mark.parametrize("seed", range(8))
def test_hierarchy_full_cycle_weak(seed):
    rng = random.Random(seed)
    F = make_prime_field(rng.choice([5, 7, 11]))
    n, k = rng.choice([(6, 2), (6, 3), (7, 3)])
    C = random_code(F, n, k, seed)
    for ell in (3, 4):
        full, cyc, weak = is_mds_ell(C, ell), is_cycle_mds_ell(C, ell), is_weak_mds_ell(C, ell)
        if full:
            assert cyc
        if cyc:
            assert weak
        for w in (full, cyc):
            if not w:
                assert_witness_checks(C, w, n)
        if not weak:
            assert weak.generic_dim == 0 and weak.actual_dim > 0
            assert intersection_dim(C.generator, weak.family) == weak.actual_dim


def test_cycle_witness_is_a_cycle_family():
    C = random_code(make_prime_field(5), 6, 3, 1)
    w = is_cycle_mds_ell(C, 4)
    if not w:
        assert is_cycle_family(w.family.sets, 6)
        assert_witness_checks(C, w, 6)


@pytest.mark.parametrize("seed", range(6))
def test_dual_of_mds_m_is_cycle_mds_m(seed):
    rng = random.Random(seed)
    F = make_prime_field(rng.choice([11, 13, 17]))
    C = random_mds_code(F, 7, 3, f"dual:{seed}")
    for m in (3, 4):
        if is_mds_ell(C, m):
            assert is_cycle_mds_ell(dual(C), m)


def test_weak_examples():
    assert is_weak_mds_ell(reed_solomon(F13, 8, 2), 3) is True
    G = Matrix(F13, [[1, 1, 0, 1, 1], [2, 2, 1, 0, 1], [0, 0, 3, 3, 1]])
    w = is_weak_mds_ell(G, 3)
    assert not w
    sets = [set(s) for s in w.family.sets]
    assert all(not (a & b) for i, a in enumerate(sets) for b in sets[i + 1:])
    assert intersection_dim(G, w.family) >= 1
    # columns 0 and 1 coincide
    two = is_weak_mds_ell(G, 2)
    assert not two
    a, b = (set(x) for x in two.family.sets)
    assert not (a & b) and intersection_dim(G, two.family) >= 1


def check_padding(V, family, out):
    k, n = V.shape
    target = (family.ell - 1) * k
    original = set().union(*family.sets)
    added = [set(b) - set(a) for a, b in zip(family.sets, out.sets)]
    assert all(set(a) <= set(b) for a, b in zip(family.sets, out.sets))
    assert all(not (x & original) for x in added)
    assert all(not (x & y) for i, x in enumerate(added) for y in added[i + 1:])
    assert all(len(s) <= k for s in out.sets)
    assert sum(out.sizes) == target
    assert intersection_dim(V, out) == 0


def test_pad_examples():
    C = reed_solomon(F13, 9, 3)
    full = SetFamily(9, ((0, 1, 2), (3, 4, 5), ()))
    assert pad_sets(C, full) == full
    empty = SetFamily(9, ((), (), ()))
    out = pad_sets(C, empty)
    check_padding(C.generator, empty, out)
    with pytest.raises(ValueError):
        pad_sets(C, SetFamily(9, ((0, 1), (0, 2), (0, 3), (0, 4))))  # n < (l-1)k


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_padding_guarantees(seed):
    rng = random.Random(seed)
    k = rng.randint(2, 3)
    ell = rng.randint(2, 3)
    n = max((ell - 1) * k, k + 1) + rng.randint(0, 3)
    C = reed_solomon(F13, n, k, evals=rng.sample(range(13), n))
    sets = tuple(tuple(rng.sample(range(n), rng.randint(0, k - 1))) for _ in range(ell))
    fam = SetFamily(n, sets)
    if sum(fam.sizes) > (ell - 1) * k or intersection_dim(C.generator, fam) != 0:
        return
    check_padding(C.generator, fam, pad_sets(C, fam))


def test_pad_preconditions():
    C = reed_solomon(F13, 6, 2)
    with pytest.raises(ValueError):
        pad_sets(C, SetFamily(6, ((0, 1, 2), ())))
    with pytest.raises(ValueError):
        pad_sets(C, SetFamily(6, ((0, 1), (0, 1))))


@pytest.mark.parametrize("q", [13, 17])
def test_find_violation_small_fields(q):
    C = reed_solomon(make_prime_field(q), 12, 3)
    w = find_violation(C, 3, 10**5, seed=0)
    assert_witness_checks(C, w, 12)
    assert w.generic_dim == 0 and w.actual_dim >= 1
    assert not is_weak_mds_ell(C, 3)


def test_find_violation_large_field_finds_nothing():
    C = reed_solomon(GENERIC_FIELD, 12, 3)
    with pytest.raises(NotFound):
        find_violation(C, 3, 1000, seed=0)


def test_find_violation_argument_checks():
    C = reed_solomon(F13, 12, 3)
    with pytest.raises(ValueError):
        find_violation(C, 4, 10)
