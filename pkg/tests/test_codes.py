import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import is_mds_by_minors, rank_mod_p
from mrlab.codes import (
    CodeError,
    LinearCode,
    dual,
    is_mds,
    mds_violation,
    parity_code,
    puncture,
    random_code,
    reed_solomon,
    shorten,
)
from mrlab.field import GENERIC_FIELD, make_prime_field, make_quadratic_extension
from mrlab.hmds import is_mds_ell
from mrlab.linalg import Matrix, rank

F2 = make_prime_field(2)
F13 = make_prime_field(13)
F49 = make_quadratic_extension(7, 3)

RS_8_2 = [[1] * 8, list(range(8))]
DUAL_RS_8_2 = [
    [1, 0, 0, 0, 0, 0, 6, 6],
    [0, 1, 0, 0, 0, 0, 7, 5],
    [0, 0, 1, 0, 0, 0, 8, 4],
    [0, 0, 0, 1, 0, 0, 9, 3],
    [0, 0, 0, 0, 1, 0, 10, 2],
    [0, 0, 0, 0, 0, 1, 11, 1],
]


def test_reed_solomon_matches_vandermonde():
    C = reed_solomon(F13, 8, 2)
    assert C.generator.to_lists() == RS_8_2
    assert reed_solomon(F13, 5, 1).generator.to_lists() == [[1] * 5]
    with pytest.raises(CodeError):
        reed_solomon(F13, 4, 2, evals=[1, 1, 2, 3])
    with pytest.raises(CodeError):
        reed_solomon(F13, 14, 2)


@pytest.mark.parametrize("n,k", [(5, 2), (6, 3), (8, 4), (10, 3), (10, 5)])
def test_reed_solomon_is_mds_by_minors(n, k):
    C = reed_solomon(F13, n, k)
    assert is_mds(C)
    assert is_mds_by_minors(C.generator.to_lists(), 13)


def test_reed_solomon_over_extension_field():
    X = F49(0, 1)
    evals = [F49(i) for i in range(7)] + [X, X + 1]
    C = reed_solomon(F49, 9, 3, evals=evals)
    assert is_mds(C)


def test_code_validation():
    with pytest.raises(CodeError):
        LinearCode(Matrix.identity(F13, 3))
    with pytest.raises(CodeError):
        LinearCode(Matrix(F13, [[1, 2, 3], [2, 4, 6]]))


def test_dual_examples():
    C = reed_solomon(F13, 8, 2)
    D = dual(C)
    assert D.generator.to_lists() == DUAL_RS_8_2
    assert (C.generator @ D.generator.T).is_zero()
    assert dual(D).same_code(C)
    ones = LinearCode(Matrix(F13, [[1] * 5]))
    assert dual(parity_code(F13, 5)).same_code(ones)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 9), st.integers(0, 10**6), st.sampled_from([F13, F49]))
def test_dual_is_an_involution(n, seed, F):
    k = random.Random(seed).randint(1, n - 1)
    C = random_code(F, n, k, seed)
    D = dual(C)
    assert D.k == n - k and rank(D.generator) == n - k
    assert (C.generator @ D.generator.T).is_zero()
    assert dual(D).same_code(C)


def test_puncture_examples():
    C = reed_solomon(F13, 8, 2)
    assert puncture(C, 7).same_code(reed_solomon(F13, 7, 2))
    with pytest.raises(CodeError):
        puncture(reed_solomon(F13, 3, 2), 0)
    with pytest.raises(IndexError):
        puncture(C, 8)


@pytest.mark.parametrize("seed", range(10))
def test_puncture_and_shorten_keep_mds(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 9)
    k = rng.randint(2, n - 2)
    C = reed_solomon(F13, n, k, evals=rng.sample(range(13), n))
    pos = rng.randrange(n)
    P, S = puncture(C, pos), shorten(C, pos)
    assert is_mds_by_minors(P.generator.to_lists(), 13)
    assert is_mds_by_minors(S.generator.to_lists(), 13)
    assert (S.n, S.k) == (n - 1, k - 1) and rank(S.generator) == k - 1


def test_shorten_examples():
    C = reed_solomon(F13, 8, 2)
    for pos in range(8):
        S = shorten(C, pos)
        assert (S.n, S.k) == (7, 1)
        assert all(S.generator.data[0])
    with pytest.raises(CodeError):
        shorten(LinearCode(Matrix(F13, [[1, 0, 1], [0, 0, 1]])), 1)
    with pytest.raises(CodeError):
        shorten(reed_solomon(F13, 5, 1), 0)


@pytest.mark.parametrize("seed", range(10))
def test_shortened_words_are_codewords_vanishing_there(seed):
    rng = random.Random(seed)
    C = random_code(F13, 7, 3, seed)
    pos = rng.randrange(7)
    if not any(row[pos] for row in C.generator.data):
        pytest.skip("zero column")
    S = shorten(C, pos)
    for row in S.generator.data:
        word = list(row[:pos]) + [0] + list(row[pos:])
        assert C.contains(word)


def test_mds_examples():
    assert is_mds(reed_solomon(F13, 8, 2))
    G = Matrix(F13, [[1, 1, 0, 1], [2, 2, 1, 0]])
    assert not is_mds(LinearCode(G))
    assert mds_violation(LinearCode(G)) == (0, 1)


@pytest.mark.parametrize("seed", range(40))
def test_mds_matches_minors_and_duality(seed):
    rng = random.Random(seed)
    F = make_prime_field(rng.choice([5, 7, 11]))
    n = rng.randint(3, 8)
    k = rng.randint(1, n - 1)
    C = random_code(F, n, k, seed)
    expected = is_mds_by_minors(C.generator.to_lists(), F.p)
    assert is_mds(C) == expected
    assert is_mds(dual(C)) == expected
    bad = mds_violation(C)
    if bad is not None:
        assert rank_mod_p([[C.generator.data[i][j] for j in bad] for i in range(k)], F.p) < len(bad)


def test_random_code_reproducible_and_generic():
    assert random_code(F13, 6, 3, seed=4).generator == random_code(F13, 6, 3, seed=4).generator
    assert is_mds(random_code(GENERIC_FIELD, 8, 4, seed=0))


def test_small_field_random_codes_can_fail_mds():
    failures = [s for s in range(30) if not is_mds(random_code(F2, 4, 2, s))]
    assert failures
    C = random_code(F2, 4, 2, failures[0])
    assert not is_mds_by_minors(C.generator.to_lists(), 2)


@pytest.mark.parametrize("seed", range(100))
def test_erasure_criteria_agree_both_ways(seed):
    rng = random.Random(seed)
    F = make_prime_field(rng.choice([3, 5, 13]))
    n = rng.randint(3, 8)
    k = rng.randint(1, n - 1)
    C = random_code(F, n, k, seed)
    E = rng.sample(range(n), rng.randint(0, n - k))
    kept = [j for j in range(n) if j not in E]
    by_generator = rank(C.generator.columns(kept)) == k
    by_parity = rank(C.parity_check.columns(E)) == len(E) if E else True
    assert by_generator == by_parity


@pytest.mark.parametrize("ell", [2, 3, 4])
@pytest.mark.parametrize("n", [5, 7])
def test_extreme_dimensions_are_higher_order_mds(n, ell):
    assert is_mds_ell(reed_solomon(F13, n, 2, evals=list(range(3, 3 + n))), ell)
    assert is_mds_ell(parity_code(F13, n), ell)


def test_encode_and_contains():
    C = reed_solomon(F49, 6, 3)
    word = C.encode([1, F49(2, 3), 5])
    assert C.contains(word)
    word[0] = F49.add(word[0], 1)
    assert not C.contains(word)
    with pytest.raises(CodeError):
        C.encode([1, 2])
