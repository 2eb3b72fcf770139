import itertools

import pytest

from mrlab.codes import is_mds, mds_violation
from mrlab.constructions import (
    BipartiteViolation,
    ConstructionError,
    _plane_normal,
    build_bipartite,
    build_tripartite,
    is_degenerate_triple,
    verify_bipartite,
    verify_tripartite,
)
from mrlab.linalg import Matrix, rank


def scalar_multiple(F, x, y):
    return rank(Matrix.from_columns(F, [x, y])) == 1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_bipartite_shape_and_normals(p):
    fam = build_bipartite(p)
    F = fam.field
    assert F.order == p * p
    assert len(fam.u) == len(fam.v) == p
    assert fam.matrix().shape == (3, 2 * p)
    X = F.generator_X()
    for a, b in itertools.product(range(p), repeat=2):
        cross = (1, a, F.add(b, F.mul(b * b % p, X)))
        assert scalar_multiple(F, _plane_normal(F, fam.u[a], fam.v[b]), cross)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_bipartite_verifies(p):
    assert verify_bipartite(build_bipartite(p)) is True


@pytest.mark.parametrize("p", [3, 5, 7])
def test_bipartite_halves_are_collinear(p):
    fam = build_bipartite(p)
    assert not is_mds(fam.u_matrix())
    assert not is_mds(fam.v_matrix())
    assert rank(fam.u_matrix()) == 2 and rank(fam.v_matrix()) == 2


def test_degenerate_triples():
    assert is_degenerate_triple([(0, 1), (0, 2), (0, 3)])
    assert is_degenerate_triple([(0, 1), (2, 1), (3, 1)])
    assert is_degenerate_triple([(0, 1), (0, 1), (2, 3)])
    assert not is_degenerate_triple([(0, 1), (0, 2), (1, 1)])


def test_degenerate_triples_really_meet():
    fam = build_bipartite(5)
    F = fam.field
    for triple in ([(0, 1), (0, 2), (0, 3)], [(1, 4), (2, 4), (3, 4)]):
        normals = [_plane_normal(F, fam.u[a], fam.v[b]) for a, b in triple]
        assert rank(Matrix(F, normals)) < 3


def test_tampered_bipartite_family_is_caught():
    fam = build_bipartite(5)
    F = fam.field
    # collapse the v's onto the prime subfield: b + b^2 X -> b
    v = tuple((b, 0, F.neg(1)) for b in range(5))
    bad = type(fam)(fam.field, fam.p, fam.c, fam.u, v)
    result = verify_bipartite(bad)
    assert isinstance(result, BipartiteViolation) and not result
    assert not is_degenerate_triple(result.pairs)


def test_small_prime_values():
    fam = build_tripartite(7)
    assert (fam.zeta, fam.c, fam.subgroup, fam.coset) == (2, 3, (1, 6), 1)
    assert (len(fam.U), len(fam.V), len(fam.W)) == (2, 2, 3)
    F = fam.field
    assert F.mul(F.mul(fam.zeta, fam.zeta), fam.zeta) == 1 and fam.zeta != 1


@pytest.mark.parametrize("p", [7, 13, 31])
def test_tripartite_verifies(p):
    fam = build_tripartite(p)
    assert fam.coset == 1
    assert verify_tripartite(fam) is True
    assert mds_violation(fam.matrix()) is None


def test_tripartite_coset_when_zeta_is_a_cube():
    fam = build_tripartite(19)
    assert fam.zeta in fam.subgroup
    assert fam.coset not in fam.subgroup
    assert verify_tripartite(fam) is True
    with pytest.raises(ConstructionError):
        build_tripartite(19, strict=True)


def test_construction_errors():
    with pytest.raises(ConstructionError):
        build_bipartite(2)
    with pytest.raises(ConstructionError):
        build_tripartite(11)
    with pytest.raises(ConstructionError):
        build_tripartite(5)


def test_tripartite_detects_shared_part():
    fam = build_tripartite(13)
    bad = type(fam)(fam.field, fam.p, fam.c, fam.zeta, fam.subgroup, fam.coset, fam.U, fam.U, fam.W)
    assert not verify_tripartite(bad)
