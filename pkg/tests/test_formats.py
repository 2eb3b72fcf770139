import random

import pytest
from hypothesis import given, strategies as st

from mrlab.codes import reed_solomon
from mrlab.field import make_prime_field, make_quadratic_extension
from mrlab.formats import (
    FormatError,
    format_code,
    format_element,
    format_field,
    format_grid,
    format_matrix,
    format_pattern,
    format_witness,
    parse_code,
    parse_element,
    parse_field,
    parse_grid,
    parse_matrix,
    parse_pattern,
    parse_witness,
)
from mrlab.hmds import MdsWitness
from mrlab.linalg import Matrix, SetFamily
from mrlab.tensor import ErasurePattern

F13 = make_prime_field(13)
F49 = make_quadratic_extension(7, 3)


def test_field_literals():
    assert parse_field("p=13") == F13
    assert parse_field("p=7;x2=3") == F49
    assert parse_field(format_field(F49)) == F49
    assert format_field(F13) == "p=13"
    general = parse_field("p=5;x2=3+1x")
    assert general.order == 25
    assert parse_field(format_field(general)) == general
    for bad in ("13", "p=13;y=2", "q=13", "p=abc"):
        with pytest.raises(FormatError):
            parse_field(bad)


def test_element_literals():
    x = parse_element(F49, "2+3x")
    assert F49.split(x) == (2, 3)
    assert parse_element(F49, "x") == F49.generator_X()
    assert parse_element(F49, "-x") == F49.neg(F49.generator_X())
    assert parse_element(F13, "-1") == 12
    assert format_element(F49, x) == "2+3x"
    for bad in ("2+", "2*x", "", "x+y"):
        with pytest.raises(FormatError):
            parse_element(F49, bad)


@given(st.integers(0, 48))
def test_element_round_trip(code):
    assert parse_element(F49, format_element(F49, code)) == code


def test_matrix_round_trip_and_errors():
    rng = random.Random(0)
    for F in (F13, F49):
        M = Matrix.random(F, 3, 5, rng)
        assert parse_matrix(format_matrix(M)) == M
    with pytest.raises(FormatError):
        parse_matrix("p=13\n2 2\n1 2 3\n")
    with pytest.raises(FormatError):
        parse_matrix("p=13\n")
    with pytest.raises(FormatError):
        parse_matrix("p=13\n2 x\n1 2 3 4\n")


def test_code_round_trip_and_header_check():
    C = reed_solomon(F13, 6, 3)
    text = format_code(C)
    assert text.startswith("# code n=6 k=3\n")
    assert parse_code(text).same_code(C)
    with pytest.raises(FormatError):
        parse_code(text.replace("k=3", "k=2"))


def test_pattern_files_are_one_based():
    E = parse_pattern("# comment\n3 4\n1 1\n3 4\n")
    assert E == ErasurePattern(3, 4, {(0, 0), (2, 3)})
    assert parse_pattern(format_pattern(E)) == E
    for bad in ("", "3\n", "3 4\n0 1\n", "3 4\n4 1\n", "3 4\n1 2 3\n"):
        with pytest.raises(FormatError):
            parse_pattern(bad)


def test_grid_round_trip():
    grid = [[1, None, 3], [None, 0, 12]]
    assert parse_grid(F13, format_grid(F13, grid)) == grid
    with pytest.raises(FormatError):
        parse_grid(F13, "1 2\n3\n")
    with pytest.raises(FormatError):
        parse_grid(F13, "")


def test_witness_round_trip():
    w = MdsWitness(SetFamily.from_one_based(8, [[1, 2, 3], [4, 5], [6]]), 1, 0)
    text = format_witness(w)
    assert text == "A1: 1 2 3\nA2: 4 5\nA3: 6\nactual=1 generic=0\n"
    assert parse_witness(text, 8) == w
    with pytest.raises(FormatError):
        parse_witness("A1: 1 2\n", 8)
    with pytest.raises(FormatError):
        parse_witness("A1: 1\nactual=1 nonsense=0\n", 8)
