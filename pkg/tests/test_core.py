import math
import random
from fractions import Fraction
from itertools import product

import pytest

from krawtchouk import (FlavorError, Matrix, MultiIndex, ShapeError,
                        enumerate_level, format_rational, matrices_match,
                        multi_factorial, multinomial_coeff, parse_rational,
                        scalars_match)


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-7") == Fraction(-7)
    assert parse_rational(" 1/2 ") == Fraction(1, 2)


@pytest.mark.parametrize("bad", ["0.5", "1/0", "a", "1/-2", "", "1//2"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_roundtrip():
    rng = random.Random(11)
    for _ in range(200):
        value = Fraction(rng.randint(-50, 50), rng.randint(1, 40))
        assert parse_rational(format_rational(value)) == value
    assert format_rational(Fraction(5)) == "5"
    assert format_rational(Fraction(-1, 3)) == "-1/3"


def test_fraction_cross_multiplication_identity():
    # (a/b + c/d) * b * d == a*d + c*b, exercised over random inputs
    rng = random.Random(23)
    for _ in range(300):
        a, c = rng.randint(-99, 99), rng.randint(-99, 99)
        b, d = rng.randint(1, 99), rng.randint(1, 99)
        assert (Fraction(a, b) + Fraction(c, d)) * b * d == a * d + c * b


def test_multiindex_basics():
    m = MultiIndex((2, 0, 1))
    assert m.degree == 3
    assert m.shifted(1) == (2, 1, 1)
    assert m.shifted(0, -1) == (1, 0, 1)
    with pytest.raises(ValueError):
        MultiIndex((1, -1))
    with pytest.raises(ValueError):
        m.shifted(2, -2)


def test_enumerate_level_examples():
    assert list(enumerate_level(2, 2)) == [
        (2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
    assert list(enumerate_level(1, 3)) == [(3, 0), (2, 1), (1, 2), (0, 3)]
    assert list(enumerate_level(3, 0)) == [(0, 0, 0, 0)]


def test_enumeration_is_descending_dictionary_order():
    for d in (1, 2, 3):
        for N in range(6):
            basis = enumerate_level(d, N)
            brute = sorted(
                (m for m in product(range(N + 1), repeat=d + 1) if sum(m) == N),
                reverse=True)
            assert [tuple(m) for m in basis] == brute
            assert len(basis) == math.comb(N + d, d)
            assert basis.indices[0] == (N,) + (0,) * d
            assert basis.indices[-1] == (0,) * d + (N,)


def test_rank_roundtrip_and_errors():
    basis = enumerate_level(2, 3)
    for pos, m in enumerate(basis):
        assert basis.rank(m) == pos
        assert basis.unrank(pos) == m
    with pytest.raises(ValueError, match="degree mismatch"):
        basis.rank((1, 1, 0))
    with pytest.raises(ValueError, match="dimension mismatch"):
        basis.rank((3, 0))


def test_enumerate_level_validates():
    with pytest.raises(ValueError):
        enumerate_level(0, 2)
    with pytest.raises(ValueError):
        enumerate_level(2, -1)


def test_multinomial_examples():
    assert multinomial_coeff((4, 0)) == 1
    assert multinomial_coeff((2, 2)) == 6
    assert multinomial_coeff((2, 0, 0)) == 1
    assert multinomial_coeff((1, 1, 0)) == 2
    assert multi_factorial((3, 2)) == 12
    assert multi_factorial(()) == 1


def test_multinomial_theorem_mass():
    cases = {
        1: (Fraction(1, 3), Fraction(2, 3)),
        2: (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)),
        3: (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)),
    }
    for d, p in cases.items():
        for N in range(9):
            total = Fraction(0)
            for m in enumerate_level(d, N):
                term = Fraction(multinomial_coeff(m))
                for ell, e in enumerate(m):
                    term *= p[ell] ** e
                total += term
            assert total == 1


# -- matrices ---------------------------------------------------------------------


def test_matrix_construction_and_access():
    M = Matrix(2, 3, [1, 2, 3, 4, 5, 6])
    assert M.exact
    assert M[1, 2] == 6
    assert M.row(0) == [1, 2, 3]
    assert M.col(1) == [2, 5]
    assert M.transpose().row(1) == [2, 5]
    with pytest.raises(ShapeError):
        Matrix(2, 2, [1, 2, 3])
    with pytest.raises(IndexError):
        M[2, 0]


def test_matrix_flavor_rules():
    exact = Matrix(1, 2, [Fraction(1, 2), 1])
    approx = Matrix(1, 2, [0.5, 1.0])
    assert exact.exact and not approx.exact
    with pytest.raises(FlavorError):
        Matrix(1, 2, [Fraction(1, 2), 0.5])
    with pytest.raises(FlavorError):
        Matrix(1, 2, [0.5, 1.0], exact=True)
    with pytest.raises(FlavorError):
        exact @ approx
    with pytest.raises(FlavorError):
        exact + approx
    with pytest.raises(FlavorError):
        exact.scaled(0.5)
    with pytest.raises(ValueError):
        Matrix(1, 1, [float("nan")])
    with pytest.raises(ValueError):
        Matrix(1, 1, [float("inf")], exact=False)


def test_matrix_product_known():
    A = Matrix.from_rows([[1, 2], [3, 4]])
    B = Matrix.from_rows([[0, 1], [1, 0]])
    assert (A @ B).to_rows() == [[2, 1], [4, 3]]
    assert A.apply([1, 1]) == [3, 7]
    with pytest.raises(ShapeError):
        A @ Matrix(3, 2, [0] * 6)


def test_matrix_exact_inverse_random():
    rng = random.Random(5)
    for n in (2, 3, 4):
        for _ in range(10):
            cells = [Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                     for _ in range(n * n)]
            M = Matrix(n, n, cells)
            try:
                inv = M.inverse()
            except ValueError:
                continue
            assert M @ inv == Matrix.identity(n)
            assert inv @ M == Matrix.identity(n)


def test_matrix_singular_inverse():
    with pytest.raises(ValueError, match="not invertible"):
        Matrix.from_rows([[1, 1], [1, 1]]).inverse()


def test_matrix_float_inverse():
    M = Matrix.from_rows([[2.0, 1.0], [1.0, 3.0]], exact=False)
    assert (M @ M.inverse()).allclose(Matrix.identity(2, exact=False))


def test_matrix_equality_and_conversion():
    M = Matrix.from_rows([[1, Fraction(1, 2)], [0, 1]])
    assert M == Matrix(2, 2, [1, Fraction(1, 2), 0, 1])
    assert M != M.to_float()
    F = M.to_float()
    assert not F.exact and F[0, 1] == 0.5
    assert F.to_float() is F
    assert M.diagonal_entries() == [1, 1]
    assert M.trace() == 2


def test_matrix_diagonal_builder():
    D = Matrix.diagonal([1, 2, 3])
    assert D[1, 1] == 2 and D[0, 1] == 0 and D.exact
    Df = Matrix.diagonal([1.5, 2.5], exact=False)
    assert not Df.exact and Df[1, 1] == 2.5


def test_matrices_match_witnesses():
    A = Matrix.from_rows([[1, 2], [3, 4]])
    B = Matrix.from_rows([[1, 2], [3, 5]])
    witness = matrices_match(A, B)
    assert witness == {"location": [1, 1], "actual": "4", "expected": "5"}
    assert matrices_match(A, A) is None

    Af = A.to_float()
    Bf = B.to_float()
    witness = matrices_match(Af, Bf)
    assert witness["location"] == [1, 1]
    assert witness["max_residual"] == pytest.approx(1.0)
    # tolerance comparison tolerates tiny drift
    C = Matrix.from_rows([[1.0, 2.0], [3.0, 4.0 + 1e-13]], exact=False)
    assert matrices_match(Af, C) is None
    assert matrices_match(A, Matrix.identity(3)) == {
        "location": "shape", "expected": "3x3", "actual": "2x2"}


def test_scalars_match_modes():
    assert scalars_match(Fraction(1, 3), Fraction(1, 3))
    assert not scalars_match(Fraction(1, 3), 0.3334)
    assert scalars_match(Fraction(1, 3), 0.3334, atol=1e-3)
    assert not scalars_match(Fraction(1, 3), 0.3333333333, exact=True)
    assert scalars_match(1.0, 1.0 + 1e-13)


def test_matrix_immutable():
    M = Matrix.identity(2)
    with pytest.raises(AttributeError):
        M.rows = 3
