"""Shared fixtures: small certified systems used across the suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from krawtchouk import Matrix, build_exact


def binomial_system(p: Fraction):
    """Two-point system with success weight p: A = [[1, p], [1, -(1-p)]].

    The probability vector is (1-p, p); the second column then has squared
    norm p(1-p).
    """
    q = 1 - p
    A = Matrix.from_rows([[1, p], [1, -q]])
    return build_exact(A, [q, p])


def trinomial_system():
    A = Matrix.from_rows([[1, 1, 1], [1, 1, -1], [1, -1, 0]])
    return build_exact(A, [Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)])


def hadamard3_system():
    A = Matrix.from_rows([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]])
    return build_exact(A, [Fraction(1, 4)] * 4)


def column_scaled(system, scales):
    """Fresh certified system with columns 1..d of A scaled; the K-condition
    survives any nonzero rational column scaling."""
    d = system.d
    rows = []
    for ell in range(d + 1):
        row = system.A.row(ell)
        rows.append([row[0]] + [row[j] * scales[j - 1] for j in range(1, d + 1)])
    return build_exact(Matrix.from_rows(rows), list(system.p))


def random_rational(rng: random.Random, span: int = 3, max_den: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def random_matrix(rng: random.Random, size: int, span: int = 3, max_den: int = 3) -> Matrix:
    return Matrix(size, size,
                  [random_rational(rng, span, max_den) for _ in range(size * size)])


# one line per acceptance criterion, echoed after the run so the verdicts
# survive output capture
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


@pytest.fixture
def binomial_half():
    return binomial_system(Fraction(1, 2))


@pytest.fixture
def binomial_third():
    return binomial_system(Fraction(1, 3))


@pytest.fixture
def trinomial():
    return trinomial_system()
