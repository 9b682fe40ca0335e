"""Symmetric-power matrices on homogeneous polynomials.

A square matrix A acting on variables by v -> A.v induces a matrix on the
degree-N monomials: the row at multi-index m lists the coefficients of the
expansion of prod_l (row_l(A) . v)^(m_l).  Multiplicativity and the
transpose relation of that construction are exposed as named checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (DEFAULT_ATOL, DEFAULT_RTOL, LevelBasis, Matrix, ShapeError,
                   enumerate_level, matrices_match, multinomial_coeff)
from .report import CheckResult, VerificationReport


@dataclass(frozen=True)
class InducedMatrix:
    base_dim: int
    level: int
    basis: LevelBasis
    matrix: Matrix


def _mul_linear(poly: dict, coeffs: list) -> dict:
    # one multiplication by the linear form sum_j coeffs[j] * v_j
    out: dict = {}
    for exp, c in poly.items():
        for j, a in enumerate(coeffs):
            if not a:
                continue
            key = exp[:j] + (exp[j] + 1,) + exp[j + 1:]
            prev = out.get(key)
            out[key] = c * a if prev is None else prev + c * a
    return out


def induced_matrix(A: Matrix, N: int) -> InducedMatrix:
    """Symmetric N-th power of a square matrix, rows in dictionary order."""
    if not A.is_square:
        raise ShapeError("induced matrix of a non-square base")
    if N < 0:
        raise ValueError(f"level must be nonnegative, got {N}")
    d = A.rows - 1
    basis = enumerate_level(d, N)
    one = Fraction(1) if A.exact else 1.0
    zero = Fraction(0) if A.exact else 0.0
    start = (0,) * (d + 1)
    entries = []
    for m in basis:
        poly = {start: one}
        for ell in range(d + 1):
            row = A.row(ell)
            for _ in range(m[ell]):
                poly = _mul_linear(poly, row)
        entries.extend(poly.get(n, zero) for n in basis)
    size = len(basis)
    return InducedMatrix(d + 1, N, basis, Matrix(size, size, entries, exact=A.exact))


def binomial_diag(d: int, N: int) -> Matrix:
    """Diagonal of multinomial coefficients over the level-N basis."""
    basis = enumerate_level(d, N)
    return Matrix.diagonal([Fraction(multinomial_coeff(m)) for m in basis])


def _inverse_binomial_diag(d: int, N: int, exact: bool) -> Matrix:
    basis = enumerate_level(d, N)
    if exact:
        return Matrix.diagonal([Fraction(1, multinomial_coeff(m)) for m in basis])
    return Matrix.diagonal([1.0 / multinomial_coeff(m) for m in basis], exact=False)


def check_homomorphism(A1: Matrix, A2: Matrix, N: int, product: Matrix | None = None,
                       atol: float = DEFAULT_ATOL, rtol: float = DEFAULT_RTOL) -> VerificationReport:
    """Induced matrix of a product vs product of induced matrices.

    `product` defaults to A1 @ A2; passing a precomputed product lets a
    caller certify that the claimed product really multiplies through.
    """
    if A1.rows != A2.rows or not A1.is_square or not A2.is_square:
        raise ShapeError("homomorphism check needs square matrices of equal size")
    if product is None:
        product = A1 @ A2
    lhs = induced_matrix(product, N).matrix
    rhs = induced_matrix(A1, N).matrix @ induced_matrix(A2, N).matrix
    witness = matrices_match(lhs, rhs, atol, rtol)
    return VerificationReport.single(CheckResult.from_witness("homomorphism", witness))


def check_transpose_lemma(A: Matrix, N: int, atol: float = DEFAULT_ATOL,
                          rtol: float = DEFAULT_RTOL) -> VerificationReport:
    """Induced matrix of the transpose vs B^-1 (induced A)^T B."""
    if not A.is_square:
        raise ShapeError("transpose check needs a square matrix")
    d = A.rows - 1
    lhs = induced_matrix(A.transpose(), N).matrix
    B = binomial_diag(d, N)
    Binv = _inverse_binomial_diag(d, N, A.exact)
    if not A.exact:
        B = B.to_float()
    rhs = Binv @ induced_matrix(A, N).matrix.transpose() @ B
    witness = matrices_match(lhs, rhs, atol, rtol)
    return VerificationReport.single(CheckResult.from_witness("transpose", witness))
