"""Scalars, multi-index enumeration, and dense matrices.

Two scalar flavors run through the whole package: exact values are
`fractions.Fraction`, approximate values are 64-bit floats.  A matrix
holds one flavor only, and the only permitted conversion is exact to
float (`Matrix.to_float`); there is no route back.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

DEFAULT_ATOL = 1e-12
DEFAULT_RTOL = 1e-9

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


class ShapeError(ValueError):
    """Matrix dimensions do not fit the requested operation."""


class FlavorError(TypeError):
    """Exact and approximate scalars were mixed."""


def parse_rational(text: str) -> Fraction:
    """Parse the wire encoding of a rational: "a/b" or a bare integer "a"."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text.strip())


def format_rational(value) -> str:
    """Render a Fraction (or int) as "a/b", or "a" when the denominator is 1."""
    num, den = value.numerator, value.denominator
    return str(num) if den == 1 else f"{num}/{den}"


def scalars_match(a, b, atol: float = DEFAULT_ATOL, rtol: float = DEFAULT_RTOL,
                  exact: bool | None = None) -> bool:
    """Flavor-aware scalar comparison.

    Exact pairs compare literally; anything involving a float compares
    within |a - b| <= atol + rtol * max(|a|, |b|).
    """
    if exact is None:
        exact = not (isinstance(a, float) or isinstance(b, float))
    if exact:
        return a == b
    fa, fb = float(a), float(b)
    return abs(fa - fb) <= atol + rtol * max(abs(fa), abs(fb))


class MultiIndex(tuple):
    """Nonnegative integer exponent tuple; doubles as a lattice point."""

    __slots__ = ()

    def __new__(cls, exponents):
        exps = tuple(operator.index(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        return super().__new__(cls, exps)

    @property
    def degree(self) -> int:
        return sum(self)

    def shifted(self, pos: int, delta: int = 1) -> "MultiIndex":
        """Return a copy with component `pos` moved by `delta`."""
        if not 0 <= pos < len(self):
            raise IndexError(f"component {pos} out of range")
        bumped = list(self)
        bumped[pos] += delta
        return MultiIndex(bumped)


def multinomial_coeff(m) -> int:
    """|m|! / (m_0! ... m_d!) for a multi-index m."""
    m = MultiIndex(m)
    out = math.factorial(m.degree)
    for e in m:
        out //= math.factorial(e)
    return out


def multi_factorial(n) -> int:
    """Componentwise factorial product n_1! ... n_d!."""
    out = 1
    for e in n:
        out *= math.factorial(operator.index(e))
    return out


def _compositions(total: int, slots: int):
    # leading coordinate counts down first, which yields dictionary order
    if slots == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _compositions(total - head, slots - 1):
            yield (head,) + tail


@dataclass(frozen=True)
class LevelBasis:
    """All degree-N monomial exponents in d+1 variables, dictionary order.

    Position 0 is (N, 0, ..., 0) and the last position is (0, ..., 0, N).
    The same tuples index the lattice points of the scaled simplex, so one
    rank table serves both polynomial labels and evaluation points.
    """

    d: int
    N: int
    indices: tuple[MultiIndex, ...]
    rank_table: dict = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def rank(self, m) -> int:
        m = tuple(m)
        if len(m) != self.d + 1:
            raise ValueError(
                f"dimension mismatch: index has {len(m)} components, basis needs {self.d + 1}")
        if sum(m) != self.N:
            raise ValueError(
                f"degree mismatch: index {m} has degree {sum(m)}, basis holds degree {self.N}")
        return self.rank_table[m]

    def unrank(self, position: int) -> MultiIndex:
        return self.indices[position]


@lru_cache(maxsize=None)
def enumerate_level(d: int, N: int) -> LevelBasis:
    """Basis of all multi-indices of degree N in d+1 slots."""
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    if N < 0:
        raise ValueError(f"level must be nonnegative, got {N}")
    indices = tuple(MultiIndex(m) for m in _compositions(N, d + 1))
    expected = math.comb(N + d, d)
    if len(indices) != expected:
        raise RuntimeError("enumeration lost entries")  # pragma: no cover
    table = {m: i for i, m in enumerate(indices)}
    return LevelBasis(d, N, indices, table)


def _coerce_exact(value):
    if isinstance(value, float):
        raise FlavorError("float entry in an exact matrix")
    if isinstance(value, Fraction):
        return value
    return Fraction(operator.index(value))


def _coerce_approx(value):
    out = float(value)
    if not math.isfinite(out):
        raise ValueError(f"non-finite entry {value!r} in an approximate matrix")
    return out


class Matrix:
    """Immutable dense matrix over one scalar flavor.

    Entries are stored row-major.  The flavor is inferred from the entries
    unless `exact` is passed explicitly: any float forces the approximate
    flavor, and mixing floats with Fractions is an error.  Approximate
    entries must be finite.
    """

    __slots__ = ("rows", "cols", "exact", "_cells")

    def __init__(self, rows: int, cols: int, entries, exact: bool | None = None):
        cells = list(entries)
        if rows <= 0 or cols <= 0:
            raise ShapeError(f"bad shape {rows}x{cols}")
        if len(cells) != rows * cols:
            raise ShapeError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(cells)}")
        if exact is None:
            has_float = any(isinstance(c, float) for c in cells)
            has_frac = any(isinstance(c, Fraction) for c in cells)
            if has_float and has_frac:
                raise FlavorError("entries mix Fractions and floats")
            exact = not has_float
        coerce = _coerce_exact if exact else _coerce_approx
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "_cells", tuple(coerce(c) for c in cells))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_rows(cls, rows, exact: bool | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows:
            raise ShapeError("no rows")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        flat = [c for r in rows for c in r]
        return cls(len(rows), width, flat, exact=exact)

    @classmethod
    def identity(cls, n: int, exact: bool = True) -> "Matrix":
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)], exact=exact)

    @classmethod
    def zeros(cls, rows: int, cols: int, exact: bool = True) -> "Matrix":
        zero = Fraction(0) if exact else 0.0
        return cls(rows, cols, [zero] * (rows * cols), exact=exact)

    @classmethod
    def diagonal(cls, entries, exact: bool | None = None) -> "Matrix":
        diag = list(entries)
        n = len(diag)
        probe = cls(1, n, diag, exact=exact)  # reuse flavor inference
        zero = Fraction(0) if probe.exact else 0.0
        cells = [zero] * (n * n)
        for i, v in enumerate(probe._cells):
            cells[i * n + i] = v
        return cls(n, n, cells, exact=probe.exact)

    # -- access ----------------------------------------------------------------

    @property
    def entries(self) -> tuple:
        return self._cells

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key):
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return self._cells[i * self.cols + j]

    def row(self, i: int) -> list:
        if not 0 <= i < self.rows:
            raise IndexError(f"row {i} outside {self.rows}x{self.cols}")
        return list(self._cells[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list:
        if not 0 <= j < self.cols:
            raise IndexError(f"col {j} outside {self.rows}x{self.cols}")
        return list(self._cells[j::self.cols])

    def diagonal_entries(self) -> list:
        if not self.is_square:
            raise ShapeError("diagonal of a non-square matrix")
        return [self._cells[i * self.cols + i] for i in range(self.rows)]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    # -- arithmetic --------------------------------------------------------------

    def _require_flavor(self, other: "Matrix"):
        if self.exact != other.exact:
            raise FlavorError("cannot combine exact and approximate matrices")

    def transpose(self) -> "Matrix":
        cells = [self._cells[i * self.cols + j]
                 for j in range(self.cols) for i in range(self.rows)]
        return Matrix(self.cols, self.rows, cells, exact=self.exact)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._require_flavor(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in addition")
        cells = [a + b for a, b in zip(self._cells, other._cells)]
        return Matrix(self.rows, self.cols, cells, exact=self.exact)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Matrix(self.rows, self.cols, [-c for c in self._cells], exact=self.exact)

    def scaled(self, s) -> "Matrix":
        if self.exact and isinstance(s, float):
            raise FlavorError("float scale on an exact matrix")
        s = s if self.exact else float(s)
        return Matrix(self.rows, self.cols, [s * c for c in self._cells], exact=self.exact)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._require_flavor(other)
        if self.cols != other.rows:
            raise ShapeError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        oc = other.cols
        zero = Fraction(0) if self.exact else 0.0
        out = [zero] * (self.rows * oc)
        a_cells, b_cells = self._cells, other._cells
        for i in range(self.rows):
            abase = i * self.cols
            rbase = i * oc
            for k in range(self.cols):
                a = a_cells[abase + k]
                if not a:
                    continue
                bbase = k * oc
                for j in range(oc):
                    b = b_cells[bbase + j]
                    if b:
                        out[rbase + j] += a * b
        return Matrix(self.rows, oc, out, exact=self.exact)

    def apply(self, vector) -> list:
        """Matrix-vector product, returned as a plain list."""
        vec = list(vector)
        if len(vec) != self.cols:
            raise ShapeError(f"vector of length {len(vec)} against {self.rows}x{self.cols}")
        zero = Fraction(0) if self.exact else 0.0
        out = []
        for i in range(self.rows):
            base = i * self.cols
            acc = zero
            for k, v in enumerate(vec):
                if v:
                    a = self._cells[base + k]
                    if a:
                        acc += a * v
            out.append(acc)
        return out

    def trace(self):
        return sum(self.diagonal_entries())

    def inverse(self) -> "Matrix":
        """Gauss-Jordan inverse with partial pivoting; exact over Fractions."""
        if not self.is_square:
            raise ShapeError("inverse of a non-square matrix")
        n = self.rows
        work = [self.row(i) for i in range(n)]
        aug = Matrix.identity(n, exact=self.exact).to_rows()
        for col in range(n):
            pivot_row = max(range(col, n), key=lambda r: abs(work[r][col]))
            if not work[pivot_row][col]:
                raise ValueError("matrix is not invertible")
            if pivot_row != col:
                work[col], work[pivot_row] = work[pivot_row], work[col]
                aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
            pivot = work[col][col]
            work[col] = [v / pivot for v in work[col]]
            aug[col] = [v / pivot for v in aug[col]]
            for r in range(n):
                if r == col:
                    continue
                factor = work[r][col]
                if not factor:
                    continue
                work[r] = [v - factor * w for v, w in zip(work[r], work[col])]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
        return Matrix.from_rows(aug, exact=self.exact)

    def to_float(self) -> "Matrix":
        """Explicit, lossy conversion to the approximate flavor."""
        if not self.exact:
            return self
        return Matrix(self.rows, self.cols, [float(c) for c in self._cells], exact=False)

    # -- comparison ---------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.exact == other.exact
                and (self.rows, self.cols) == (other.rows, other.cols)
                and self._cells == other._cells)

    __hash__ = None

    def allclose(self, other: "Matrix", atol: float = DEFAULT_ATOL,
                 rtol: float = DEFAULT_RTOL) -> bool:
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(scalars_match(a, b, atol, rtol, exact=False)
                   for a, b in zip(self._cells, other._cells))

    def __repr__(self):
        flavor = "exact" if self.exact else "approx"
        return f"Matrix({self.rows}x{self.cols}, {flavor})"


def _render(value, exact: bool) -> str:
    return format_rational(value) if exact else repr(value)


def matrices_match(lhs: Matrix, rhs: Matrix, atol: float = DEFAULT_ATOL,
                   rtol: float = DEFAULT_RTOL) -> dict | None:
    """Compare two matrices, literal when both are exact, else within tolerance.

    Returns None on success, otherwise a witness dict with the first
    offending location, both entries, and (tolerance path) the largest
    absolute deviation.
    """
    if (lhs.rows, lhs.cols) != (rhs.rows, rhs.cols):
        return {"location": "shape",
                "expected": f"{rhs.rows}x{rhs.cols}",
                "actual": f"{lhs.rows}x{lhs.cols}"}
    exact = lhs.exact and rhs.exact
    first = None
    max_dev = 0.0
    for i in range(lhs.rows):
        for j in range(lhs.cols):
            a, b = lhs[i, j], rhs[i, j]
            if scalars_match(a, b, atol, rtol, exact=exact):
                continue
            if first is None:
                first = {"location": [i, j],
                         "actual": _render(a, lhs.exact),
                         "expected": _render(b, rhs.exact)}
            if not exact:
                max_dev = max(max_dev, abs(float(a) - float(b)))
    if first is None:
        return None
    if not exact:
        first["max_residual"] = max_dev
    return first
