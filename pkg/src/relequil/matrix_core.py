"""Dense linear algebra over two backends: exact rationals and binary64.

The exact backend keeps every entry a ``fractions.Fraction`` and never
degrades to floats, so inertia, kernels, characteristic polynomials and
semisimplicity tests are decision procedures.  The float backend wraps numpy
with a single tolerance convention: rank and eigenvalue-cluster decisions
default to ``tol = 1e-8 * (1 + max_abs(A))`` and are overridable per call.

Conventions used throughout the package:

* the standard symplectic matrix is J = [[0, -I], [I, 0]];
* inertia of a symmetric matrix is the triple (morse_index, nullity,
  coindex), i.e. the counts of negative, zero and positive eigenvalues;
* subspaces are stored as tuples of basis column vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import rational_poly as rp

__all__ = [
    "RATIONAL",
    "FLOAT64",
    "Matrix",
    "Subspace",
    "IndexReport",
    "Eigenvalue",
    "SemisimplicityReport",
    "ShapeError",
    "FieldError",
    "SymmetryError",
    "SingularMatrixError",
    "IndeterminateError",
    "default_tolerance",
    "inertia",
    "kernel",
    "rank",
    "determinant",
    "char_poly",
    "minimal_poly",
    "complex_spectrum",
    "is_semisimple",
    "symplectic_reduction",
    "restrict_form",
    "standard_symplectic",
    "solve_exact",
    "in_span",
]

RATIONAL = "rational"
FLOAT64 = "float64"

Scalar = Union[Fraction, float]


class ShapeError(ValueError):
    """Operand shapes are incompatible."""


class FieldError(ValueError):
    """Operands live over different or unsupported fields."""


class SymmetryError(ValueError):
    """A matrix required to be (skew-)symmetric is not."""


class SingularMatrixError(ValueError):
    """An invertibility precondition failed."""


class IndeterminateError(RuntimeError):
    """A float-backend decision fell inside the tolerance band."""


def default_tolerance(max_abs: float) -> float:
    return 1e-8 * (1.0 + float(max_abs))


def _coerce_rational(x) -> Fraction:
    if isinstance(x, float):
        raise FieldError("float entry in a rational matrix; use the float64 field")
    return Fraction(x)


def _coerce_float(x) -> float:
    return float(x)


class Matrix:
    """Immutable dense matrix over the rational or float64 field."""

    __slots__ = ("_rows", "field")

    def __init__(self, rows: Sequence[Sequence], field: str):
        if field not in (RATIONAL, FLOAT64):
            raise FieldError(f"unknown field {field!r}")
        coerce = _coerce_rational if field == RATIONAL else _coerce_float
        data = tuple(tuple(coerce(x) for x in row) for row in rows)
        if data and any(len(r) != len(data[0]) for r in data):
            raise ShapeError("ragged rows")
        object.__setattr__(self, "_rows", data)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def rational(cls, rows) -> "Matrix":
        return cls(rows, RATIONAL)

    @classmethod
    def float64(cls, rows) -> "Matrix":
        return cls(rows, FLOAT64)

    @classmethod
    def from_numpy(cls, arr) -> "Matrix":
        return cls(np.asarray(arr, dtype=float).tolist(), FLOAT64)

    @classmethod
    def identity(cls, n: int, field: str = RATIONAL) -> "Matrix":
        one = Fraction(1) if field == RATIONAL else 1.0
        zero = Fraction(0) if field == RATIONAL else 0.0
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int, field: str = RATIONAL) -> "Matrix":
        zero = Fraction(0) if field == RATIONAL else 0.0
        return cls([[zero] * n_cols for _ in range(n_rows)], field)

    @classmethod
    def diagonal(cls, entries, field: str = RATIONAL) -> "Matrix":
        entries = list(entries)
        n = len(entries)
        zero = Fraction(0) if field == RATIONAL else 0.0
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)], field)

    # -- basic queries ------------------------------------------------

    @property
    def n_rows(self) -> int:
        return len(self._rows)

    @property
    def n_cols(self) -> int:
        return len(self._rows[0]) if self._rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return self._rows[i][j]

    def rows(self):
        return self._rows

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._rows]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self._rows], dtype=float)

    def to_float(self) -> "Matrix":
        if self.field == FLOAT64:
            return self
        return Matrix([[float(x) for x in row] for row in self._rows], FLOAT64)

    def max_abs(self) -> float:
        if not self._rows or not self._rows[0]:
            return 0.0
        return max(abs(float(x)) for row in self._rows for x in row)

    def trace(self) -> Scalar:
        if not self.is_square:
            raise ShapeError("trace of a non-square matrix")
        zero = Fraction(0) if self.field == RATIONAL else 0.0
        return sum((self._rows[i][i] for i in range(self.n_rows)), zero)

    # -- algebra ------------------------------------------------------

    def _check_same_field(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldError("mixed-field matrix operation")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise ShapeError("shape mismatch in addition")
        return Matrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._rows, other._rows)],
            self.field,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in row] for row in self._rows], self.field)

    def __mul__(self, c) -> "Matrix":
        coerce = _coerce_rational if self.field == RATIONAL else _coerce_float
        c = coerce(c)
        return Matrix([[c * x for x in row] for row in self._rows], self.field)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.n_cols != other.n_rows:
            raise ShapeError("shape mismatch in product")
        if self.field == FLOAT64:
            return Matrix.from_numpy(self.to_numpy() @ other.to_numpy())
        bt = list(zip(*other._rows)) if other._rows else []
        zero = Fraction(0)
        return Matrix(
            [[sum((a * b for a, b in zip(row, col)), zero) for col in bt] for row in self._rows],
            RATIONAL,
        )

    def matvec(self, v: Sequence) -> list:
        coerce = _coerce_rational if self.field == RATIONAL else _coerce_float
        vec = [coerce(x) for x in v]
        if len(vec) != self.n_cols:
            raise ShapeError("vector length mismatch")
        zero = Fraction(0) if self.field == RATIONAL else 0.0
        return [sum((a * b for a, b in zip(row, vec)), zero) for row in self._rows]

    @property
    def T(self) -> "Matrix":
        return Matrix(list(zip(*self._rows)) if self._rows else [], self.field)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self._rows == other._rows
        )

    def __hash__(self):
        return hash((self.field, self._rows))

    def __repr__(self) -> str:
        return f"Matrix({self.n_rows}x{self.n_cols}, {self.field})"

    def is_symmetric(self, tol: Optional[float] = None) -> bool:
        if not self.is_square:
            return False
        if self.field == RATIONAL:
            return self._rows == self.T._rows
        t = default_tolerance(self.max_abs()) if tol is None else tol
        a = self.to_numpy()
        return bool(np.max(np.abs(a - a.T), initial=0.0) <= t)

    def is_skew_symmetric(self, tol: Optional[float] = None) -> bool:
        if not self.is_square:
            return False
        if self.field == RATIONAL:
            return self._rows == (-self.T)._rows
        t = default_tolerance(self.max_abs()) if tol is None else tol
        a = self.to_numpy()
        return bool(np.max(np.abs(a + a.T), initial=0.0) <= t)

    def symmetrized(self) -> "Matrix":
        return Matrix(
            [[(self._rows[i][j] + self._rows[j][i]) / 2 for j in range(self.n_cols)]
             for i in range(self.n_rows)],
            self.field,
        )


def standard_symplectic(n: int, field: str = RATIONAL) -> Matrix:
    """The 2n x 2n matrix J = [[0, -I], [I, 0]]."""
    one = Fraction(1) if field == RATIONAL else 1.0
    zero = Fraction(0) if field == RATIONAL else 0.0
    rows = [[zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][n + i] = -one
        rows[n + i][i] = one
    return Matrix(rows, field)


# ---------------------------------------------------------------------------
# subspaces


def _exact_rank(rows: list[list[Fraction]]) -> int:
    return len(_bareiss_echelon(_cleared_int_rows(rows))[1])


@dataclass(frozen=True)
class Subspace:
    """A linear subspace given by an independent tuple of basis columns.

    Basis entries may be Fractions (exact), floats, or complex floats; the
    complex case appears in crossing kernels of Hermitian paths.
    """

    ambient_dim: int
    basis: tuple[tuple, ...]

    def __post_init__(self):
        for v in self.basis:
            if len(v) != self.ambient_dim:
                raise ShapeError("basis vector has wrong length")
        if not self.basis:
            return
        if self.is_exact:
            r = _exact_rank([list(col) for col in zip(*self.basis)])
        else:
            arr = np.array(self.basis, dtype=complex).T
            r = int(np.linalg.matrix_rank(arr))
        if r != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, (Fraction, int)) for v in self.basis for x in v)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def from_columns(cls, cols, ambient_dim: Optional[int] = None) -> "Subspace":
        cols = [tuple(c) for c in cols]
        if ambient_dim is None:
            if not cols:
                raise ValueError("ambient dimension required for an empty basis")
            ambient_dim = len(cols[0])
        return cls(ambient_dim, tuple(cols))

    def basis_numpy(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((self.ambient_dim, 0), dtype=complex)
        return np.array(self.basis, dtype=complex).T

    def contains(self, vector, tol: Optional[float] = None) -> bool:
        """Membership test: exact when both the basis and vector are exact."""
        vec = list(vector)
        if len(vec) != self.ambient_dim:
            raise ShapeError("vector has wrong length")
        if self.dimension == 0:
            if self.is_exact and all(isinstance(x, (Fraction, int)) for x in vec):
                return all(Fraction(x) == 0 for x in vec)
            return bool(np.linalg.norm(np.array(vec, dtype=complex)) <= (tol or 1e-12))
        if self.is_exact and all(isinstance(x, (Fraction, int)) for x in vec):
            cols = [list(col) for col in self.basis]
            a = [[Fraction(cols[k][i]) for k in range(self.dimension)]
                 for i in range(self.ambient_dim)]
            return solve_exact(a, [Fraction(x) for x in vec]) is not None
        arr = self.basis_numpy()
        v = np.array(vec, dtype=complex)
        c, *_ = np.linalg.lstsq(arr, v, rcond=None)
        resid = np.linalg.norm(arr @ c - v)
        scale = max(1.0, float(np.max(np.abs(v), initial=0.0)))
        t = default_tolerance(scale) if tol is None else tol
        return bool(resid <= t * scale)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class IndexReport:
    """Inertia of a symmetric form: counts of negative, zero and positive
    eigenvalues on the given subspace dimension."""

    morse_index: int
    nullity: int
    coindex: int

    def __post_init__(self):
        for v in (self.morse_index, self.nullity, self.coindex):
            if v < 0:
                raise ValueError("negative count in an inertia triple")

    @property
    def subspace_dim(self) -> int:
        return self.morse_index + self.nullity + self.coindex


@dataclass(frozen=True)
class Eigenvalue:
    value: complex
    multiplicity: int


@dataclass(frozen=True)
class SemisimplicityReport:
    """Outcome of a diagonalizability test.

    ``semisimple`` is True/False for a decided answer and None when the float
    backend could not separate a rank decision from its tolerance band.
    ``defective_eigenvalues`` approximates the eigenvalues with a nontrivial
    Jordan block when the answer is False.
    """

    semisimple: Optional[bool]
    defective_eigenvalues: tuple[complex, ...]
    backend: str
    tol: float


# ---------------------------------------------------------------------------
# exact elimination utilities


def _cleared_int_rows(rows: list[list[Fraction]]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (kernel preserving)."""
    out = []
    for row in rows:
        l = 1
        for x in row:
            l = l * x.denominator // math.gcd(l, x.denominator)
        out.append([int(x * l) for x in row])
    return out


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("non-exact division in fraction-free elimination")
    return q


def _bareiss_echelon(m: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (pivot rows, pivot columns)."""
    m = [row[:] for row in m]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    piv_cols: list[int] = []
    prev = 1
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        for i in range(r + 1, n_rows):
            for j in range(c + 1, n_cols):
                m[i][j] = _exact_div(m[r][c] * m[i][j] - m[i][c] * m[r][j], prev)
            m[i][c] = 0
        prev = m[r][c]
        piv_cols.append(c)
        r += 1
        if r == n_rows:
            break
    return m[:r], piv_cols


def _kernel_exact(rows: list[list[Fraction]], n_cols: int) -> list[list[Fraction]]:
    echelon, piv_cols = _bareiss_echelon(_cleared_int_rows(rows))
    free_cols = [c for c in range(n_cols) if c not in piv_cols]
    basis = []
    for f in free_cols:
        x = [Fraction(0)] * n_cols
        x[f] = Fraction(1)
        for row_idx in range(len(piv_cols) - 1, -1, -1):
            pc = piv_cols[row_idx]
            row = echelon[row_idx]
            s = sum((Fraction(row[j]) * x[j] for j in range(pc + 1, n_cols)), Fraction(0))
            x[pc] = -s / row[pc]
        basis.append(x)
    return basis


def solve_exact(a_rows: list[list[Fraction]], b: list[Fraction]) -> Optional[list[Fraction]]:
    """One exact solution of A x = b, or None when inconsistent."""
    n_rows = len(a_rows)
    n_cols = len(a_rows[0]) if a_rows else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a_rows)]
    piv = []
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, n_rows) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n_rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if aug[i][n_cols] != 0:
            return None
    x = [Fraction(0)] * n_cols
    for row_idx, c in enumerate(piv):
        x[c] = aug[row_idx][n_cols]
    return x


def in_span(columns: list[list[Fraction]], vector: list[Fraction]) -> bool:
    if not columns:
        return all(x == 0 for x in vector)
    a = [[columns[k][i] for k in range(len(columns))] for i in range(len(vector))]
    return solve_exact(a, vector) is not None


# ---------------------------------------------------------------------------
# inertia


def _inertia_exact(rows: list[list[Fraction]]) -> IndexReport:
    """Inertia by symmetric congruence elimination with 1x1 and 2x2 pivots."""
    a = {i: {j: x for j, x in enumerate(row)} for i, row in enumerate(rows)}
    active = list(range(len(rows)))
    pos = neg = 0
    while active:
        p = next((i for i in active if a[i][i] != 0), None)
        if p is not None:
            d = a[p][p]
            if d > 0:
                pos += 1
            else:
                neg += 1
            rest = [i for i in active if i != p]
            for i in rest:
                if a[i][p] == 0:
                    continue
                f = a[i][p] / d
                for j in rest:
                    a[i][j] -= f * a[p][j]
            active = rest
            continue
        # all diagonal entries vanish; look for an off-diagonal pivot
        pq = next(
            ((i, j) for ii, i in enumerate(active) for j in active[ii + 1:] if a[i][j] != 0),
            None,
        )
        if pq is None:
            return IndexReport(morse_index=neg, nullity=len(active), coindex=pos)
        p, q = pq
        c = a[p][q]
        # the block [[0, c], [c, 0]] contributes one positive and one negative
        pos += 1
        neg += 1
        rest = [i for i in active if i not in (p, q)]
        for i in rest:
            ui, vi = a[i][p], a[i][q]
            if ui == 0 and vi == 0:
                continue
            for j in rest:
                a[i][j] -= (ui * a[q][j] + vi * a[p][j]) / c
        active = rest
    return IndexReport(morse_index=neg, nullity=0, coindex=pos)


def _require_symmetric(b: Matrix, tol: Optional[float]) -> Matrix:
    if not b.is_square:
        raise ShapeError("symmetric operations need a square matrix")
    if b.field == RATIONAL:
        if not b.is_symmetric():
            raise SymmetryError("matrix is not exactly symmetric")
        return b
    if not b.is_symmetric(tol):
        raise SymmetryError("matrix is not symmetric within tolerance")
    return b.symmetrized()


def inertia(b: Matrix, tol: Optional[float] = None) -> IndexReport:
    """Counts of negative, zero and positive eigenvalues of a symmetric matrix.

    Exact (congruence with mixed 1x1 / 2x2 pivots) over the rationals;
    eigenvalue counting with the default tolerance over floats.
    """
    b = _require_symmetric(b, tol)
    if b.n_rows == 0:
        return IndexReport(0, 0, 0)
    if b.field == RATIONAL:
        return _inertia_exact(b.to_lists())
    t = default_tolerance(b.max_abs()) if tol is None else tol
    w = np.linalg.eigvalsh(b.to_numpy())
    neg = int(np.sum(w < -t))
    zero = int(np.sum(np.abs(w) <= t))
    return IndexReport(morse_index=neg, nullity=zero, coindex=len(w) - neg - zero)


# ---------------------------------------------------------------------------
# kernel and rank


def kernel(a: Matrix, tol: Optional[float] = None) -> Subspace:
    """Basis of the null space; exact fraction-free elimination over the
    rationals, SVD over floats."""
    if a.field == RATIONAL:
        basis = _kernel_exact(a.to_lists(), a.n_cols)
        return Subspace(a.n_cols, tuple(tuple(v) for v in basis))
    arr = a.to_numpy()
    if arr.size == 0:
        return Subspace(a.n_cols, tuple(tuple(row) for row in np.eye(a.n_cols)))
    t = default_tolerance(a.max_abs()) if tol is None else tol
    _, s, vh = np.linalg.svd(arr)
    r = int(np.sum(s > t))
    basis = vh[r:].conj()
    return Subspace(a.n_cols, tuple(tuple(float(x) for x in v) for v in basis))


def rank(a: Matrix, tol: Optional[float] = None) -> int:
    if a.field == RATIONAL:
        return _exact_rank(a.to_lists())
    arr = a.to_numpy()
    if arr.size == 0:
        return 0
    t = default_tolerance(a.max_abs()) if tol is None else tol
    s = np.linalg.svd(arr, compute_uv=False)
    return int(np.sum(s > t))


def determinant(a: Matrix) -> Scalar:
    if not a.is_square:
        raise ShapeError("determinant of a non-square matrix")
    if a.n_rows == 0:
        return Fraction(1) if a.field == RATIONAL else 1.0
    if a.field == FLOAT64:
        return float(np.linalg.det(a.to_numpy()))
    rows = a.to_lists()
    scale = Fraction(1)
    ints = []
    for row in rows:
        l = 1
        for x in row:
            l = l * x.denominator // math.gcd(l, x.denominator)
        scale *= l
        ints.append([int(x * l) for x in row])
    n = len(ints)
    sign = 1
    prev = 1
    for k in range(n - 1):
        pr = next((i for i in range(k, n) if ints[i][k] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != k:
            ints[k], ints[pr] = ints[pr], ints[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                ints[i][j] = _exact_div(ints[k][k] * ints[i][j] - ints[i][k] * ints[k][j], prev)
            ints[i][k] = 0
        prev = ints[k][k]
    return Fraction(sign * ints[n - 1][n - 1]) / scale


# ---------------------------------------------------------------------------
# characteristic and minimal polynomials (exact)


def _common_denominator(rows: list[list[Fraction]]) -> int:
    d = 1
    for row in rows:
        for x in row:
            d = d * x.denominator // math.gcd(d, x.denominator)
    return d


def _char_poly_int(m: list[list[int]]) -> list[int]:
    """Faddeev-LeVerrier over the integers; returns monic coefficients,
    lowest degree first."""
    n = len(m)
    coeffs = [0] * n + [1]  # x^n
    work = [row[:] for row in m]  # M_1 = A
    for k in range(1, n + 1):
        tr = sum(work[i][i] for i in range(n))
        a_k = -_exact_div(tr, k) if k > 1 else -tr
        coeffs[n - k] = a_k
        if k == n:
            break
        for i in range(n):
            work[i][i] += a_k
        work = [
            [sum(m[i][l] * work[l][j] for l in range(n)) for j in range(n)]
            for i in range(n)
        ]
    return coeffs


def char_poly(a: Matrix) -> list[Fraction]:
    """Monic characteristic polynomial det(xI - A), exact, lowest degree
    first.  Requires the rational field."""
    if a.field != RATIONAL:
        raise FieldError("char_poly is exact-backend only")
    if not a.is_square:
        raise ShapeError("characteristic polynomial of a non-square matrix")
    n = a.n_rows
    if n == 0:
        return [Fraction(1)]
    rows = a.to_lists()
    d = _common_denominator(rows)
    ints = [[int(x * d) for x in row] for row in rows]
    c = _char_poly_int(ints)
    # det(xI - A) = d^-n * det((dx)I - dA)
    return rp.trim([Fraction(c[k], d ** (n - k)) for k in range(n + 1)])


def minimal_poly(a: Matrix) -> list[Fraction]:
    """Monic minimal polynomial, exact, found as the first linear dependence
    among the flattened powers I, A, A^2, ..."""
    if a.field != RATIONAL:
        raise FieldError("minimal_poly is exact-backend only")
    if not a.is_square:
        raise ShapeError("minimal polynomial of a non-square matrix")
    n = a.n_rows
    if n == 0:
        return [Fraction(1)]
    rows = a.to_lists()
    power = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    # reduced[k] = (vector, pivot index, combination over earlier powers)
    reduced: list[tuple[list[Fraction], int, list[Fraction]]] = []
    k = 0
    while True:
        vec = [power[i][j] for i in range(n) for j in range(n)]
        combo = [Fraction(0)] * k + [Fraction(1)]
        for rvec, piv, rcombo in reduced:
            f = vec[piv]
            if f != 0:
                vec = [x - f * y for x, y in zip(vec, rvec)]
                combo = [
                    (combo[i] if i < len(combo) else Fraction(0))
                    - f * (rcombo[i] if i < len(rcombo) else Fraction(0))
                    for i in range(max(len(combo), len(rcombo)))
                ]
        piv = next((i for i, x in enumerate(vec) if x != 0), None)
        if piv is None:
            # A^k = sum over lower powers; monic minimal polynomial
            lead = combo[k]
            return rp.trim([c / lead for c in combo])
        inv = 1 / vec[piv]
        reduced.append(([x * inv for x in vec], piv, [c * inv for c in combo]))
        power = [
            [sum((rows[i][l] * power[l][j] for l in range(n)), Fraction(0)) for j in range(n)]
            for i in range(n)
        ]
        k += 1
        if k > n:
            raise AssertionError("power dependence not found by degree n")


# ---------------------------------------------------------------------------
# spectra


def _polish_root(coeffs_float: list[float], z: complex, steps: int = 3) -> complex:
    dcoeffs = [i * c for i, c in enumerate(coeffs_float)][1:]

    def ev(cs, x):
        acc = 0.0 + 0.0j
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    best = z
    best_val = abs(ev(coeffs_float, z))
    for _ in range(steps):
        dp = ev(dcoeffs, best)
        if dp == 0:
            break
        cand = best - ev(coeffs_float, best) / dp
        v = abs(ev(coeffs_float, cand))
        if v < best_val:
            best, best_val = cand, v
        else:
            break
    return best


def complex_spectrum(a: Matrix, tol: Optional[float] = None) -> tuple[Eigenvalue, ...]:
    """Eigenvalues with algebraic multiplicities.

    Exact backend: multiplicities come from the square-free decomposition of
    the characteristic polynomial, values from polished numeric roots of the
    square-free factors.  Float backend: numpy eigenvalues clustered within
    the tolerance.
    """
    if not a.is_square:
        raise ShapeError("spectrum of a non-square matrix")
    if a.n_rows == 0:
        return ()
    if a.field == RATIONAL:
        p = char_poly(a)
        out: list[Eigenvalue] = []
        for factor, m in rp.squarefree_decomposition(p):
            cf = [float(c) for c in factor]
            roots = np.roots(list(reversed(cf))) if rp.degree(factor) >= 1 else []
            for z in roots:
                z = _polish_root(cf, complex(z))
                out.append(Eigenvalue(value=complex(z), multiplicity=m))
        out.sort(key=lambda e: (e.value.real, e.value.imag))
        return tuple(out)
    t = default_tolerance(a.max_abs()) if tol is None else tol
    w = sorted(np.linalg.eigvals(a.to_numpy()), key=lambda z: (z.real, z.imag))
    clusters: list[list[complex]] = []
    for z in w:
        placed = False
        for cl in clusters:
            if abs(z - cl[0]) <= t:
                cl.append(z)
                placed = True
                break
        if not placed:
            clusters.append([complex(z)])
    out = [
        Eigenvalue(value=complex(np.mean(cl)), multiplicity=len(cl)) for cl in clusters
    ]
    out.sort(key=lambda e: (e.value.real, e.value.imag))
    return tuple(out)


def is_semisimple(a: Matrix, tol: Optional[float] = None) -> SemisimplicityReport:
    """Diagonalizability over the complex numbers.

    Exact backend: the minimal polynomial m is square-free iff gcd(m, m') is
    constant; the roots of the gcd name the defective eigenvalues.  Float
    backend: rank(A - zI) versus rank((A - zI)^2) per eigenvalue cluster,
    with an indeterminate outcome when a singular value lands inside the
    band [tol/10, 10*tol].
    """
    if not a.is_square:
        raise ShapeError("semisimplicity of a non-square matrix")
    if a.field == RATIONAL:
        m = minimal_poly(a)
        g = rp.gcd(m, rp.derivative(m))
        if rp.degree(g) <= 0:
            return SemisimplicityReport(True, (), RATIONAL, 0.0)
        cf = [float(c) for c in g]
        roots = tuple(
            complex(_polish_root(cf, complex(z))) for z in np.roots(list(reversed(cf)))
        )
        roots = tuple(sorted(roots, key=lambda z: (z.real, z.imag)))
        return SemisimplicityReport(False, roots, RATIONAL, 0.0)
    t = default_tolerance(a.max_abs()) if tol is None else tol
    arr = a.to_numpy()
    n = arr.shape[0]

    def banded_rank(mat: np.ndarray, cutoff: float) -> Optional[int]:
        s = np.linalg.svd(mat, compute_uv=False)
        if np.any((s > cutoff / 10) & (s < cutoff * 10)):
            return None
        return int(np.sum(s > cutoff))

    defective: list[complex] = []
    indeterminate = False
    for ev in complex_spectrum(a, tol=t):
        if ev.multiplicity == 1:
            continue
        e = arr - ev.value * np.eye(n)
        r1 = banded_rank(e, t)
        r2 = banded_rank(e @ e, t * max(1.0, float(np.max(np.abs(e)))))
        if r1 is None or r2 is None:
            indeterminate = True
            continue
        if r1 != r2:
            defective.append(ev.value)
    if indeterminate and not defective:
        return SemisimplicityReport(None, (), FLOAT64, t)
    if defective:
        return SemisimplicityReport(False, tuple(defective), FLOAT64, t)
    return SemisimplicityReport(True, (), FLOAT64, t)


# ---------------------------------------------------------------------------
# symplectic reduction


def symplectic_reduction(omega: Matrix, tol: Optional[float] = None) -> Matrix:
    """Invertible Q with Q J Q^T = Omega for an invertible skew Omega.

    Built from a symplectic (Darboux) basis of the bilinear form
    w(x, y) = x^T Omega y via skew Gram-Schmidt; Q is the inverse transpose
    of the basis matrix.  Exact over the rationals; over floats the result is
    validated against ``tol``.
    """
    if not omega.is_square or omega.n_rows % 2 != 0:
        raise ShapeError("an invertible skew form needs even dimension")
    two_n = omega.n_rows
    n = two_n // 2
    exact = omega.field == RATIONAL
    if exact:
        if not omega.is_skew_symmetric():
            raise SymmetryError("matrix is not exactly skew-symmetric")
        rows = omega.to_lists()
        zero = Fraction(0)

        def w(x, y):
            return sum(
                (x[i] * sum((rows[i][j] * y[j] for j in range(two_n)), zero)
                 for i in range(two_n)),
                zero,
            )

        seeds = [[Fraction(1) if i == k else Fraction(0) for i in range(two_n)]
                 for k in range(two_n)]
        us, vs = [], []
        for _ in range(n):
            u = next((s for s in seeds if any(x != 0 for x in s)), None)
            if u is None:
                raise SingularMatrixError("skew form is degenerate")
            partner = None
            for s in seeds:
                c = w(u, s)
                if c != 0:
                    partner = (s, c)
                    break
            if partner is None:
                raise SingularMatrixError("skew form is degenerate")
            wvec, c = partner
            v = [x * (-1 / c) for x in wvec]  # w(u, v) = -1
            new_seeds = []
            for s in seeds:
                a = w(v, s)
                b = w(u, s)
                new_seeds.append([si - a * ui + b * vi for si, ui, vi in zip(s, u, v)])
            seeds = new_seeds
            us.append(u)
            vs.append(v)
        p_cols = us + vs
        p_rows = [[p_cols[k][i] for k in range(two_n)] for i in range(two_n)]
        q_rows = _invert_transpose_exact(p_rows)
        q = Matrix(q_rows, RATIONAL)
        j = standard_symplectic(n)
        if (q @ j @ q.T) != omega:
            raise AssertionError("symplectic reduction failed to reproduce the form")
        return q
    t = default_tolerance(omega.max_abs()) if tol is None else tol
    if not omega.is_skew_symmetric(t):
        raise SymmetryError("matrix is not skew-symmetric within tolerance")
    arr = omega.to_numpy()
    arr = (arr - arr.T) / 2
    seeds = [np.eye(two_n)[:, k].copy() for k in range(two_n)]
    us, vs = [], []
    for _ in range(n):
        norms = [float(np.linalg.norm(s)) for s in seeds]
        iu = int(np.argmax(norms))
        if norms[iu] <= t:
            raise SingularMatrixError("skew form is numerically degenerate")
        u = seeds[iu]
        vals = [float(abs(u @ arr @ s)) for s in seeds]
        iv = int(np.argmax(vals))
        c = u @ arr @ seeds[iv]
        if abs(c) <= t:
            raise SingularMatrixError("skew form is numerically degenerate")
        v = seeds[iv] * (-1.0 / c)
        seeds = [s - (v @ arr @ s) * u + (u @ arr @ s) * v for s in seeds]
        us.append(u)
        vs.append(v)
    p = np.column_stack(us + vs)
    q_arr = np.linalg.inv(p).T
    j = standard_symplectic(n, FLOAT64).to_numpy()
    resid = float(np.max(np.abs(q_arr @ j @ q_arr.T - omega.to_numpy())))
    if resid > max(t, default_tolerance(omega.max_abs())) * 100:
        raise SingularMatrixError(f"reduction residual {resid:.3e} exceeds tolerance")
    return Matrix.from_numpy(q_arr)


def _invert_transpose_exact(p_rows: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(p_rows)
    aug = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i, row in enumerate(p_rows)]
    for c in range(n):
        pr = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pr is None:
            raise SingularMatrixError("basis matrix is singular")
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    # rows of P^-1 are aug[:, n:]; Q = (P^-1)^T
    pinv = [row[n:] for row in aug]
    return [[pinv[j][i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# restriction of forms


def restrict_form(b: Matrix, w: Subspace) -> Matrix:
    """Gram matrix of the symmetric form b on the basis of w."""
    if b.n_rows != w.ambient_dim:
        raise ShapeError("form and subspace have different ambient dimensions")
    _require_symmetric(b, None)
    if w.dimension == 0:
        return Matrix.zeros(0, 0, b.field)
    if b.field == RATIONAL:
        if not w.is_exact:
            raise FieldError("rational form restricted to a non-exact basis")
        cols = [[Fraction(x) for x in v] for v in w.basis]
        bw = [b.matvec(v) for v in cols]
        gram = [[sum((x * y for x, y in zip(cols[i], bw[j])), Fraction(0))
                 for j in range(w.dimension)] for i in range(w.dimension)]
        return Matrix(gram, RATIONAL)
    z = np.real_if_close(w.basis_numpy())
    if np.iscomplexobj(z):
        raise FieldError("restrict_form expects a real basis")
    z = z.astype(float)
    return Matrix.from_numpy(z.T @ b.to_numpy() @ z)
