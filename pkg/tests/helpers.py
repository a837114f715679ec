"""Independent oracles for the test suite.

Everything here is deliberately written from scratch against the textbook
definitions (Gaussian elimination, Lagrange interpolation, finite
differences, dense eigensolvers) so that agreement with the package is
evidence rather than tautology.  Frozen before the acceptance suite was
written; changes here invalidate the acceptance results.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

import numpy as np


# ---------------------------------------------------------------------------
# exact linear algebra, the slow and obvious way


def det_gauss(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-free-less Gaussian elimination with row swaps."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] * inv
            if factor:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return det


def char_poly_lagrange(rows: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """Coefficients of det(xI - A), lowest degree first, via evaluation at
    x = 0..n and Lagrange interpolation."""
    n = len(rows)
    xs = [Fraction(k) for k in range(n + 1)]
    ys = []
    for x in xs:
        shifted = [[(x if i == j else 0) - Fraction(rows[i][j]) for j in range(n)]
                   for i in range(n)]
        ys.append(det_gauss(shifted))
    coeffs = [Fraction(0)] * (n + 1)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            denom *= xi - xj
            new = [Fraction(0)] * (len(basis) + 1)
            for k, b in enumerate(basis):
                new[k + 1] += b
                new[k] -= xj * b
            basis = new
        scale = yi / denom
        for k, b in enumerate(basis):
            coeffs[k] += scale * b
    return coeffs


def kernel_dim_gauss(rows: Sequence[Sequence[Fraction]]) -> int:
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    rank = 0
    row = 0
    for col in range(n_cols):
        pivot = next((r for r in range(row, n_rows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        inv = 1 / a[row][col]
        for r in range(n_rows):
            if r != row and a[r][col] != 0:
                f = a[r][col] * inv
                for c in range(n_cols):
                    a[r][c] -= f * a[row][c]
        rank += 1
        row += 1
    return n_cols - rank


# ---------------------------------------------------------------------------
# float spectral oracles


def eig_inertia(sym_rows, tol: float = 1e-9) -> Tuple[int, int, int]:
    """(negative, zero, positive) eigenvalue counts of a symmetric matrix."""
    vals = np.linalg.eigvalsh(np.array(sym_rows, dtype=float))
    neg = int(np.sum(vals < -tol))
    pos = int(np.sum(vals > tol))
    return neg, len(vals) - neg - pos, pos


def standard_j(n: int) -> np.ndarray:
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    return j


def jb_eigenvalues(b_rows) -> np.ndarray:
    b = np.array(b_rows, dtype=float)
    n = b.shape[0] // 2
    return np.linalg.eigvals(standard_j(n) @ b)


def spectrum_on_axis_float(b_rows, tol: float = 1e-9) -> bool:
    return bool(np.all(np.abs(jb_eigenvalues(b_rows).real) <= tol))


def kappa_float(b_rows, tol: float = 1e-9) -> int:
    """Number of s > 0 with det(B + s * iJ) = 0, with multiplicity: half the
    count of nonzero purely imaginary eigenvalues of J B."""
    vals = jb_eigenvalues(b_rows)
    on_axis_nonzero = np.sum((np.abs(vals.real) <= tol) & (np.abs(vals.imag) > tol))
    return int(on_axis_nonzero) // 2


# ---------------------------------------------------------------------------
# finite differences


def fd_gradient(f: Callable[[np.ndarray], float], x: np.ndarray,
                h: float = 1e-6) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def fd_hessian(f: Callable[[np.ndarray], float], x: np.ndarray,
               h: float = 1e-4) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    m = x.size
    out = np.zeros((m, m))
    for i in range(m):
        ei = np.zeros(m)
        ei[i] = h
        for j in range(i, m):
            ej = np.zeros(m)
            ej[j] = h
            val = (f(x + ei + ej) - f(x + ei - ej)
                   - f(x - ei + ej) + f(x - ei - ej)) / (4 * h * h)
            out[i, j] = out[j, i] = val
    return out


def nbody_potential(masses: Sequence[float], alpha: float,
                    flat: np.ndarray) -> float:
    pts = np.asarray(flat, dtype=float).reshape(-1, 2)
    total = 0.0
    for i in range(len(masses)):
        for j in range(i + 1, len(masses)):
            total += masses[i] * masses[j] / np.linalg.norm(pts[i] - pts[j]) ** alpha
    return total


# ---------------------------------------------------------------------------
# random generators


def random_fraction(rng: random.Random, num: int = 4, den: int = 3) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_symmetric(rng: random.Random, dim: int, num: int = 4,
                     den: int = 3) -> List[List[Fraction]]:
    rows = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            rows[i][j] = rows[j][i] = random_fraction(rng, num, den)
    return rows


def random_invertible_symmetric(rng: random.Random, dim: int,
                                num: int = 4, den: int = 3):
    while True:
        rows = random_symmetric(rng, dim, num, den)
        if det_gauss(rows) != 0:
            return rows


def pair_diagonal(pairs: Sequence[Tuple[Fraction, Fraction]]):
    """diag(b_1..b_n, b_{n+1}..b_{2n}) with (b_k, b_{n+k}) given as pairs."""
    n = len(pairs)
    rows = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for k, (a, b) in enumerate(pairs):
        rows[k][k] = Fraction(a)
        rows[n + k][n + k] = Fraction(b)
    return rows


def random_noncollision_config(rng: random.Random, n: int,
                               min_gap: float = 0.3):
    while True:
        pts = [(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(n)]
        ok = all(math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]) > min_gap
                 for i in range(n) for j in range(i + 1, n))
        if ok:
            return pts
