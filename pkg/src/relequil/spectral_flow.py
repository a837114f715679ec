"""Spectral flow of paths of self-adjoint matrices and Krein-form tools.

The spectral flow of a path counts eigenvalues moving across zero, with
sign.  At a regular crossing the contribution is the signature of the
crossing form, the path derivative compressed to the kernel.  Endpoint
kernels contribute boundary terms: the flow convention here is

    flow = sum of interior signatures
           - dim E_-(Cr[A(start)]) + dim E_+(Cr[A(end)])

with empty endpoint kernels contributing nothing.  Interior crossings with a
degenerate crossing form carry no well-defined count and are refused.

Two path types are supported: the straight segment between two real
symmetric matrices, and the Krein deformation B + s*G with G = i*J, whose
crossings at s >= 0 sit exactly where J B has eigenvalue i*s.  For rational
input both use exact determinant polynomials, so crossing locations and
multiplicities carry proofs; kernels at irrational locations are then
extracted in floating point at exactly isolated positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import rational_poly as rp
from .matrix_core import (
    FLOAT64,
    RATIONAL,
    FieldError,
    IndeterminateError,
    Matrix,
    ShapeError,
    Subspace,
    _exact_rank,
    char_poly,
    default_tolerance,
    determinant,
    inertia,
    kernel,
    rank,
    restrict_form,
    standard_symplectic,
)
from .stability import classify

__all__ = [
    "IrregularCrossingError",
    "LinearPath",
    "KreinPath",
    "Crossing",
    "SpectralFlowResult",
    "KappaIdentity",
    "KreinSignatureReport",
    "krein_form",
    "spectral_flow",
    "relative_morse_index",
    "crossing_set",
    "kappa_identity_check",
    "krein_signature",
]


class IrregularCrossingError(RuntimeError):
    """An interior crossing has a degenerate crossing form."""

    def __init__(self, location: float, detail: str = ""):
        self.location = location
        msg = f"irregular crossing at parameter {location!r}"
        super().__init__(msg + (": " + detail if detail else ""))


def krein_form(n: int) -> np.ndarray:
    """The Hermitian form G = i*J on C^2n; G^2 = I and G has signature 0."""
    if n < 0:
        raise ShapeError("n must be nonnegative")
    g = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        g[i, n + i] = -1j
        g[n + i, i] = 1j
    return g


@dataclass(frozen=True)
class LinearPath:
    """The segment A(t) = (1-t) start + t end of symmetric matrices, t in [0,1]."""

    start: Matrix
    end: Matrix

    def __post_init__(self):
        if self.start.shape != self.end.shape or not self.start.is_square:
            raise ShapeError("path endpoints must be square matrices of equal size")
        if self.start.field != self.end.field:
            raise FieldError("path endpoints must share a backend field")
        for m in (self.start, self.end):
            if not m.is_symmetric():
                raise ValueError("path endpoints must be symmetric")

    @property
    def dim(self) -> int:
        return self.start.n_rows

    @property
    def field(self) -> str:
        return self.start.field

    def value(self, t) -> Matrix:
        one = Fraction(1) if self.field == RATIONAL else 1.0
        return self.start * (one - t) + self.end * t

    @property
    def derivative(self) -> Matrix:
        return self.end - self.start


@dataclass(frozen=True)
class KreinPath:
    """The deformation D(s) = B + s*G for s in [0, s_max], G = i*J.

    D(s) is complex Hermitian; det D(s) = r(-s^2) with the even part r of
    the characteristic polynomial of J B, so ker D(s) is the eigenspace of
    J B for the eigenvalue i*s.
    """

    b: Matrix
    s_max: object  # Fraction or float, > 0

    def __post_init__(self):
        if not self.b.is_square or self.b.n_rows % 2 != 0:
            raise ShapeError("Krein path needs an even-dimensional symmetric matrix")
        if not self.b.is_symmetric():
            raise ValueError("Krein path needs a symmetric matrix")
        if not float(self.s_max) > 0:
            raise ValueError("s_max must be positive")

    @property
    def dim(self) -> int:
        return self.b.n_rows

    @property
    def field(self) -> str:
        return self.b.field

    def value(self, s) -> np.ndarray:
        n = self.dim // 2
        return self.b.to_numpy().astype(complex) + float(s) * krein_form(n)

    @property
    def derivative(self) -> np.ndarray:
        return krein_form(self.dim // 2)


Path = Union[LinearPath, KreinPath]


@dataclass(frozen=True)
class Crossing:
    """A parameter value where the path loses invertibility.

    ``form`` is the crossing form on the kernel basis: exact Fractions for a
    rational location on a rational segment, floats or complex otherwise.
    """

    location: float
    exact_location: Optional[Fraction]
    multiplicity: int
    kernel: Subspace
    form: tuple
    positive: int
    negative: int
    regular: bool

    @property
    def signature(self) -> int:
        return self.positive - self.negative


@dataclass(frozen=True)
class SpectralFlowResult:
    flow: int
    crossings: tuple  # interior crossings, ordered by location
    start_correction: int  # dim E_-(Cr[A(start)]), subtracted
    end_correction: int  # dim E_+(Cr[A(end)]), added
    backend: str


@dataclass(frozen=True)
class KappaIdentity:
    n: int
    kappa: int
    nullity: int
    holds: bool
    classification: object


@dataclass(frozen=True)
class KreinSignatureReport:
    positive: int
    negative: int
    degenerate: int

    @property
    def signature(self) -> int:
        return self.positive - self.negative

    @property
    def parity(self) -> int:
        """Parity of the negative count."""
        return self.negative % 2

    @property
    def nondegenerate(self) -> bool:
        return self.degenerate == 0


# ---------------------------------------------------------------------------
# determinant polynomials


def _lagrange_interpolate(nodes: list[Fraction], values: list[Fraction]) -> list[Fraction]:
    total: list[Fraction] = []
    for j, vj in enumerate(values):
        if vj == 0:
            continue
        term = [vj]
        for i, xi in enumerate(nodes):
            if i == j:
                continue
            term = rp.mul(term, [-xi, Fraction(1)])
            term = rp.scale(term, Fraction(1) / (nodes[j] - xi))
        total = rp.add(total, term)
    return total


def _det_poly_exact(path: LinearPath) -> list[Fraction]:
    m = path.dim
    if m == 0:
        return [Fraction(1)]
    nodes = [Fraction(j, m) for j in range(m + 1)]
    values = [determinant(path.value(t)) for t in nodes]
    return _lagrange_interpolate(nodes, values)


def _det_poly_float(path: LinearPath) -> np.ndarray:
    m = path.dim
    if m == 0:
        return np.array([1.0])
    nodes = np.linspace(0.0, 1.0, m + 1)
    values = np.array([np.linalg.det(path.value(float(t)).to_numpy()) for t in nodes])
    coeffs = np.polynomial.polynomial.polyfit(nodes, values, m)
    top = np.max(np.abs(coeffs)) if coeffs.size else 0.0
    if top == 0.0:
        return np.zeros(1)
    keep = coeffs.copy()
    while keep.size > 1 and abs(keep[-1]) <= 1e-12 * top:
        keep = keep[:-1]
    return keep


# ---------------------------------------------------------------------------
# crossing construction


def _crossing_exact(path: LinearPath, theta: Fraction, multiplicity: int,
                    interior: bool) -> Crossing:
    a = path.value(theta)
    ker = kernel(a)
    k = ker.dimension
    if k == 0:
        raise AssertionError("exact crossing location with trivial kernel")
    form = restrict_form(path.derivative, ker)
    ir = inertia(form)
    regular = ir.nullity == 0
    if interior and not regular:
        raise IrregularCrossingError(float(theta), "degenerate crossing form")
    if regular and k != multiplicity:
        raise AssertionError("regular crossing with mismatched determinant multiplicity")
    return Crossing(
        location=float(theta),
        exact_location=theta,
        multiplicity=k,
        kernel=ker,
        form=tuple(tuple(row) for row in form.rows()),
        positive=ir.coindex,
        negative=ir.morse_index,
        regular=regular,
    )


def _crossing_numeric(arr: np.ndarray, deriv: np.ndarray, location: float,
                      exact_location: Optional[Fraction], multiplicity: int,
                      interior: bool, tol: float) -> Crossing:
    """Crossing data from a numeric Hermitian matrix near a known root.

    ``multiplicity`` is the determinant root multiplicity; the kernel is read
    off as the eigenvectors of the smallest absolute eigenvalues, capped at
    the count of eigenvalues below the separation cutoff.
    """
    m = arr.shape[0]
    evals, evecs = np.linalg.eigh(arr)
    order = np.argsort(np.abs(evals))
    scale = 1.0 + float(np.max(np.abs(evals))) if m else 1.0
    cutoff = max(tol, 1e-6 * scale)
    near = int(np.sum(np.abs(evals) <= cutoff))
    k = min(multiplicity, near) if near else multiplicity
    k = max(k, 1)
    z = evecs[:, order[:k]]
    f = z.conj().T @ deriv @ z
    f = (f + f.conj().T) / 2
    w = np.linalg.eigvalsh(f)
    ftol = default_tolerance(float(np.max(np.abs(f))) if f.size else 0.0)
    pos = int(np.sum(w > ftol))
    neg = int(np.sum(w < -ftol))
    regular = pos + neg == k and k == multiplicity
    if interior and not regular:
        raise IrregularCrossingError(location, "degenerate crossing form")
    if np.max(np.abs(z.imag)) <= 1e-300:
        basis = tuple(tuple(float(x) for x in z[:, i].real) for i in range(k))
    else:
        basis = tuple(tuple(complex(x) for x in z[:, i]) for i in range(k))
    return Crossing(
        location=location,
        exact_location=exact_location,
        multiplicity=k,
        kernel=Subspace(m, basis),
        form=tuple(tuple(complex(x) if abs(x.imag) > 0 else float(x.real) for x in row)
                   for row in f),
        positive=pos,
        negative=neg,
        regular=regular,
    )


def _strict_counts_exact(form: Matrix) -> tuple[int, int]:
    ir = inertia(form)
    return ir.coindex, ir.morse_index


def _strict_counts_float(form: np.ndarray, tol: float) -> tuple[int, int]:
    if form.size == 0:
        return 0, 0
    w = np.linalg.eigvalsh((form + form.conj().T) / 2)
    return int(np.sum(w > tol)), int(np.sum(w < -tol))


# ---------------------------------------------------------------------------
# spectral flow: straight segments


def _flow_linear_exact(path: LinearPath) -> SpectralFlowResult:
    d = _det_poly_exact(path)
    if not d:
        raise IrregularCrossingError(
            float("nan"), "the path is singular at every parameter")
    crossings = []
    for factor, mult in rp.squarefree_decomposition(d):
        if rp.degree(factor) < 1:
            continue
        for lo, hi in rp.isolate_real_roots(factor):
            if hi <= 0 or lo >= 1:
                continue
            approx, exact = rp.refine_root(factor, lo, hi)
            if exact is not None:
                if exact <= 0 or exact >= 1:
                    continue
                crossings.append(_crossing_exact(path, exact, mult, interior=True))
            else:
                if not (0 < approx < 1):
                    continue
                arr = path.value(Fraction(approx))
                crossings.append(_crossing_numeric(
                    arr.to_numpy(), path.derivative.to_numpy(), approx,
                    None, mult, interior=True, tol=0.0))
    crossings.sort(key=lambda c: c.location)
    start_corr = 0
    ker0 = kernel(path.start)
    if ker0.dimension:
        _, neg = _strict_counts_exact(restrict_form(path.derivative, ker0))
        start_corr = neg
    end_corr = 0
    ker1 = kernel(path.end)
    if ker1.dimension:
        pos, _ = _strict_counts_exact(restrict_form(path.derivative, ker1))
        end_corr = pos
    total = sum(c.signature for c in crossings) - start_corr + end_corr
    return SpectralFlowResult(total, tuple(crossings), start_corr, end_corr, RATIONAL)


def _cluster_real_roots(roots: np.ndarray, im_tol: float,
                        gap: float) -> list[tuple[float, int]]:
    real = sorted(r.real for r in roots if abs(r.imag) <= im_tol)
    out: list[tuple[float, int]] = []
    for x in real:
        if out and x - out[-1][0] <= gap * (1 + abs(x)):
            loc, cnt = out[-1]
            out[-1] = ((loc * cnt + x) / (cnt + 1), cnt + 1)
        else:
            out.append((x, 1))
    return out


def _flow_linear_float(path: LinearPath, tol: float) -> SpectralFlowResult:
    coeffs = _det_poly_float(path)
    top = float(np.max(np.abs(coeffs)))
    if top == 0.0:
        raise IrregularCrossingError(
            float("nan"), "the path is singular at every parameter")
    crossings = []
    if coeffs.size > 1:
        roots = np.polynomial.polynomial.polyroots(coeffs)
        edge = 1e-9
        for loc, mult in _cluster_real_roots(roots, im_tol=1e-4, gap=1e-4):
            if loc <= edge or loc >= 1 - edge:
                continue
            arr = path.value(loc).to_numpy()
            crossings.append(_crossing_numeric(
                arr, path.derivative.to_numpy(), loc, None, mult,
                interior=True, tol=tol))
    crossings.sort(key=lambda c: c.location)
    start_corr = 0
    ker0 = kernel(path.start, tol=tol)
    if ker0.dimension:
        z = ker0.basis_numpy()
        f = z.conj().T @ path.derivative.to_numpy().astype(complex) @ z
        _, neg = _strict_counts_float(f, tol)
        start_corr = neg
    end_corr = 0
    ker1 = kernel(path.end, tol=tol)
    if ker1.dimension:
        z = ker1.basis_numpy()
        f = z.conj().T @ path.derivative.to_numpy().astype(complex) @ z
        pos, _ = _strict_counts_float(f, tol)
        end_corr = pos
    total = sum(c.signature for c in crossings) - start_corr + end_corr
    return SpectralFlowResult(total, tuple(crossings), start_corr, end_corr, FLOAT64)


# ---------------------------------------------------------------------------
# spectral flow: Krein deformations


def _krein_interior_locations_exact(b: Matrix) -> list[tuple[float, Optional[Fraction], int]]:
    """All s > 0 with singular B + s*G, as (float, exact or None, multiplicity)."""
    n = b.n_rows // 2
    jb = standard_symplectic(n) @ b
    p = char_poly(jb)
    r, is_even = rp.even_part(p)
    if not is_even:
        raise AssertionError("characteristic polynomial of J B must be even")
    out = []
    for factor, mult in rp.squarefree_decomposition(r):
        if rp.degree(factor) < 1:
            continue
        for lo, hi in rp.isolate_real_roots(factor):
            if lo >= 0:
                continue
            approx, exact = rp.refine_root(factor, lo, hi)
            if exact is not None:
                if exact >= 0:
                    continue
                s_exact = _fraction_sqrt(-exact)
                s_float = float(s_exact) if s_exact is not None else float(-exact) ** 0.5
                out.append((s_float, s_exact, mult))
            else:
                if approx >= 0:
                    continue
                out.append(((-approx) ** 0.5, None, mult))
    out.sort(key=lambda t: t[0])
    return out


def _fraction_sqrt(q: Fraction) -> Optional[Fraction]:
    import math

    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def _krein_interior_locations_float(b: Matrix, tol: float) -> list[tuple[float, None, int]]:
    n = b.n_rows // 2
    jb = standard_symplectic(n, FLOAT64).to_numpy() @ b.to_numpy()
    evals = np.linalg.eigvals(jb)
    onaxis = [e.imag for e in evals if abs(e.real) <= tol and e.imag > tol]
    out: list[tuple[float, None, int]] = []
    for s in sorted(onaxis):
        if out and s - out[-1][0] <= tol * (1 + abs(s)):
            loc, _, cnt = out[-1]
            out[-1] = ((loc * cnt + s) / (cnt + 1), None, cnt + 1)
        else:
            out.append((s, None, 1))
    return out


def _krein_start_correction(b: Matrix, tol: float) -> int:
    """dim E_-(G restricted to ker B); exact when B is rational.

    The restriction of i*J to a real subspace has spectrum symmetric about
    zero, so the dimension is rank(Z^T J Z) / 2.
    """
    if b.field == RATIONAL:
        ker0 = kernel(b)
        if ker0.dimension == 0:
            return 0
        n = b.n_rows // 2
        j = standard_symplectic(n)
        cols = [list(v) for v in ker0.basis]
        jz = [j.matvec(v) for v in cols]
        s = [[sum(cols[a][i] * jz[c][i] for i in range(b.n_rows))
              for c in range(ker0.dimension)] for a in range(ker0.dimension)]
        rk = _exact_rank(s)
        if rk % 2 != 0:
            raise AssertionError("skew form with odd rank")
        return rk // 2
    ker0 = kernel(b, tol=tol)
    if ker0.dimension == 0:
        return 0
    z = ker0.basis_numpy()
    g = krein_form(b.n_rows // 2)
    _, neg = _strict_counts_float(z.conj().T @ g @ z, tol)
    return neg


def _flow_krein(path: KreinPath, tol: float) -> SpectralFlowResult:
    b = path.b
    g = krein_form(b.n_rows // 2)
    exact = b.field == RATIONAL
    if exact:
        locations = _krein_interior_locations_exact(b)
    else:
        locations = _krein_interior_locations_float(b, tol)
    s_hi = float(path.s_max)
    crossings = []
    end_corr = 0
    end_is_exact = exact and isinstance(path.s_max, (Fraction, int))
    for s_float, s_exact, mult in locations:
        at_end = (s_exact is not None and end_is_exact and s_exact == Fraction(path.s_max)) \
            or abs(s_float - s_hi) <= 1e-12 * (1 + s_hi)
        if not at_end and s_float >= s_hi:
            continue
        arr = b.to_numpy().astype(complex) + s_float * g
        cr = _crossing_numeric(arr, g, s_float, s_exact, mult,
                               interior=not at_end, tol=tol)
        if at_end:
            end_corr += cr.positive
        else:
            crossings.append(cr)
    start_corr = _krein_start_correction(b, tol)
    total = sum(c.signature for c in crossings) - start_corr + end_corr
    return SpectralFlowResult(total, tuple(crossings), start_corr, end_corr,
                              RATIONAL if exact else FLOAT64)


def spectral_flow(path: Path, tol: Optional[float] = None) -> SpectralFlowResult:
    """Spectral flow of a path of self-adjoint matrices.

    Interior crossings must be regular; a degenerate crossing form raises
    IrregularCrossingError.  Endpoint kernels enter through the boundary
    convention stated in the module docstring.
    """
    if isinstance(path, LinearPath):
        if path.field == RATIONAL:
            return _flow_linear_exact(path)
        t = default_tolerance(max(path.start.max_abs(), path.end.max_abs())) \
            if tol is None else tol
        return _flow_linear_float(path, t)
    if isinstance(path, KreinPath):
        t = default_tolerance(path.b.max_abs() + float(path.s_max)) if tol is None else tol
        return _flow_krein(path, t)
    raise TypeError("unsupported path type")


def relative_morse_index(a0: Matrix, a1: Matrix, tol: Optional[float] = None) -> int:
    """Relative Morse index of the pair (a0, a1): minus the spectral flow of
    the straight segment from a0 to a1.  For invertible endpoints this equals
    morse(a1) - morse(a0)."""
    return -spectral_flow(LinearPath(a0, a1), tol=tol).flow


def crossing_set(b: Matrix, s_max, tol: Optional[float] = None) -> tuple:
    """All crossings of the Krein deformation B + s*G for s in [0, s_max],
    endpoint values included.  Purely descriptive: irregular crossings are
    reported with ``regular=False`` rather than raised."""
    path = KreinPath(b, s_max)
    t = default_tolerance(b.max_abs() + float(s_max)) if tol is None else tol
    g = krein_form(b.n_rows // 2)
    exact = b.field == RATIONAL
    singular_at_zero = (determinant(b) == 0) if exact else (rank(b, tol=t) < b.n_rows)
    out = []
    if singular_at_zero:
        ker0 = kernel(b, tol=None if exact else t)
        z = ker0.basis_numpy()
        f = z.conj().T @ g @ z
        pos, neg = _strict_counts_float(f, t)
        out.append(Crossing(
            location=0.0,
            exact_location=Fraction(0) if exact else None,
            multiplicity=ker0.dimension,
            kernel=ker0,
            form=tuple(tuple(complex(x) for x in row) for row in f),
            positive=pos,
            negative=neg,
            regular=pos + neg == ker0.dimension,
        ))
    if exact:
        locations = _krein_interior_locations_exact(b)
    else:
        locations = _krein_interior_locations_float(b, t)
    s_hi = float(s_max)
    for s_float, s_exact, mult in locations:
        if s_float > s_hi * (1 + 1e-12):
            continue
        arr = b.to_numpy().astype(complex) + s_float * g
        out.append(_crossing_numeric(arr, g, s_float, s_exact, mult,
                                     interior=False, tol=t))
    return tuple(out)


# ---------------------------------------------------------------------------
# the counting identity n = kappa + nullity/2


def kappa_identity_check(b: Matrix, tol: Optional[float] = None) -> KappaIdentity:
    """Check n = kappa + nullity(B)/2, with kappa the number of eigenvalue
    pairs of J B on the punctured imaginary axis, counted with multiplicity.

    The identity is the content of the counting argument behind the parity
    criterion and holds whenever J B is linearly stable.  The exact backend
    reads kappa off the even part r of the characteristic polynomial as the
    root count of r on the open negative axis; the float backend needs the
    nonzero frequencies separated from zero by the tolerance and raises
    IndeterminateError when they are not.
    """
    if not b.is_square or b.n_rows % 2 != 0:
        raise ShapeError("expected an even-dimensional symmetric matrix")
    n = b.n_rows // 2
    cls = classify(b, tol=tol)
    if b.field == RATIONAL:
        jb = standard_symplectic(n) @ b
        p = char_poly(jb)
        r, is_even = rp.even_part(p)
        if not is_even:
            raise AssertionError("characteristic polynomial of J B must be even")
        kappa = 0
        for factor, mult in rp.squarefree_decomposition(r):
            if rp.degree(factor) < 1:
                continue
            negative = rp.count_distinct_real_roots(factor, None, Fraction(0))
            if rp.eval_at(factor, Fraction(0)) == 0:
                negative -= 1
            kappa += mult * negative
        nullity = inertia(b).nullity
        return KappaIdentity(n, kappa, nullity, n == kappa + Fraction(nullity, 2), cls)
    t = default_tolerance(b.max_abs()) if tol is None else tol
    jb = standard_symplectic(n, FLOAT64).to_numpy() @ b.to_numpy()
    evals = np.linalg.eigvals(jb)
    nonzero = [e for e in evals if abs(e) > t]
    if any(abs(e) <= 10 * t for e in nonzero):
        raise IndeterminateError(
            "eigenvalues too close to zero to separate kappa from the kernel")
    kappa = sum(1 for e in nonzero if e.imag > 0)
    nullity = b.n_rows - rank(b, tol=t)
    holds = n == kappa + nullity / 2
    return KappaIdentity(n, kappa, nullity, holds, cls)


def krein_signature(subspace: Subspace, tol: Optional[float] = None) -> KreinSignatureReport:
    """Signature data of the form G = i*J restricted to a subspace of C^2n.

    For the eigenspace of J B at a simple purely imaginary eigenvalue the
    form is definite and its sign is the Krein sign of that eigenvalue."""
    if subspace.ambient_dim % 2 != 0:
        raise ShapeError("the Krein form lives on an even-dimensional space")
    if subspace.dimension == 0:
        return KreinSignatureReport(0, 0, 0)
    z = subspace.basis_numpy()
    g = krein_form(subspace.ambient_dim // 2)
    f = z.conj().T @ g @ z
    f = (f + f.conj().T) / 2
    w = np.linalg.eigvalsh(f)
    t = default_tolerance(float(np.max(np.abs(f)))) if tol is None else tol
    pos = int(np.sum(w > t))
    neg = int(np.sum(w < -t))
    return KreinSignatureReport(pos, neg, subspace.dimension - pos - neg)
