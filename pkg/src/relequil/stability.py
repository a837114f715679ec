"""Linear stability of x' = J B x for a symmetric matrix B.

A linearized Hamiltonian system is spectrally stable when the whole spectrum
of J B lies on the imaginary axis, and linearly stable when J B is in
addition semisimple.  The central criterion implemented here: if the Morse
index or the nullity of B is odd, J B is linearly unstable.  A general
invertible skew form Omega is reduced to the standard J through a congruence
Omega = Q J Q^T, under which Omega B is similar to J (Q^T B Q).

The exact backend decides the imaginary-axis condition through the
characteristic polynomial of J B, which is always even in this setting
(the spectrum is symmetric under negation): writing p(x) = r(x^2), the
spectrum is on the axis iff r has only real, nonpositive roots, which Sturm
counts decide exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from . import rational_poly as rp
from .matrix_core import (
    FLOAT64,
    RATIONAL,
    Eigenvalue,
    FieldError,
    IndexReport,
    Matrix,
    ShapeError,
    SingularMatrixError,
    Subspace,
    SymmetryError,
    char_poly,
    complex_spectrum,
    default_tolerance,
    determinant,
    in_span,
    inertia,
    is_semisimple,
    kernel,
    rank,
    restrict_form,
    solve_exact,
    standard_symplectic,
    symplectic_reduction,
)

__all__ = [
    "Verdict",
    "StabilityClassification",
    "TheoremVerdict",
    "KernelInvarianceResult",
    "EvenIndexConsistency",
    "InvariantSplit",
    "InstabilityCertificate",
    "BlockNormalForm",
    "KernelNotInvariantError",
    "HypothesisFailure",
    "classify",
    "theorem_predict",
    "parity_verdict",
    "kernel_invariance_test",
    "invertible_even_index_check",
    "invariant_split",
    "spectral_instability_certificate",
    "block_normal_form",
]


class Verdict(str, Enum):
    SPECTRALLY_UNSTABLE = "spectrally_unstable"
    SPECTRALLY_STABLE_NOT_LINEAR = "spectrally_stable_not_linear"
    LINEARLY_STABLE = "linearly_stable"
    INDETERMINATE = "indeterminate"


class KernelNotInvariantError(ValueError):
    """Raised when a construction needs a J-invariant kernel and the kernel
    is not J-invariant (instability is then already certified)."""


class HypothesisFailure(ValueError):
    """One or more hypotheses of a certificate failed; see ``failures``."""

    def __init__(self, failures: list[str]):
        self.failures = list(failures)
        super().__init__("hypotheses failed: " + ", ".join(failures))


@dataclass(frozen=True)
class StabilityClassification:
    verdict: Verdict
    spectrum_on_axis: bool
    semisimple: Optional[bool]
    offending_eigenvalue: Optional[complex]
    defective_eigenvalue: Optional[complex]
    backend: str
    tol: float

    def __post_init__(self):
        v = self.verdict
        if v == Verdict.SPECTRALLY_UNSTABLE and self.spectrum_on_axis:
            raise ValueError("unstable verdict with spectrum on the axis")
        if v != Verdict.SPECTRALLY_UNSTABLE and not self.spectrum_on_axis:
            raise ValueError("non-unstable verdict with spectrum off the axis")
        if v == Verdict.LINEARLY_STABLE and self.semisimple is not True:
            raise ValueError("linear stability requires semisimplicity")
        if v == Verdict.SPECTRALLY_STABLE_NOT_LINEAR and self.semisimple is not False:
            raise ValueError("stable-not-linear requires a defective spectrum")
        if v == Verdict.INDETERMINATE and self.semisimple is not None:
            raise ValueError("indeterminate verdict with a decided semisimplicity")


@dataclass(frozen=True)
class TheoremVerdict:
    """Parity-based instability prediction from the inertia of B."""

    morse_index: int
    nullity: int
    predicts_instability: bool
    reason: str  # "odd_index" | "odd_nullity" | "none"

    def __post_init__(self):
        expected = self.morse_index % 2 == 1 or self.nullity % 2 == 1
        if self.predicts_instability != expected:
            raise ValueError("prediction inconsistent with the stated parities")


@dataclass(frozen=True)
class KernelInvarianceResult:
    j_invariant: bool
    kernel: Subspace
    # when not J-invariant: w with J B w != 0 and (J B)^2 w = 0
    witness: Optional[tuple]

    @property
    def kernel_dimension(self) -> int:
        return self.kernel.dimension


@dataclass(frozen=True)
class EvenIndexConsistency:
    morse_index: int
    index_odd: bool
    classification: StabilityClassification
    det_product_positive: bool  # sign of det(Omega B)
    consistent: bool


@dataclass(frozen=True)
class InvariantSplit:
    kernel: Subspace
    complement: Subspace
    restricted_form: Matrix


@dataclass(frozen=True)
class InstabilityCertificate:
    conclusion: str  # "spectrally_unstable" | "no_conclusion"
    subspace: Subspace
    restricted_index: IndexReport
    hypotheses: dict


@dataclass(frozen=True)
class BlockNormalForm:
    kind: str  # "zero" | "nilpotent_jordan" | "imaginary_pair" | "real_pair"
    eigenvalues: tuple[complex, complex]
    eigenvalue_squared: object  # -b_k * b_{n+k}, exact for rational input
    exact_magnitude: Optional[Fraction]
    matrix: Matrix


def _reduce_omega(b: Matrix, omega: Optional[Matrix], tol: Optional[float]) -> Matrix:
    """Replace (B, Omega) by the congruent standard-form data Q^T B Q."""
    if omega is None:
        return b
    if omega.shape != b.shape:
        raise ShapeError("B and Omega must have the same shape")
    q = symplectic_reduction(omega, tol=tol)
    return q.T @ b @ q


def _require_even_symmetric(b: Matrix, tol: Optional[float]) -> Matrix:
    if not b.is_square or b.n_rows % 2 != 0:
        raise ShapeError("Hamiltonian stability needs an even-dimensional symmetric matrix")
    if b.field == RATIONAL:
        if not b.is_symmetric():
            raise SymmetryError("matrix is not exactly symmetric")
        return b
    if not b.is_symmetric(tol):
        raise SymmetryError("matrix is not symmetric within tolerance")
    return b.symmetrized()


def _on_axis_exact(jb: Matrix) -> bool:
    p = char_poly(jb)
    r, is_even = rp.even_part(p)
    if not is_even:
        raise AssertionError("characteristic polynomial of J B must be even")
    rstar = rp.squarefree_part(r)
    if rp.degree(rstar) <= 0:
        return True
    all_real = rp.count_distinct_real_roots(rstar) == rp.degree(rstar)
    none_positive = rp.count_distinct_real_roots(rstar, Fraction(0), None) == 0
    return all_real and none_positive


def _off_axis_witness(spectrum: tuple[Eigenvalue, ...], tol: float) -> Optional[complex]:
    worst = None
    for ev in spectrum:
        if abs(ev.value.real) > tol:
            if worst is None or abs(ev.value.real) > abs(worst.real):
                worst = ev.value
    return worst


def classify(b: Matrix, omega: Optional[Matrix] = None,
             tol: Optional[float] = None) -> StabilityClassification:
    """Spectral and linear stability of Omega B (Omega defaults to J).

    Exact backend: zero-tolerance decisions through polynomial arithmetic.
    Float backend: eigenvalues of J B against a tolerance; an undecidable
    semisimplicity test yields the indeterminate verdict rather than a guess.
    """
    b = _require_even_symmetric(b, tol)
    b = _reduce_omega(b, omega, tol)
    n = b.n_rows // 2
    j = standard_symplectic(n, b.field)
    jb = j @ b
    if b.field == RATIONAL:
        on_axis = _on_axis_exact(jb)
        if not on_axis:
            witness = _off_axis_witness(complex_spectrum(jb), 0.0)
            return StabilityClassification(
                Verdict.SPECTRALLY_UNSTABLE, False, None, witness, None, RATIONAL, 0.0)
        ss = is_semisimple(jb)
        if ss.semisimple:
            return StabilityClassification(
                Verdict.LINEARLY_STABLE, True, True, None, None, RATIONAL, 0.0)
        defect = ss.defective_eigenvalues[0] if ss.defective_eigenvalues else None
        return StabilityClassification(
            Verdict.SPECTRALLY_STABLE_NOT_LINEAR, True, False, None, defect, RATIONAL, 0.0)
    t = default_tolerance(jb.max_abs()) if tol is None else tol
    spectrum = complex_spectrum(jb, tol=t)
    witness = _off_axis_witness(spectrum, t)
    if witness is not None:
        return StabilityClassification(
            Verdict.SPECTRALLY_UNSTABLE, False, None, witness, None, FLOAT64, t)
    ss = is_semisimple(jb, tol=t)
    if ss.semisimple is None:
        return StabilityClassification(
            Verdict.INDETERMINATE, True, None, None, None, FLOAT64, t)
    if ss.semisimple:
        return StabilityClassification(
            Verdict.LINEARLY_STABLE, True, True, None, None, FLOAT64, t)
    defect = ss.defective_eigenvalues[0] if ss.defective_eigenvalues else None
    return StabilityClassification(
        Verdict.SPECTRALLY_STABLE_NOT_LINEAR, True, False, None, defect, FLOAT64, t)


def parity_verdict(morse_index: int, nullity: int) -> TheoremVerdict:
    """Parity rule on a precomputed index pair."""
    if morse_index % 2 == 1:
        return TheoremVerdict(morse_index, nullity, True, "odd_index")
    if nullity % 2 == 1:
        return TheoremVerdict(morse_index, nullity, True, "odd_nullity")
    return TheoremVerdict(morse_index, nullity, False, "none")


def theorem_predict(b: Matrix, tol: Optional[float] = None) -> TheoremVerdict:
    """Predict linear instability of J B from the inertia of B alone:
    an odd Morse index or an odd nullity rules out linear stability."""
    ir = inertia(b, tol=tol)
    return parity_verdict(ir.morse_index, ir.nullity)


def kernel_invariance_test(b: Matrix) -> KernelInvarianceResult:
    """Exact test whether ker(B) is J-invariant.

    When it is not, J B cannot be semisimple, and the returned witness w
    satisfies J B w != 0 and (J B)^2 w = 0 (a genuine Jordan chain).  When it
    is, the kernel dimension is necessarily even, which is asserted.
    """
    if b.field != RATIONAL:
        raise FieldError("kernel_invariance_test is exact-backend only")
    b = _require_even_symmetric(b, None)
    two_n = b.n_rows
    n = two_n // 2
    j = standard_symplectic(n)
    v = kernel(b)
    if v.dimension == 0:
        return KernelInvarianceResult(True, v, None)
    v_cols = [[Fraction(x) for x in vec] for vec in v.basis]
    invariant = all(
        in_span(v_cols, j.matvec(vec)) for vec in v_cols
    )
    if invariant:
        if v.dimension % 2 != 0:
            raise AssertionError("J-invariant kernel with odd dimension")
        return KernelInvarianceResult(True, v, None)
    # Split J V = V_1 + W_1 with W_1 inside the Euclidean complement W of V.
    # Pick the first nonzero W-component of J applied to a kernel basis
    # vector, then pull it back through B inside W.
    gram = [[sum((a * c for a, c in zip(v_cols[i], v_cols[k])), Fraction(0))
             for k in range(v.dimension)] for i in range(v.dimension)]
    target = None
    for vec in v_cols:
        jv = j.matvec(vec)
        rhs = [sum((v_cols[k][i] * jv[i] for i in range(two_n)), Fraction(0))
               for k in range(v.dimension)]
        coeffs = solve_exact(gram, rhs)
        proj = [sum((coeffs[k] * v_cols[k][i] for k in range(v.dimension)), Fraction(0))
                for i in range(two_n)]
        w_part = [a - p for a, p in zip(jv, proj)]
        if any(x != 0 for x in w_part):
            target = w_part
            break
    if target is None:
        raise AssertionError("kernel flagged non-invariant but J V lies in V")
    # solve B w = target; target lies in range(B) because range(B) is the
    # Euclidean complement of ker(B) for symmetric B
    w = solve_exact(b.to_lists(), target)
    if w is None:
        raise AssertionError("pullback through B failed on range(B)")
    jbw = j.matvec(b.matvec(w))
    jb2w = j.matvec(b.matvec(jbw))
    if all(x == 0 for x in jbw) or any(x != 0 for x in jb2w):
        raise AssertionError("constructed witness violates the Jordan relations")
    return KernelInvarianceResult(False, v, tuple(w))


def invertible_even_index_check(b: Matrix, omega: Optional[Matrix] = None,
                                tol: Optional[float] = None) -> EvenIndexConsistency:
    """For invertible B: an odd Morse index forces spectral instability of
    Omega B.  Returns both sides of the implication, plus the sign of
    det(Omega B), which is positive exactly when the index is even."""
    b_sym = _require_even_symmetric(b, tol)
    if rank(b_sym, tol) != b_sym.n_rows:
        raise SingularMatrixError("invertible_even_index_check needs invertible B")
    ir = inertia(b_sym, tol=tol)
    cls = classify(b, omega=omega, tol=tol)
    n = b.n_rows // 2
    om = omega if omega is not None else standard_symplectic(n, b.field)
    det_prod = determinant(om) * determinant(b_sym)
    index_odd = ir.morse_index % 2 == 1
    consistent = (not index_odd) or cls.verdict == Verdict.SPECTRALLY_UNSTABLE
    return EvenIndexConsistency(
        morse_index=ir.morse_index,
        index_odd=index_odd,
        classification=cls,
        det_product_positive=bool(det_prod > 0),
        consistent=consistent,
    )


def invariant_split(b: Matrix) -> InvariantSplit:
    """Split R^2n = ker(B) + W with W the Euclidean complement, valid when
    ker(B) is J-invariant; W is then J- and B-invariant and B restricts to an
    isomorphism of W.  Returns the kernel, the complement and the restricted
    form on W."""
    result = kernel_invariance_test(b)
    if not result.j_invariant:
        raise KernelNotInvariantError(
            "kernel is not J-invariant; instability is already certified")
    two_n = b.n_rows
    v = result.kernel
    if v.dimension == 0:
        ident = Matrix.identity(two_n)
        comp = Subspace(two_n, tuple(tuple(row) for row in ident.rows()))
        return InvariantSplit(v, comp, restrict_form(b, comp))
    rows = [[Fraction(x) for x in vec] for vec in v.basis]
    comp_basis = tuple(tuple(w) for w in _kernel_rows(rows, two_n))
    comp = Subspace(two_n, comp_basis)
    n = two_n // 2
    j = standard_symplectic(n)
    comp_cols = [[Fraction(x) for x in vec] for vec in comp.basis]
    for vec in comp_cols:
        if not in_span(comp_cols, j.matvec(vec)):
            raise AssertionError("complement of a J-invariant kernel must be J-invariant")
        if not in_span(comp_cols, b.matvec(vec)):
            raise AssertionError("complement must be B-invariant for symmetric B")
    restricted = restrict_form(b, comp)
    if comp.dimension and rank(restricted) != comp.dimension:
        raise AssertionError("B must restrict to an isomorphism of the complement")
    return InvariantSplit(v, comp, restricted)


def _kernel_rows(rows: list[list[Fraction]], n_cols: int) -> list[list[Fraction]]:
    from .matrix_core import _kernel_exact

    return _kernel_exact(rows, n_cols)


def spectral_instability_certificate(b: Matrix,
                                     w: Optional[Subspace] = None) -> InstabilityCertificate:
    """Sufficient condition for spectral instability of J B: a subspace W
    that is J-invariant, B-invariant and on which B is an isomorphism, with
    odd restricted Morse index.  W defaults to the complement produced by
    ``invariant_split``."""
    if b.field != RATIONAL:
        raise FieldError("spectral_instability_certificate is exact-backend only")
    b = _require_even_symmetric(b, None)
    if w is None:
        w = invariant_split(b).complement
    two_n = b.n_rows
    n = two_n // 2
    j = standard_symplectic(n)
    cols = [[Fraction(x) for x in vec] for vec in w.basis]
    failures = []
    if not all(in_span(cols, j.matvec(vec)) for vec in cols):
        failures.append("not J-invariant")
    if not all(in_span(cols, b.matvec(vec)) for vec in cols):
        failures.append("not B-invariant")
    restricted = restrict_form(b, w)
    iso = w.dimension == 0 or rank(restricted) == w.dimension
    if not iso:
        failures.append("B is not an isomorphism on W")
    if failures:
        raise HypothesisFailure(failures)
    ir = inertia(restricted)
    conclusion = "spectrally_unstable" if ir.morse_index % 2 == 1 else "no_conclusion"
    return InstabilityCertificate(
        conclusion=conclusion,
        subspace=w,
        restricted_index=ir,
        hypotheses={"j_invariant": True, "b_invariant": True, "isomorphism": True},
    )


def _fraction_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    import math as _math

    rn = _math.isqrt(q.numerator)
    rd = _math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def block_normal_form(b_k, b_nk) -> BlockNormalForm:
    """Classify the 2x2 Hamiltonian block [[0, -b_{n+k}], [b_k, 0]] coming
    from a diagonal B paired by J.

    The eigenvalues are the two square roots of -b_k * b_{n+k}: a vanishing
    product with a nonzero entry gives a nilpotent Jordan block, a positive
    product a purely imaginary pair, a negative product a real pair.
    """
    exact = not (isinstance(b_k, float) or isinstance(b_nk, float))
    if exact:
        b_k = Fraction(b_k)
        b_nk = Fraction(b_nk)
        field = RATIONAL
    else:
        b_k = float(b_k)
        b_nk = float(b_nk)
        field = FLOAT64
    product = b_k * b_nk
    lam_sq = -product
    mat = Matrix([[0, -b_nk], [b_k, 0]], field)
    exact_mag = _fraction_sqrt(abs(lam_sq)) if exact else None
    mag = float(exact_mag) if exact_mag is not None else float(abs(lam_sq)) ** 0.5
    if b_k == 0 and b_nk == 0:
        return BlockNormalForm("zero", (0j, 0j), lam_sq, Fraction(0) if exact else None, mat)
    if product == 0:
        return BlockNormalForm(
            "nilpotent_jordan", (0j, 0j), lam_sq, Fraction(0) if exact else None, mat)
    if product > 0:
        lams = (complex(0.0, mag), complex(0.0, -mag))
        return BlockNormalForm("imaginary_pair", lams, lam_sq, exact_mag, mat)
    lams = (complex(mag, 0.0), complex(-mag, 0.0))
    return BlockNormalForm("real_pair", lams, lam_sq, exact_mag, mat)
