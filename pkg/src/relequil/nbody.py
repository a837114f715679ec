"""Planar n-body-type potentials, central configurations and the amended
Hessian at a relative equilibrium.

Bodies carry positive masses and interact through the attracting pair
potential m_i m_j / r^alpha.  A central configuration is a critical point of
U on the inertia sphere I(q) = q^T M q = 1 with the center of mass pinned at
the origin; there DU = -xi^2 M q with xi^2 = alpha U(q).  The second
variation of the amended potential on the slice V orthogonal to the rotation
orbit is assembled as the bilinear form

    -D^2 U - xi^2 M + 4 xi^2 (Mq)(Mq)^T

represented on an M-orthonormal basis of V = span{q} (+) T_q Shat.  The
configuration q itself is a radial eigenvector with eigenvalue (2-alpha)xi^2,
and on the sphere-tangent part the form is minus the constrained Hessian of
U, which ties the instability parity test to the Morse data of the central
configuration.

Everything here is float-backend: central configurations have irrational
coordinates in general.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .matrix_core import IndexReport, Matrix, ShapeError, inertia, rank
from .stability import TheoremVerdict, parity_verdict

__all__ = [
    "CollisionError",
    "ConvergenceError",
    "BasisConstructionError",
    "CCSettings",
    "NBodySystem",
    "CentralConfiguration",
    "AmendedHessianReport",
    "E1Report",
    "RelativeEquilibriumVerdict",
    "mass_matrix",
    "potential_U",
    "grad_U",
    "hess_U",
    "locked_inertia",
    "inertia_gradient",
    "rotation_direction",
    "find_central_configuration",
    "amended_hessian",
    "e1_linearization",
    "stability_verdict",
]

COLLISION_GUARD = 1e-6  # fraction of the configuration diameter


class CollisionError(ValueError):
    """Two bodies are closer than the collision guard allows."""


class ConvergenceError(RuntimeError):
    """The central-configuration search exhausted its budget."""


class BasisConstructionError(RuntimeError):
    """The slice basis could not be built (rank-deficient constraints)."""


@dataclass(frozen=True)
class CCSettings:
    cc_tol: float = 1e-10
    max_iter: int = 200
    collision_guard: float = COLLISION_GUARD
    armijo_factor: float = 0.5


@dataclass(frozen=True)
class NBodySystem:
    """Planar bodies: positive masses, exponent alpha > 0, flat positions
    (x1, y1, x2, y2, ...) with the weighted center of mass at the origin."""

    masses: tuple
    alpha: float
    positions: tuple

    def __post_init__(self):
        if len(self.masses) < 2:
            raise ValueError("need at least two bodies")
        if any(not (m > 0) for m in self.masses):
            raise ValueError("masses must be positive")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if len(self.positions) != 2 * len(self.masses):
            raise ShapeError("positions must hold two coordinates per body")
        q = self.q()
        scale = 1.0 + float(np.max(np.abs(q)))
        com = _weighted_com(np.asarray(self.masses, dtype=float), q)
        if float(np.max(np.abs(com))) > 1e-8 * scale:
            raise ValueError("center of mass must sit at the origin; use assemble()")
        _min_pair_distance(q, guard=COLLISION_GUARD)

    @classmethod
    def assemble(cls, masses, alpha, positions) -> "NBodySystem":
        """Build a system from per-body (x, y) pairs or a flat sequence,
        recentering the weighted center of mass to the origin."""
        flat = []
        for p in positions:
            if np.iterable(p):
                flat.extend(float(x) for x in p)
            else:
                flat.append(float(p))
        m = np.asarray([float(x) for x in masses], dtype=float)
        q = np.asarray(flat, dtype=float)
        if q.size != 2 * m.size:
            raise ShapeError("positions must hold two coordinates per body")
        if np.any(m <= 0):
            raise ValueError("masses must be positive")
        com = _weighted_com(m, q)
        q = q - np.tile(com, m.size)
        return cls(tuple(float(x) for x in m), float(alpha), tuple(float(x) for x in q))

    @property
    def n(self) -> int:
        return len(self.masses)

    def q(self) -> np.ndarray:
        return np.asarray(self.positions, dtype=float)

    def mass_vector(self) -> np.ndarray:
        return np.asarray(self.masses, dtype=float)


@dataclass(frozen=True)
class CentralConfiguration:
    system: NBodySystem
    xi_squared: float
    residual: float


@dataclass(frozen=True)
class AmendedHessianReport:
    matrix_on_v: Matrix
    inertia_v: IndexReport
    hess_u_on_shat: Matrix
    inertia_shat: IndexReport
    radial_eigenvalue: float
    radial_residual: float
    sign_identity_residual: float
    xi_squared: float
    alpha: float

    @property
    def dim_v(self) -> int:
        return self.matrix_on_v.n_rows

    @property
    def dim_shat(self) -> int:
        return self.hess_u_on_shat.n_rows


@dataclass(frozen=True)
class E1Report:
    """The 4-dimensional block of the linearized field spanned by the
    configuration, its rotation, and their momenta."""

    matrix: Matrix
    xi: Fraction
    alpha: Fraction
    eigenvalue_squared: Fraction  # (alpha - 2) xi^2
    eigenvalues: tuple  # (0, 0, +lambda, -lambda)
    kernel_vector: tuple
    rank_powers: tuple  # ranks of matrix^1..4, exact
    nilpotent_similar: bool  # one 4x4 Jordan block; true exactly when alpha = 2


@dataclass(frozen=True)
class RelativeEquilibriumVerdict:
    alpha: float
    inertia_v: Optional[IndexReport]
    inertia_shat: IndexReport
    reduced: Optional[TheoremVerdict]  # emitted only for 0 < alpha < 2
    e2: TheoremVerdict

    @property
    def unstable_reduced(self) -> Optional[bool]:
        return None if self.reduced is None else self.reduced.predicts_instability

    @property
    def unstable_on_e2(self) -> bool:
        return self.e2.predicts_instability


# ---------------------------------------------------------------------------
# potential and derivatives


def _weighted_com(m: np.ndarray, q: np.ndarray) -> np.ndarray:
    pts = q.reshape(-1, 2)
    return (m[:, None] * pts).sum(axis=0) / m.sum()


def _min_pair_distance(q: np.ndarray, guard: float) -> float:
    pts = q.reshape(-1, 2)
    n = pts.shape[0]
    dmin = math.inf
    dmax = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d = float(np.hypot(*(pts[i] - pts[j])))
            dmin = min(dmin, d)
            dmax = max(dmax, d)
    if dmin <= guard * dmax or dmax == 0.0:
        raise CollisionError(
            f"minimum pairwise distance {dmin:.3e} under the guard "
            f"{guard:.1e} x diameter {dmax:.3e}")
    return dmin


def mass_matrix(sys: NBodySystem) -> np.ndarray:
    return np.diag(np.repeat(sys.mass_vector(), 2))


def _potential_parts(m: np.ndarray, q: np.ndarray, alpha: float,
                     guard: float = COLLISION_GUARD):
    _min_pair_distance(q, guard)
    pts = q.reshape(-1, 2)
    n = pts.shape[0]
    u = 0.0
    grad = np.zeros_like(q)
    hess = np.zeros((q.size, q.size))
    eye = np.eye(2)
    for i in range(n):
        for j in range(i + 1, n):
            d = pts[i] - pts[j]
            r2 = float(d @ d)
            r = math.sqrt(r2)
            mm = m[i] * m[j]
            u += mm * r ** (-alpha)
            g = -alpha * mm * r ** (-alpha - 2) * d
            grad[2 * i:2 * i + 2] += g
            grad[2 * j:2 * j + 2] -= g
            k = -alpha * mm * r ** (-alpha - 2) * (
                eye - (alpha + 2) * np.outer(d, d) / r2)
            for (a, b), blk in (((i, i), k), ((j, j), k), ((i, j), -k)):
                hess[2 * a:2 * a + 2, 2 * b:2 * b + 2] += blk
                if a != b:
                    hess[2 * b:2 * b + 2, 2 * a:2 * a + 2] += blk
    return u, grad, hess


def potential_U(sys: NBodySystem) -> float:
    """U(q) = sum over pairs of m_i m_j / |q_i - q_j|^alpha."""
    u, _, _ = _potential_parts(sys.mass_vector(), sys.q(), sys.alpha)
    return u


def grad_U(sys: NBodySystem) -> np.ndarray:
    _, g, _ = _potential_parts(sys.mass_vector(), sys.q(), sys.alpha)
    return g


def hess_U(sys: NBodySystem) -> Matrix:
    _, _, h = _potential_parts(sys.mass_vector(), sys.q(), sys.alpha)
    return Matrix.from_numpy((h + h.T) / 2)


def locked_inertia(sys: NBodySystem) -> float:
    """I(q) = q^T M q."""
    q = sys.q()
    return float(np.repeat(sys.mass_vector(), 2) @ (q * q))


def inertia_gradient(sys: NBodySystem) -> np.ndarray:
    """dI(q) = 2 M q."""
    return 2.0 * np.repeat(sys.mass_vector(), 2) * sys.q()


def rotation_direction(sys: NBodySystem) -> np.ndarray:
    """The infinitesimal rotation q-perp = (-y1, x1, -y2, x2, ...)."""
    return _perp(sys.q())


def _perp(q: np.ndarray) -> np.ndarray:
    out = np.empty_like(q)
    out[0::2] = -q[1::2]
    out[1::2] = q[0::2]
    return out


# ---------------------------------------------------------------------------
# central configurations


def _gauge_normalize(m: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Recenter, rotate body 1 onto the positive x-axis, rescale to I = 1."""
    q = q - np.tile(_weighted_com(m, q), m.size)
    r1 = math.hypot(q[0], q[1])
    scale = float(np.max(np.abs(q))) or 1.0
    if r1 > 1e-13 * scale:
        c, s = q[0] / r1, q[1] / r1
        rot = np.array([[c, s], [-s, c]])
        q = (q.reshape(-1, 2) @ rot.T).reshape(-1)
    inert = float(np.repeat(m, 2) @ (q * q))
    if inert <= 0:
        raise CollisionError("total collapse to the origin")
    return q / math.sqrt(inert)


def _slice_basis(m: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Euclidean-orthonormal basis of the Newton slice: center-of-mass
    neutral, orthogonal to M q (sphere tangent) and to M q-perp (rotation)."""
    mm = np.repeat(m, 2)
    rows = np.zeros((4, q.size))
    rows[0, 0::2] = m
    rows[1, 1::2] = m
    rows[2] = mm * q
    rows[3] = mm * _perp(q)
    _, sv, vt = np.linalg.svd(rows)
    if np.min(sv) <= 1e-12 * np.max(sv):
        raise BasisConstructionError("gauge constraints are rank deficient")
    return vt[4:].T


def _residual(m: np.ndarray, q: np.ndarray, alpha: float, guard: float):
    u, g, h = _potential_parts(m, q, alpha, guard)
    xi2 = alpha * u
    f = g + xi2 * np.repeat(m, 2) * q
    return float(np.linalg.norm(f)), u, g, h, xi2


def find_central_configuration(sys: NBodySystem,
                               settings: Optional[CCSettings] = None) -> CentralConfiguration:
    """Projected Newton search for a central configuration near the seed.

    Works on the gauge-fixed slice (center of mass at the origin, body 1 on
    the positive x-axis, I = 1); falls back to a projected gradient step with
    Armijo backtracking whenever the Newton step fails to reduce the
    residual DU + alpha U Mq.
    """
    cfg = settings or CCSettings()
    m = sys.mass_vector()
    alpha = sys.alpha
    mm = np.repeat(m, 2)
    q = _gauge_normalize(m, sys.q())
    res, u, g, h, xi2 = _residual(m, q, alpha, cfg.collision_guard)
    for _ in range(cfg.max_iter):
        if res <= cfg.cc_tol:
            break
        z = _slice_basis(m, q)
        if z.shape[1] == 0:
            raise ConvergenceError(
                "zero-dimensional slice with residual above tolerance")
        red_grad = z.T @ g
        red_hess = z.T @ (h + xi2 * np.diag(mm)) @ z
        directions = []
        try:
            directions.append(np.linalg.solve(red_hess, -red_grad))
        except np.linalg.LinAlgError:
            pass
        directions.append(-red_grad)
        moved = False
        for c in directions:
            if not np.all(np.isfinite(c)):
                continue
            t = 1.0
            while t >= 2.0 ** -40:
                try:
                    q_new = _gauge_normalize(m, q + t * (z @ c))
                    res_new, u_n, g_n, h_n, xi2_n = _residual(
                        m, q_new, alpha, cfg.collision_guard)
                except CollisionError:
                    t *= cfg.armijo_factor
                    continue
                if res_new < res * (1.0 - 1e-4 * t) or res_new < cfg.cc_tol:
                    q, res, u, g, h, xi2 = q_new, res_new, u_n, g_n, h_n, xi2_n
                    moved = True
                    break
                t *= cfg.armijo_factor
            if moved:
                break
        if not moved:
            raise ConvergenceError(
                f"no descent direction at residual {res:.3e}")
    else:
        if res > cfg.cc_tol:
            raise ConvergenceError(
                f"residual {res:.3e} above {cfg.cc_tol:.1e} "
                f"after {cfg.max_iter} iterations")
    system = NBodySystem.assemble(tuple(m), alpha, q)
    res_final, u, _, _, xi2 = _residual(m, system.q(), alpha, cfg.collision_guard)
    return CentralConfiguration(system, xi2, res_final)


# ---------------------------------------------------------------------------
# the amended Hessian on the slice


def _m_orthonormalize(z: np.ndarray, mm: np.ndarray) -> np.ndarray:
    gram = z.T @ (mm[:, None] * z)
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as e:
        raise BasisConstructionError("slice basis degenerate in the mass metric") from e
    return z @ np.linalg.inv(chol).T


def amended_hessian(cc: CentralConfiguration) -> AmendedHessianReport:
    """Second variation of the amended potential at a central configuration.

    Returns the form -D^2U - xi^2 M + 4 xi^2 (Mq)(Mq)^T on an M-orthonormal
    basis of V = span{q} (+) T_q Shat together with the constrained Hessian
    D^2U + xi^2 M of U restricted to the sphere tangent, both with inertias,
    plus the residuals of the radial eigenvector identity and of the sign
    identity relating the two forms.
    """
    sys = cc.system
    m = sys.mass_vector()
    mm = np.repeat(m, 2)
    q = sys.q()
    alpha = sys.alpha
    n = sys.n
    if n < 2:
        raise ShapeError("need at least two bodies")
    xi2 = cc.xi_squared
    _, _, h = _potential_parts(m, q, alpha)
    mq = mm * q
    form = -h - xi2 * np.diag(mm) + 4.0 * xi2 * np.outer(mq, mq)
    z_shat = _m_orthonormalize(_slice_basis(m, q), mm)
    if z_shat.shape[1] != 2 * n - 4:
        raise BasisConstructionError("sphere-tangent slice has the wrong dimension")
    y = np.column_stack([q, z_shat])  # already M-orthonormal jointly
    on_v = y.T @ form @ y
    on_v = (on_v + on_v.T) / 2
    constrained = h + xi2 * np.diag(mm)
    on_shat = z_shat.T @ constrained @ z_shat
    on_shat = (on_shat + on_shat.T) / 2
    op = form / mm[:, None]  # M^{-1} (form), the operator of the second variation
    lam = float(q @ form @ q)  # Rayleigh value, q is M-normalized
    radial_res = float(np.linalg.norm(op @ q - lam * q))
    op_scale = float(np.linalg.norm(op, 2)) or 1.0
    sign_res = float(np.max(np.abs(z_shat.T @ form @ z_shat + on_shat))) \
        if z_shat.shape[1] else 0.0
    return AmendedHessianReport(
        matrix_on_v=Matrix.from_numpy(on_v),
        inertia_v=inertia(Matrix.from_numpy(on_v)),
        hess_u_on_shat=Matrix.from_numpy(on_shat),
        inertia_shat=inertia(Matrix.from_numpy(on_shat)),
        radial_eigenvalue=lam,
        radial_residual=radial_res / op_scale,
        sign_identity_residual=sign_res,
        xi_squared=xi2,
        alpha=alpha,
    )


# ---------------------------------------------------------------------------
# the 4-dimensional symmetry block


def _fraction_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def e1_linearization(xi, alpha) -> E1Report:
    """Linearized field on the block spanned by the configuration, its
    rotation, and their momenta.

    The matrix has eigenvalues {0, 0, +sqrt(alpha-2) xi, -sqrt(alpha-2) xi};
    the zero eigenvalue sits in a 2x2 Jordan block (kernel spanned by
    (0, 1, xi, 0)), and for alpha = 2 the whole matrix is one nilpotent 4x4
    Jordan block, certified by the ranks of its powers.
    """
    xi_f = Fraction(xi)
    alpha_f = Fraction(alpha)
    if xi_f == 0:
        raise ValueError("xi must be nonzero")
    a = Matrix([
        [0, -xi_f, 1, 0],
        [xi_f, 0, 0, 1],
        [(alpha_f + 1) * xi_f ** 2, 0, 0, -xi_f],
        [0, -xi_f ** 2, xi_f, 0],
    ], "rational")
    lam2 = (alpha_f - 2) * xi_f ** 2
    if lam2 == 0:
        lam = 0j
    else:
        root = _fraction_sqrt(abs(lam2))
        mag = float(root) if root is not None else math.sqrt(abs(lam2))
        lam = complex(mag, 0.0) if lam2 > 0 else complex(0.0, mag)
    eigenvalues = (0j, 0j, lam, -lam)
    powers = []
    acc = a
    for _ in range(4):
        powers.append(rank(acc))
        acc = acc @ a
    rank_powers = tuple(powers)
    return E1Report(
        matrix=a,
        xi=xi_f,
        alpha=alpha_f,
        eigenvalue_squared=lam2,
        eigenvalues=eigenvalues,
        kernel_vector=(Fraction(0), Fraction(1), xi_f, Fraction(0)),
        rank_powers=rank_powers,
        nilpotent_similar=rank_powers == (3, 2, 1, 0),
    )


# ---------------------------------------------------------------------------
# instability verdicts


def stability_verdict(cc: CentralConfiguration) -> RelativeEquilibriumVerdict:
    """Parity-based instability verdicts for the relative equilibrium.

    For 0 < alpha < 2 the verdict on the reduced space applies the parity
    rule to the amended form on V; for every alpha > 0 the verdict on the
    symplectic complement of the symmetry block applies it to the Morse data
    of the central configuration itself.  Both verdicts are reported; odd
    index or odd nullity anywhere means linear instability there.
    """
    rep = amended_hessian(cc)
    e2 = parity_verdict(rep.inertia_shat.morse_index, rep.inertia_shat.nullity)
    alpha = cc.system.alpha
    if 0 < alpha < 2:
        reduced = parity_verdict(rep.inertia_v.morse_index, rep.inertia_v.nullity)
        return RelativeEquilibriumVerdict(alpha, rep.inertia_v, rep.inertia_shat,
                                          reduced, e2)
    return RelativeEquilibriumVerdict(alpha, rep.inertia_v, rep.inertia_shat,
                                      None, e2)
