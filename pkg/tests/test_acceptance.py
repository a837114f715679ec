"""Acceptance suite.

One test per acceptance criterion; each prints exactly one PASS/FAIL line
(visible with -s, and mirrored by the -v test status) and then asserts.
Randomized suites draw from the session seed in conftest, overridable with
RELEQUIL_SEED.
"""

import io
import math
from fractions import Fraction

import numpy as np

import helpers as H
from relequil.cli import run_examples
from relequil.matrix_core import (
    RATIONAL,
    Matrix,
    char_poly,
    complex_spectrum,
    inertia,
    is_semisimple,
    standard_symplectic,
)
from relequil.nbody import (
    NBodySystem,
    amended_hessian,
    e1_linearization,
    find_central_configuration,
    grad_U,
    hess_U,
    stability_verdict,
)
from relequil.spectral_flow import (
    IrregularCrossingError,
    LinearPath,
    kappa_identity_check,
    relative_morse_index,
    spectral_flow,
)
from relequil.stability import Verdict, block_normal_form, classify, theorem_predict

COUNTEREXAMPLE = Matrix.diagonal([-2, -1, 1, -1, 0, 0])


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {name}: {status}"
    if detail and not ok:
        line += f" ({detail})"
    print(line)


# ---------------------------------------------------------------------------


def test_criterion_1_counterexample_reproduction():
    # diag{-2,-1,1,-1,0,0}: on-axis spectrum {0 x4, +/- i sqrt 2}, not
    # semisimple, Morse index 3, nullity 2; everything exact
    cls = classify(COUNTEREXAMPLE)
    ir = inertia(COUNTEREXAMPLE)
    jb = standard_symplectic(3) @ COUNTEREXAMPLE
    cp = char_poly(jb)
    spectrum = {(round(ev.value.real, 15), round(ev.value.imag, 15),
                 ev.multiplicity) for ev in complex_spectrum(jb)}
    r2 = math.sqrt(2)
    ok = (
        cp == [0, 0, 0, 0, Fraction(2), 0, Fraction(1)]
        and cls.verdict == Verdict.SPECTRALLY_STABLE_NOT_LINEAR
        and cls.spectrum_on_axis is True
        and cls.semisimple is False
        and cls.tol == 0
        and (ir.morse_index, ir.nullity) == (3, 2)
        and spectrum == {(0.0, 0.0, 4),
                         (0.0, round(r2, 15), 1), (0.0, round(-r2, 15), 1)}
    )
    report("criterion-1 counterexample reproduction", ok)
    assert ok, (cls, ir, cp, spectrum)


def test_criterion_2_parity_theorem_random_suite(rng):
    # 1000 random rational symmetric matrices on the even dimensions 2..8;
    # odd Morse index or odd nullity must never classify as linearly stable
    violations = []
    for trial in range(1000):
        n = 1 + trial % 4
        rows = H.random_symmetric(rng, 2 * n, num=3, den=2)
        if trial % 5 == 0:
            wipe = rng.randrange(2 * n)
            for i in range(2 * n):
                rows[i][wipe] = rows[wipe][i] = Fraction(0)
        b = Matrix(rows, RATIONAL)
        pred = theorem_predict(b)
        if (pred.morse_index % 2 == 1 or pred.nullity % 2 == 1):
            if classify(b).verdict == Verdict.LINEARLY_STABLE:
                violations.append(rows)
    ok = not violations
    report("criterion-2 parity theorem on 1000 random matrices", ok,
           f"{len(violations)} violations")
    assert ok, violations[:1]


def test_criterion_3_constructed_stable_suite(rng):
    # 200 diagonal pair assemblies from stable 2x2 blocks and zero pairs:
    # linearly stable, even indices, and the counting identity holds exactly
    bad = []
    for _ in range(200):
        n = rng.randint(1, 4)
        pairs = []
        n_zero = 0
        for _k in range(n):
            kind = rng.choice(["pp", "mm", "zz"])
            if kind == "zz":
                pairs.append((Fraction(0), Fraction(0)))
                n_zero += 1
            else:
                a = Fraction(rng.randint(1, 4), rng.randint(1, 3))
                b = Fraction(rng.randint(1, 4), rng.randint(1, 3))
                if kind == "mm":
                    a, b = -a, -b
                pairs.append((a, b))
        rows = H.pair_diagonal(pairs)
        m = Matrix(rows, RATIONAL)
        ir = inertia(m)
        k = kappa_identity_check(m)
        good = (
            classify(m).verdict == Verdict.LINEARLY_STABLE
            and ir.morse_index % 2 == 0
            and ir.nullity % 2 == 0
            and k.holds is True
            and k.kappa == n - n_zero
            and k.nullity == 2 * n_zero
            and k.kappa == H.kappa_float(rows)
        )
        if not good:
            bad.append(pairs)
    ok = not bad
    report("criterion-3 constructed stable suite with counting identity", ok,
           f"{len(bad)} failures")
    assert ok, bad[:1]


def test_criterion_4_block_taxonomy(rng):
    # 50 random pairs per case; closed-form eigenvalues against the dense
    # eigensolver to 1e-12, exact magnitudes on rational squares, and the
    # Jordan detector separating the degenerate case
    failures = []

    def check(a, b):
        f = block_normal_form(a, b)
        product = Fraction(a) * Fraction(b)
        if product > 0:
            want_kind = "imaginary_pair"
        elif product < 0:
            want_kind = "real_pair"
        else:
            want_kind = "zero" if a == b == 0 else "nilpotent_jordan"
        got = sorted(np.linalg.eigvals(f.matrix.to_numpy()),
                     key=lambda z: (z.real, z.imag))
        want = sorted(f.eigenvalues, key=lambda z: (z.real, z.imag))
        root = complex(np.sqrt(complex(-product)))
        closed = sorted([root, -root], key=lambda z: (z.real, z.imag))
        eig_ok = all(abs(g - w) <= 1e-12 for g, w in zip(got, want)) and \
            all(abs(c - w) <= 1e-12 for c, w in zip(closed, want))
        semi = is_semisimple(f.matrix).semisimple
        semi_ok = semi == (f.kind != "nilpotent_jordan")
        exact_ok = True
        if f.exact_magnitude is not None:
            exact_ok = f.exact_magnitude ** 2 == abs(product)
        else:
            # no rational square root may exist
            num, den = abs(product).numerator, abs(product).denominator
            exact_ok = product == 0 or not (
                math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den)
        if not (f.kind == want_kind and eig_ok and semi_ok and exact_ok):
            failures.append((a, b, f.kind))

    for _ in range(50):
        a = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        b = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        sign = rng.choice([1, -1])
        check(sign * a, sign * b)                      # same sign: imaginary
        check(a, -b)                                   # opposite: real pair
        check(rng.choice([a, Fraction(0)]), Fraction(0))  # degenerate
    ok = not failures
    report("criterion-4 block taxonomy on 150 random pairs", ok,
           f"{len(failures)} failures")
    assert ok, failures[:3]


def test_criterion_5_spectral_flow_agreement(rng):
    # 100 straight paths with invertible endpoints: flow equals the Morse
    # index drop; relative Morse index is additive on 100 triples
    mismatches = 0
    done = 0
    while done < 100:
        dim = rng.choice([2, 3, 4])
        a0 = Matrix(H.random_invertible_symmetric(rng, dim, num=3, den=2), RATIONAL)
        a1 = Matrix(H.random_invertible_symmetric(rng, dim, num=3, den=2), RATIONAL)
        try:
            flow = spectral_flow(LinearPath(a0, a1)).flow
        except IrregularCrossingError:
            continue  # straight line through a degenerate crossing: resample
        if flow != inertia(a0).morse_index - inertia(a1).morse_index:
            mismatches += 1
        done += 1
    additivity_bad = 0
    for _ in range(100):
        dim = rng.choice([2, 3])
        mats = [Matrix(H.random_invertible_symmetric(rng, dim, num=3, den=2),
                       RATIONAL) for _ in range(3)]
        try:
            total = relative_morse_index(mats[0], mats[2])
            first = relative_morse_index(mats[0], mats[1])
            second = relative_morse_index(mats[1], mats[2])
        except IrregularCrossingError:
            continue
        if total != first + second:
            additivity_bad += 1
    ok = mismatches == 0 and additivity_bad == 0
    report("criterion-5 spectral flow equals index drop plus additivity", ok,
           f"{mismatches} flow mismatches, {additivity_bad} additivity breaks")
    assert ok


def test_criterion_6_symmetry_block_spectrum():
    # eigenvalues {0, 0, +/- sqrt(alpha-2) xi} across the alpha grid, and the
    # alpha = 2 rank powers certify a single 4x4 Jordan block
    bad = []
    for alpha in (0.5, 1, 1.5, 3):
        for xi in (1, 2):
            rep = e1_linearization(xi, alpha)
            lam2 = complex(alpha - 2) * xi * xi
            lam = np.sqrt(lam2)
            want = sorted([0j, 0j, lam, -lam], key=lambda z: (z.real, z.imag))
            got = sorted(rep.eigenvalues, key=lambda z: (z.real, z.imag))
            closed_ok = all(abs(g - w) <= 1e-10 for g, w in zip(got, want))
            dense = np.linalg.eigvals(rep.matrix.to_numpy())
            nonzero_ok = all(
                min(abs(dense - z)) <= 1e-10 for z in rep.eigenvalues if z != 0)
            cp_ok = char_poly(rep.matrix) == [
                0, 0, -Fraction(alpha - 2) * xi * xi, 0, 1]
            if not (closed_ok and nonzero_ok and cp_ok):
                bad.append((alpha, xi))
    rep2 = e1_linearization(1, 2)
    jordan_ok = rep2.rank_powers == (3, 2, 1, 0) and rep2.nilpotent_similar
    ok = not bad and jordan_ok
    report("criterion-6 symmetry block spectrum and Jordan structure", ok,
           f"bad={bad}, jordan={jordan_ok}")
    assert ok


def test_criterion_7_nbody_pipeline():
    # perturbed equilateral seed: cc residual, radial identity, sign
    # identity, and the integer index relations
    seed = [(0.02, -0.01), (1.03, 0.05), (0.48, math.sqrt(3) / 2 + 0.03)]
    cc = find_central_configuration(NBodySystem.assemble([1.0] * 3, 1.0, seed))
    rep = amended_hessian(cc)
    n = cc.system.n
    radial_ok = (rep.radial_residual <= 1e-8
                 and abs(rep.radial_eigenvalue
                         - (2 - cc.system.alpha) * cc.xi_squared) <= 1e-8)
    # independent check of the shape-sphere index with a dense eigensolver
    shat_vals = np.linalg.eigvalsh(rep.hess_u_on_shat.to_numpy())
    dense_index = int(np.sum(shat_vals < -1e-9))
    relations_ok = (
        rep.inertia_v.nullity == rep.inertia_shat.nullity
        and rep.inertia_v.morse_index ==
        2 * n - 4 - rep.inertia_shat.nullity - rep.inertia_shat.morse_index
        and dense_index == rep.inertia_shat.morse_index
    )
    verdict = stability_verdict(cc)
    ok = (cc.residual <= 1e-10 and radial_ok
          and rep.sign_identity_residual <= 1e-8 and relations_ok
          and verdict.e2.predicts_instability is False)
    report("criterion-7 equilateral three-body pipeline", ok,
           f"residual={cc.residual:.2e}")
    assert ok, (cc.residual, rep)


def test_criterion_8_derivative_oracles(rng):
    # gradient and Hessian against central differences on 50 random
    # non-collision configurations across the force-law grid
    worst_g = worst_h = 0.0
    alphas = (0.5, 1.0, 2.0)
    for trial in range(50):
        alpha = alphas[trial % 3]
        n = rng.choice([2, 3, 4])
        masses = [rng.uniform(0.5, 2.0) for _ in range(n)]
        pts = H.random_noncollision_config(rng, n)
        s = NBodySystem.assemble(masses, alpha, pts)
        x = s.q()
        f = lambda y: H.nbody_potential(masses, alpha, y)
        g = grad_U(s)
        fd_g = H.fd_gradient(f, x)
        worst_g = max(worst_g,
                      float(np.linalg.norm(g - fd_g) / np.linalg.norm(g)))
        hm = hess_U(s).to_numpy()
        fd_h = H.fd_hessian(f, x)
        worst_h = max(worst_h,
                      float(np.linalg.norm(hm - fd_h) / np.linalg.norm(hm)))
    ok = worst_g < 1e-5 and worst_h < 1e-5
    report("criterion-8 derivative oracles on 50 configurations", ok,
           f"grad={worst_g:.2e}, hess={worst_h:.2e}")
    assert ok, (worst_g, worst_h)


def test_criterion_9_cli_determinism():
    first, second = io.StringIO(), io.StringIO()
    code1 = run_examples(first)
    code2 = run_examples(second)
    identical = first.getvalue().encode() == second.getvalue().encode()
    ok = code1 == 0 and code2 == 0 and identical
    report("criterion-9 example report byte stability", ok)
    assert ok
