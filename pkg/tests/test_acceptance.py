"""One test per acceptance criterion, each at its stated tolerance.

Every test prints a single ``[PASS]``/``[FAIL]`` line (also collected in
the terminal summary) before asserting.
"""

import math
import time
from fractions import Fraction

import numpy as np

from pickspace.kernels import (
    KernelSpec,
    complete_pick_gram,
    inclusion_descent_check,
    max_contractive_scale,
    min_eigenvalue,
    pick_refutation_search,
    random_points,
    schur_product,
)
from pickspace.multops import (
    column_sq_lower,
    counterexample_report,
    d_contraction_check,
    mult_matrix,
    random_tuple,
    row_from_column_report,
)
from pickspace.oracle import (
    QuadratureConfig,
    mult_matrix_raw,
    norm_cross_validation,
    orthogonality_checks,
)
from pickspace.polyring import Polynomial, indices_up_to, random_polynomial
from pickspace.spaces import RadialWeight, SpaceSpec, besov_shift_ratio, monomial_norm, monomial_norm_da, space_norm
from pickspace.weakprod import (
    SmirnovWitness,
    hankel_build,
    hankel_intertwine_check,
    rescale_to_equal_norm,
    smirnov_verify,
    square_split,
)


def _expansion_counts(d: int, n_max: int) -> dict:
    """Integer coefficients of ``(x_1 + ... + x_d)^n`` for ``n <= n_max`` by
    repeated multiplication; the Drury-Arveson kernel coefficients."""
    counts = {(0,) * d: 1}
    level = {(0,) * d: 1}
    for _ in range(n_max):
        nxt: dict = {}
        for a, c in level.items():
            for i in range(d):
                b = a[:i] + (a[i] + 1,) + a[i + 1 :]
                nxt[b] = nxt.get(b, 0) + c
        counts.update(nxt)
        level = nxt
    return counts


def test_criterion_01_drury_arveson_norms_exact(verdict):
    t0 = time.perf_counter()
    bad = 0
    checked = 0
    for d in range(1, 5):
        counts = _expansion_counts(d, 10)
        da = SpaceSpec.drury_arveson(d)
        for alpha in indices_up_to(d, 10):
            exact = monomial_norm_da(alpha)
            ok = exact == Fraction(1, counts[alpha]) and monomial_norm(da, alpha) == float(exact)
            bad += not ok
            checked += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 1.0
    verdict(1, "Drury-Arveson monomial norms", ok, f"{checked} indices, {bad} mismatches, {elapsed:.3f}s")
    assert ok


def test_criterion_02_counterexample(verdict):
    t0 = time.perf_counter()
    lines = []
    ok = True
    for n_max in (8, 16, 32):
        rep = counterexample_report(2, n_max, n_max + 1)
        growth = column_sq_lower(2, n_max) - column_sq_lower(2, n_max // 2)
        row_sq = rep.row_upper_truncated**2
        good = (
            growth >= math.log(2) - 0.05
            and math.isclose(rep.column_sq_from_tuple, rep.column_sq_lower, rel_tol=1e-12)
            and row_sq <= rep.row_sq_bound + 1e-8
            and rep.row_sq_bound <= math.pi**2 / 6 + 1e-8
        )
        ok &= good
        lines.append(f"n_max={n_max}: growth {growth:.4f}, row^2 {row_sq:.10f} <= {rep.row_sq_bound:.10f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    verdict(2, "counterexample columns diverge, rows bounded", ok, "; ".join(lines) + f" ({elapsed:.1f}s)")
    assert ok


def test_criterion_03_d_contraction(verdict, rng):
    worst = math.inf
    for trial in range(100):
        d = 2 + trial % 2
        fs = [random_polynomial(d, int(rng.integers(0, 9)), rng) for _ in range(d)]
        worst = min(worst, d_contraction_check(fs))
    ok = worst >= -1e-12
    verdict(3, "d-contraction slack", ok, f"min slack {worst:.3e} over 100 tuples")
    assert ok


def test_criterion_04_complete_pick_certificates(verdict):
    details = []
    ok = True
    for k in (KernelSpec.drury_arveson(2), KernelSpec.drury_arveson(3), KernelSpec.szego()):
        lam = min_eigenvalue(complete_pick_gram(k, random_points(k.dim, 30, seed=7)))
        ok &= lam >= -1e-10
        details.append(f"{k.label()} min eig {lam:.2e}")
    for d in (1, 2):
        res = pick_refutation_search(KernelSpec.power(d, d + 1), 10_000, seed=11)
        ok &= res.min_eig < -1e-6 and res.witness is not None
        details.append(f"bergman d={d} refuted after {res.trials} trials (min eig {res.min_eig:.3e})")
    verdict(4, "complete Pick certificates", ok, "; ".join(details))
    assert ok


def test_criterion_05_schur_product(verdict, rng):
    worst = math.inf
    for _ in range(100):
        n = int(rng.integers(1, 13))
        mats = []
        for _ in range(2):
            r = int(rng.integers(1, n + 1))
            X = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
            mats.append(X @ X.conj().T)
        A, B = mats
        scale = np.linalg.norm(A, 2) * np.linalg.norm(B, 2)
        worst = min(worst, min_eigenvalue(schur_product(A, B)) / scale)
    ok = worst >= -1e-10
    verdict(5, "Schur product psd", ok, f"min eig / (||A|| ||B||) = {worst:.2e}")
    assert ok


def test_criterion_06_inclusion_descent(verdict, rng):
    pts = random_points(2, 25, seed=3)
    k = KernelSpec.besov_power(2, 1.0)
    worst_level = worst_down = math.inf
    for _ in range(20):
        phi = random_polynomial(2, int(rng.integers(1, 5)), rng)
        phi = phi.scale(0.999 * max_contractive_scale(k, k, phi, pts))
        level, down = inclusion_descent_check(phi, 2, 1.0, 1.0, pts)
        worst_level = min(worst_level, level)
        worst_down = min(worst_down, down)
    ok = worst_level >= -1e-10 and worst_down >= -1e-8
    verdict(6, "inclusion descent", ok, f"level min eig {worst_level:.2e}, descended min eig {worst_down:.2e}")
    assert ok


def test_criterion_07_row_column_constant(verdict, rng):
    space = SpaceSpec.besov(1, 1.0)
    tuples = [random_tuple(1, 5, 4, rng) for _ in range(50)]
    rep = row_from_column_report(space, space, tuples, 12)
    bound = math.sqrt(18) + 0.01
    ok = rep.empirical_c <= bound
    verdict(7, "row/column constant", ok, f"empirical {rep.empirical_c:.4f} <= {bound:.4f}")
    assert ok


def test_criterion_08_besov_index_shift(verdict):
    details = []
    ok = True
    for s, a in ((1.0, 1.0), (0.5, 1.0)):
        for d in (1, 2):
            lo, hi = besov_shift_ratio(s, a, d, 40)
            ok &= hi / lo <= 10
            details.append(f"(s={s:g}, a={a:g}, d={d}) {hi / lo:.3f}")
    verdict(8, "Besov index shift band", ok, "max/min " + ", ".join(details))
    assert ok


def test_criterion_09_hankel_intertwining(verdict, rng):
    spaces = [SpaceSpec.drury_arveson(2), SpaceSpec.besov(2, 0.5), SpaceSpec.bergman(2, 1.0)]
    D = 6
    worst = 0.0
    for trial in range(20):
        space = spaces[trial % len(spaces)]
        phi = random_polynomial(2, int(rng.integers(0, 3)), rng)
        b = random_polynomial(2, int(rng.integers(0, 5)), rng)
        H = hankel_build(space, b, D)
        worst = max(worst, hankel_intertwine_check(H, phi, D - max(phi.degree, 0)))
    ok = worst <= 1e-12
    verdict(9, "Hankel intertwining", ok, f"max defect {worst:.2e}")
    assert ok


def test_criterion_10_square_split(verdict, rng):
    spaces = [SpaceSpec.drury_arveson(2), SpaceSpec.besov(2, 1.0), SpaceSpec.besov(1, 0.5)]
    worst_res = worst_book = 0.0
    for trial in range(100):
        space = spaces[trial % len(spaces)]
        f = random_polynomial(space.dim, int(rng.integers(0, 5)), rng)
        g = random_polynomial(space.dim, int(rng.integers(0, 5)), rng)
        f, g = rescale_to_equal_norm(f, g, space)
        (A, _), (B, _) = square_split(f, g, space).pairs
        worst_res = max(worst_res, space_norm(space, A * A - B * B - f * g))
        book = space_norm(space, f) * space_norm(space, g) - space_norm(space, A) ** 2 - space_norm(space, B) ** 2
        worst_book = max(worst_book, abs(book))
    ok = worst_res <= 1e-12 and worst_book <= 1e-10
    verdict(10, "parallelogram square split", ok, f"residual {worst_res:.2e}, bookkeeping {worst_book:.2e}")
    assert ok


def test_criterion_11_oracle_gates(verdict, rng):
    weights = [RadialWeight.one(), RadialWeight.standard(1.0), RadialWeight.standard(0.5), RadialWeight.standard(-0.5)]
    quad = norm_cross_validation(weights, [1, 2, 3], 4)
    quad_err = max(r.rel_error for r in quad)

    raw_err = 0.0
    for space in (SpaceSpec.drury_arveson(2), SpaceSpec.besov(2, 1.0), SpaceSpec.bergman(3, 1.0)):
        for _ in range(3):
            phi = random_polynomial(space.dim, 2, rng)
            raw_err = max(raw_err, float(np.max(np.abs(mult_matrix(space, space, phi, 3) - mult_matrix_raw(space, phi, 3)))))

    cfg = QuadratureConfig(n_samples=100_000, seed=5)
    mc = orthogonality_checks(2, 2, cfg) + orthogonality_checks(1, 3, cfg, RadialWeight.standard(1.0))
    z_max = max(r.z_score for r in mc)

    ok = quad_err <= 0.005 and raw_err <= 1e-11 and z_max <= 3 and cfg.n_samples >= 100_000
    verdict(
        11,
        "oracle gates",
        ok,
        f"quadrature rel err {quad_err:.2e} ({len(quad)} norms), raw matrix diff {raw_err:.2e}, "
        f"max MC z-score {z_max:.2f} ({len(mc)} inner products)",
    )
    assert ok


def test_criterion_12_smirnov_witness(verdict):
    space = SpaceSpec.drury_arveson(2)
    psi = Polynomial.coordinate(2, 0, 0.5)
    h = Polynomial(2, {(0, 0): 1.0, (1, 1): 2.0, (0, 2): -1 / 3, (3, 0): 0.25j})
    phi = (1 - psi) ** 2 * h
    rep = smirnov_verify(SmirnovWitness(h, phi, psi), space, 15)
    bounds_ok = all(a <= 1 + 1e-9 and b <= 2 + 1e-9 for a, b in rep.frac_bounds.values())
    ok = rep.residual <= 1e-12 and bounds_ok and sorted(rep.frac_bounds) == [0.5, 0.9, 0.99]
    detail = ", ".join(f"r={r}: ({a:.4f}, {b:.4f})" for r, (a, b) in rep.frac_bounds.items())
    verdict(12, "Smirnov witness", ok, f"residual {rep.residual:.2e}; bounds {detail}")
    assert ok
