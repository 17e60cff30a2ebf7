import math

import numpy as np
import pytest
from scipy.optimize import brentq

from sirsbif import DomainError, validate_params
from sirsbif.hopf import (closed_form_L, closed_form_f1, engine_calibration,
                          factor_values, focal_values,
                          hierarchy_smallest_singular_value, hopf_locus,
                          hopf_parameters, in_omega_star, omega_star_bounds,
                          theta1_closed_form, weak_focus_order)

from oracles import sample_omega_star


def test_hopf_locus_reference_point():
    locus = hopf_locus(1, 1, 1, 2)
    assert locus.lambda0_breve == pytest.approx(5.0, rel=1e-14)
    assert locus.gamma_breve == pytest.approx(6.0, rel=1e-14)
    assert locus.D == pytest.approx(1.0, rel=1e-14)
    assert locus.in_omega_star
    assert locus.res_trace <= 1e-10


def test_hopf_locus_band_boundaries():
    lo, hi = omega_star_bounds(1.0, 1.0, 2.0)
    assert lo == pytest.approx(0.5, rel=1e-14)
    # the determinant vanishes exactly on the lower boundary
    locus = hopf_locus(1.0, 1.0, lo, 2.0)
    assert locus.D == pytest.approx(0.0, abs=1e-14)
    assert not locus.in_omega_star
    # above the band: gamma_breve <= eta, flagged rather than raised
    above = hopf_locus(1.0, 1.0, 9.0, 2.0)
    assert not above.in_omega_star
    assert above.gamma_breve <= 9.0


def test_gamma_breve_equals_upper_band_edge():
    rng = np.random.default_rng(6)
    for _ in range(30):
        z, p, eta, k = sample_omega_star(rng)
        _, gam = hopf_parameters(z, p, eta, k)
        _, hi = omega_star_bounds(z, p, k)
        assert gam == pytest.approx(hi, rel=1e-12)


def test_closed_form_f1_reference_value():
    assert closed_form_f1(1, 1, 1, 2) == pytest.approx(2.0, rel=1e-14)
    assert theta1_closed_form(1, 1, 1, 2) == pytest.approx(0.25, rel=1e-14)


def test_closed_form_L_reference_values():
    L11, L22 = closed_form_L(1.0, 1.0, 1.0)
    assert L11 == pytest.approx(1.0, rel=1e-14)
    # the two closed-form normalizations agree: f1/(8 eta z^2 D^1.5) = p z L11/(4 eta D^1.5)
    assert theta1_closed_form(1, 1, 1, 2) == pytest.approx(1.0 * 1.0 * L11 / 4.0, rel=1e-14)


def test_L11_is_linear_in_p_at_eta_two():
    # leading coefficient of L11 in p is z^3 (2 - eta)
    z = 1.3
    second_diff = (closed_form_L(z, 2.0, 2.0)[0]
                   - 2.0 * closed_form_L(z, 1.0, 2.0)[0]
                   + closed_form_L(z, 0.0, 2.0)[0])
    assert second_diff == pytest.approx(0.0, abs=1e-12)


def test_k2_identity_between_normalizations():
    rng = np.random.default_rng(8)
    for _ in range(60):
        k = 2.0
        z = float(rng.uniform(0.1, 3.0))
        p = float(rng.uniform(0.05, 4.0))
        lo, hi = omega_star_bounds(z, p, k)
        eta = lo + float(rng.uniform(0.05, 0.95)) * (hi - lo)
        if not in_omega_star(z, p, eta, k):
            continue
        D = p * eta * z**2 + eta * z - 1.0
        if D < 0.01:
            continue
        L11, _ = closed_form_L(z, p, eta)
        lhs = closed_form_f1(z, p, eta, k) / (8.0 * eta * z**2 * D**1.5)
        rhs = p * z * L11 / (4.0 * eta * D**1.5)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


def test_engine_reference_point_and_calibration():
    fv = focal_values(1, 1, 1, 2, count=1)
    assert fv.theta1_closed_form == pytest.approx(0.25, rel=1e-13)
    assert fv.calibration == pytest.approx(2.0, rel=1e-12)
    assert fv.calibration * fv.theta[0] == pytest.approx(0.25, rel=1e-12)
    assert fv.order == 1 and fv.stability == "unstable"


def test_engine_matches_closed_form_scale_across_samples():
    rng = np.random.default_rng(13)
    calib = engine_calibration()
    for _ in range(40):
        z, p, eta, k = sample_omega_star(rng)
        fv = focal_values(z, p, eta, k, count=1)
        reference = theta1_closed_form(z, p, eta, k)
        scaled = abs(reference) * 8.0 * eta * z**2
        if scaled < 1e-8:
            continue
        assert calib * fv.theta[0] == pytest.approx(reference, rel=1e-6)


def test_engine_vanishes_on_f1_zero_locus():
    rng = np.random.default_rng(14)
    found = 0
    while found < 20:
        z, _, eta, k = sample_omega_star(rng, k_lo=1.2, k_hi=3.5)
        f = lambda p: closed_form_f1(z, p, eta, k)
        ps = np.geomspace(1e-3, 50, 300)
        vals = [f(p) for p in ps]
        root = None
        for a, b, fa, fb in zip(ps[:-1], ps[1:], vals[:-1], vals[1:]):
            if fa * fb < 0:
                root = brentq(f, a, b, xtol=1e-14, rtol=1e-15)
                break
        if root is None or not in_omega_star(z, root, eta, k):
            continue
        fv = focal_values(z, root, eta, k, count=1)
        assert abs(fv.theta[0]) <= fv.zero_tols[0]
        found += 1


def test_theta2_positive_on_f1_zero_locus_k2():
    for z, eta in [(1.0, 1.5), (2.0, 0.8), (1.0, 1.2)]:
        f = lambda p: closed_form_f1(z, p, eta, 2.0)
        ps = np.geomspace(1e-3, 50, 400)
        vals = [f(p) for p in ps]
        root = None
        for a, b, fa, fb in zip(ps[:-1], ps[1:], vals[:-1], vals[1:]):
            if fa * fb < 0:
                root = brentq(f, a, b, xtol=1e-14)
                break
        assert root is not None and in_omega_star(z, root, eta, 2.0)
        fv = focal_values(z, root, eta, 2.0, count=2)
        assert abs(fv.theta[0]) <= fv.zero_tols[0]
        assert fv.theta[1] > 0.0
        _, L22 = closed_form_L(z, root, eta)
        assert L22 > 0.0


def test_factor_values_reference():
    fa = factor_values(1.0, 1.0, 1.5, 3.0)
    assert fa.R0f == pytest.approx(3.0 * 1.5 - 1.5 - 3.0, rel=1e-14)
    assert fa.z_breve is None
    fb = factor_values(1.0, 1.0, 1.0, 1.8)
    assert fb.z_breve == pytest.approx(0.675, rel=1e-12)
    # R0 vanishes exactly at eta = k/(k-1)
    for k in (1.5, 2.5, 4.0):
        assert factor_values(1.0, 1.0, k / (k - 1.0), k).R0f \
            == pytest.approx(0.0, abs=1e-12)


def test_l1_formula_and_z_breve_root():
    # z_breve is the positive zero of l1 for 3/2 < k < 2
    for k in (1.6, 1.8, 1.95):
        fa = factor_values(1.0, 1.0, 1.0, k)
        zb = fa.z_breve
        at_root = factor_values(zb, 1.0, 1.0, k)
        assert at_root.l1 == pytest.approx(0.0, abs=1e-10)


def test_factor_sign_claims():
    rng = np.random.default_rng(15)
    for _ in range(30):
        z = float(rng.uniform(0.05, 4.0))
        eta = float(rng.uniform(0.05, 3.0))
        k_hi = float(rng.uniform(2.01, 6.0))
        hi = factor_values(z, 1.0, eta, k_hi)
        assert hi.l1 > 0.0 and hi.l3 > 0.0
        k_lo = float(rng.uniform(1.01, 1.99))
        lo = factor_values(z, 1.0, eta, k_lo)
        assert lo.l2 < 0.0 and lo.l3 > 0.0


def test_l2_vanishes_at_registered_order2_scenario():
    # pins the reconstructed l2 polynomial against a scenario that sits on
    # its zero set (parameters carry ~5 significant digits, hence the loose tol)
    from sirsbif.equilibria import classified_equilibria
    params = validate_params(0.4, 5.06313, 4.4746, 0.870547, 3.0)
    focus = [r for r in classified_equilibria(params) if r.det > 0][0]
    fa = factor_values(focus.z, params.p, params.eta, params.k)
    k, z = params.k, focus.z
    scale = (abs(12 * (k - 1) ** 2 * (k - 2) * z**2)
             + abs(4 * (k - 1) * (k - 2) * (2 * k - 1) * z)
             + abs(k * (2 * k - 1) ** 2))
    assert abs(fa.l2) < 1e-3 * scale


def test_weak_focus_order_reference():
    order, stability = weak_focus_order(1, 1, 1, 2)
    assert order == 1 and stability == "unstable"


def test_weak_focus_order_on_R1_locus():
    # eta = (2 - k)/(k - 1) makes the R1 factor vanish; order 1, unstable
    k = 1.5
    eta = (2.0 - k) / (k - 1.0)
    for p in (0.5, 1.0, 2.0):
        assert in_omega_star(1.0, p, eta, k)
        fa = factor_values(1.0, p, eta, k)
        assert fa.R1f == pytest.approx(0.0, abs=1e-14)
        order, stability = weak_focus_order(1.0, p, eta, k)
        assert order == 1 and stability == "unstable"


def test_hierarchy_is_well_conditioned_at_odd_degrees():
    for n in (3, 5, 7, 9):
        assert hierarchy_smallest_singular_value(n) > 1e-10


def test_focal_values_rejects_outside_band():
    with pytest.raises(DomainError):
        focal_values(1.0, 1.0, 9.0, 2.0)
    with pytest.raises(DomainError):
        focal_values(1.0, 1.0, 1.0, 2.0, count=5)


def test_order_two_structure_on_l1_zero_locus():
    # on z = z_breve(k) with eta = 5(2-k)/(2k-3) the first focal value is a
    # quadratic in p: one admissible root for k above ~1.74557 (order-2 focus
    # with positive second focal value), none below
    for k in (1.76, 1.8, 1.9, 1.95):
        zb = k * (2 * k - 3) / (10 * (k - 1) * (2 - k))
        eb = 5 * (2 - k) / (2 * k - 3)
        f = lambda p: closed_form_f1(zb, p, eb, k)
        ps = np.geomspace(1e-4, 500, 2000)
        vals = [f(p) for p in ps]
        roots = [brentq(f, a, b, xtol=1e-15, rtol=1e-15)
                 for a, b, fa, fb in zip(ps[:-1], ps[1:], vals[:-1], vals[1:])
                 if fa * fb < 0]
        admissible = [p for p in roots if in_omega_star(zb, p, eb, k)]
        assert len(admissible) == 1
        assert factor_values(zb, admissible[0], eb, k).l1 == pytest.approx(0.0, abs=1e-9)
        fv = focal_values(zb, admissible[0], eb, k, count=2)
        assert fv.order == 2
        assert fv.theta[1] > 0.0
    for k in (1.55, 1.65, 1.74):
        zb = k * (2 * k - 3) / (10 * (k - 1) * (2 - k))
        eb = 5 * (2 - k) / (2 * k - 3)
        vals = [closed_form_f1(zb, p, eb, k) for p in np.geomspace(1e-4, 500, 2000)]
        assert all(v < 0 for v in vals) or all(v > 0 for v in vals)


def test_engine_computes_four_values_stably():
    rng = np.random.default_rng(33)
    for _ in range(20):
        z, p, eta, k = sample_omega_star(rng, k_lo=1.05, k_hi=5.0, margin=0.1)
        fv = focal_values(z, p, eta, k, count=4)
        assert len(fv.theta) == 4
        assert all(math.isfinite(t) for t in fv.theta)
