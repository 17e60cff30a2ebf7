import math

import numpy as np
import pytest

from sirsbif import DomainError, validate_params
from sirsbif.degeneracy import (DegenerateKind, b11_coefficient, b20_coefficient,
                                bogdanov_takens_locus, classify_degenerate,
                                classify_nilpotent, cusp_coefficients,
                                double_zero_locus, eta_bar1, eta_hat,
                                nilpotent_admissible_floor,
                                nilpotent_discriminant_locus,
                                nilpotent_focus_analysis, p_check, p_hat,
                                saddle_node_locus, unfolding_probe,
                                xi20_coefficient, xi30_coefficient, z_tilde)
from sirsbif.equilibria import evaluate_H, find_endemic_equilibria, trace_det

from oracles import fd_jacobian


def test_saddle_node_locus_example_k2():
    locus = saddle_node_locus(1, 1, 1, 2)
    assert locus.lambda0_hat == pytest.approx(6.0, rel=1e-14)
    assert locus.gamma_hat == pytest.approx(8.0, rel=1e-14)
    assert locus.eta_hat == pytest.approx(0.5, rel=1e-14)
    assert locus.p_hat == 0.0
    assert locus.res_H <= 1e-12 and locus.res_Hp <= 1e-12


def test_saddle_node_locus_example_k3():
    locus = saddle_node_locus(1, 1, 1, 3)
    assert locus.lambda0_hat == pytest.approx(4.0, rel=1e-14)
    assert locus.gamma_hat == pytest.approx(4.0, rel=1e-14)
    assert locus.eta_hat == pytest.approx(0.5, rel=1e-14)
    assert locus.p_hat == pytest.approx(1.0 / 3.0, rel=1e-14)


def test_saddle_node_locus_rejects_inadmissible():
    # large p with k = 5 drives gamma_hat below eta
    with pytest.raises(DomainError):
        saddle_node_locus(0.5, 20.0, 2.0, 5.0)


def test_xi20_positive_for_k_below_two():
    rng = np.random.default_rng(2)
    for _ in range(40):
        z = float(rng.uniform(0.1, 3.0))
        p = float(rng.uniform(0.05, 4.0))
        eta = float(rng.uniform(0.05, 3.0))
        k = float(rng.uniform(1.01, 2.0))
        if abs(eta - eta_hat(z, p, k)) < 1e-6:
            continue
        assert xi20_coefficient(z, p, eta, k)[0] > 0.0


def test_xi30_reduced_form_at_p_hat():
    for z, eta, k in [(1.0, 0.5, 3.0), (0.7, 1.2, 2.5), (2.0, 0.3, 4.0)]:
        general = xi30_coefficient(z, p_hat(z, k), eta, k)
        reduced = (k - 1) * (k - 2) * (1 + eta) * k**2 \
            / (6 * eta**2 * z * (2 * k * eta * z - 2 * eta * z - k) ** 2)
        assert general == pytest.approx(reduced, rel=1e-12)
        assert general > 0.0


def test_bt_locus_closed_forms_at_z1_k3():
    bt = bogdanov_takens_locus(1.0, 3.0)
    s10 = math.sqrt(10.0)
    assert bt.p_check == pytest.approx((s10 - 1.0) / 3.0, rel=1e-14)
    assert bt.eta_tilde == pytest.approx(3.0 / (2.0 + s10), rel=1e-14)
    assert bt.lambda0_tilde == pytest.approx(15.0 / (2.0 * (s10 - 1.0)), rel=1e-14)
    assert bt.res_trace <= 1e-10 and bt.res_det <= 1e-10
    # at p = p_check the general double-zero locus reproduces lambda0_tilde
    assert bt.lambda0_check == pytest.approx(bt.lambda0_tilde, rel=1e-12)


def test_bt_locus_domain_boundary():
    with pytest.raises(DomainError):
        bogdanov_takens_locus(1.0, 1.4)   # k <= (1+2z)/(1+z) = 1.5


def test_b11_vanishes_at_p_check():
    rng = np.random.default_rng(9)
    for _ in range(40):
        z = float(rng.uniform(0.1, 3.0))
        kmin = (1.0 + 2.0 * z) / (1.0 + z)
        k = float(rng.uniform(kmin + 0.05, 6.0))
        val, scale = b11_coefficient(z, p_check(z, k), k)
        assert abs(val) <= 1e-10 * max(1.0, scale)


def test_cusp_G_matches_k2_closed_form():
    for z in (0.5, 1.0, 2.0):
        cc = cusp_coefficients(z, 2.0)
        closed = 1.0 / (2.0 * math.sqrt(2.0 * z) * (z * (2.0 + z)) ** 0.25)
        assert cc.G == pytest.approx(closed, rel=1e-10)
        assert cc.G > 0.0
        assert cc.z_tilde is None


def test_cusp_G_positive_for_k_below_two():
    rng = np.random.default_rng(4)
    for _ in range(30):
        z = float(rng.uniform(0.1, 3.0))
        kmin = (1.0 + 2.0 * z) / (1.0 + z)
        k = float(rng.uniform(kmin + 1e-3, 2.0))
        assert cusp_coefficients(z, k).G > 0.0


@pytest.mark.parametrize("k", [2.5, 3.0, 4.0, 5.0])
def test_G_vanishes_and_F_negative_at_z_tilde(k):
    zt = z_tilde(k)
    cc = cusp_coefficients(zt, k)
    assert abs(cc.G) <= 1e-8
    assert cc.F < 0.0


def test_F_negative_throughout_admissible_k():
    # F stays negative along z_tilde; what ends at k ~ 5.5745 is admissibility
    for k in np.linspace(2.1, 5.574, 25):
        cc = cusp_coefficients(z_tilde(float(k)), float(k))
        assert cc.F < 0.0


def test_codim4_admissibility_ends_near_tabulated_threshold():
    # gamma_tilde - eta_tilde changes sign on the z_tilde branch in [5.574, 5.575]
    def margin(k):
        bt = None
        try:
            bt = bogdanov_takens_locus(z_tilde(k), k)
        except DomainError:
            return -1.0
        return bt.gamma_tilde - bt.eta_tilde

    assert margin(5.574) > 0.0
    assert margin(5.575) < 0.0


def test_locus_residuals_sampled():
    rng = np.random.default_rng(21)
    for _ in range(60):
        z = float(rng.uniform(0.2, 2.5))
        p = float(rng.uniform(0.1, 4.0))
        eta = float(rng.uniform(0.05, 2.0))
        k = float(rng.uniform(1.05, 5.0))
        try:
            locus = saddle_node_locus(z, p, eta, k)
        except DomainError:
            continue
        assert locus.res_H <= 1e-12
        assert locus.res_Hp <= 1e-12


def test_nilpotent_focus_branch_example():
    coeffs = nilpotent_focus_analysis(1.0, 3.0)
    assert coeffs.b30 == pytest.approx(-28.0 / 27.0, rel=1e-14)
    assert coeffs.discriminant == pytest.approx(4.0 - 224.0 / 27.0, rel=1e-13)
    assert coeffs.discriminant < 0.0
    assert classify_nilpotent(coeffs) is DegenerateKind.NILPOTENT_FOCUS_CODIM_3


def test_nilpotent_elliptic_branch():
    k = 2.5
    lo = nilpotent_admissible_floor(k)
    hi = nilpotent_discriminant_locus(k)
    x4 = 0.5 * (lo + hi)
    coeffs = nilpotent_focus_analysis(x4, k)
    assert coeffs.b30 < 0.0
    assert coeffs.discriminant > 0.0
    assert classify_nilpotent(coeffs) is DegenerateKind.NILPOTENT_ELLIPTIC_CODIM_3


def test_nilpotent_discriminant_zero_branch():
    k = 2.5
    x4 = nilpotent_discriminant_locus(k)
    coeffs = nilpotent_focus_analysis(x4, k)
    assert coeffs.discriminant == pytest.approx(0.0, abs=1e-12)
    assert coeffs.b30 == pytest.approx(-(k - 1.0) ** 2 / 8.0, rel=1e-12)
    assert classify_nilpotent(coeffs) is DegenerateKind.NILPOTENT_ELLIPTIC_CODIM_4_PLUS


def test_nilpotent_rejects_outside_preconditions():
    with pytest.raises(DomainError):
        nilpotent_focus_analysis(1.0, 2.0)
    with pytest.raises(DomainError):
        nilpotent_focus_analysis(0.5 * nilpotent_admissible_floor(3.0), 3.0)


def test_w10_parameters_route_to_codim4plus():
    params = validate_params(192.0 * math.sqrt(3.0) / (175.0 * math.sqrt(35.0)),
                             125.0 / 16.0, 7.5, 8.0 / 7.0, 2.5)
    roots = find_endemic_equilibria(params)
    doubles = [r for r in roots if r.multiplicity == 2]
    assert len(doubles) == 1
    assert doubles[0].z == pytest.approx(35.0 / 48.0, rel=1e-12)
    kind = classify_degenerate(params, doubles[0].z)
    assert kind is DegenerateKind.NILPOTENT_ELLIPTIC_CODIM_4_PLUS
    coeffs = nilpotent_focus_analysis(doubles[0].z, 2.5)
    assert coeffs.lambda0_bar == pytest.approx(125.0 / 16.0, rel=1e-12)
    assert coeffs.gamma_bar == pytest.approx(7.5, rel=1e-12)


def test_classify_saddle_node_sectors():
    hi = saddle_node_locus(1, 1, 1.0, 2)      # eta = 1 > eta_hat = 0.5
    assert classify_degenerate(hi.params(), 1.0) \
        is DegenerateKind.SADDLE_NODE_UNSTABLE_SECTOR
    lo = saddle_node_locus(1, 1, 0.25, 2)     # eta = 0.25 < eta_hat
    assert classify_degenerate(lo.params(), 1.0) \
        is DegenerateKind.SADDLE_NODE_STABLE_SECTOR


def test_classify_degenerate_nodes():
    ph = p_hat(1.0, 3.0)
    stable = saddle_node_locus(1.0, ph, 0.5, 3.0)    # eta < eta_bar1 = 0.75
    assert classify_degenerate(stable.params(), 1.0) \
        is DegenerateKind.DEGENERATE_NODE_STABLE
    unstable = saddle_node_locus(1.0, ph, 1.0, 3.0)  # eta > eta_bar1, z > k(k-2)/(4(k-1))
    assert classify_degenerate(unstable.params(), 1.0) \
        is DegenerateKind.DEGENERATE_NODE_UNSTABLE


def test_classify_cusp_chain():
    lam, gam, eh = double_zero_locus(1.0, 1.0, 3.0)
    params = validate_params(1.0, lam, gam, eh, 3.0)
    assert classify_degenerate(params, 1.0) is DegenerateKind.CUSP_CODIM_2
    bt = bogdanov_takens_locus(1.0, 3.0)
    assert classify_degenerate(bt.params(), 1.0) is DegenerateKind.CUSP_CODIM_3
    zt = z_tilde(3.0)
    bt4 = bogdanov_takens_locus(zt, 3.0)
    assert classify_degenerate(bt4.params(), zt) is DegenerateKind.CUSP_CODIM_4


def test_classify_eigenstructure_consistency():
    # one zero eigenvalue on the saddle-node branch, two on the cusp branch
    sn = saddle_node_locus(1, 1, 1, 2)
    eig_sn = np.linalg.eigvals(fd_jacobian(sn.params(), 1.0))
    assert min(abs(eig_sn)) < 1e-7
    assert max(abs(eig_sn)) > 1e-3
    bt = bogdanov_takens_locus(1.0, 3.0)
    eig_bt = np.linalg.eigvals(fd_jacobian(bt.params(), 1.0))
    assert max(abs(eig_bt)) < 1e-4


def test_unfolding_probe_identity_and_bounds():
    bt = bogdanov_takens_locus(1.0, 3.0)
    base = bt.params()
    same = unfolding_probe(base)
    assert (same.p, same.lambda0, same.gamma, same.eta) \
        == (base.p, base.lambda0, base.gamma, base.eta)
    shifted = unfolding_probe(base, lambda3=-0.01)
    assert shifted.gamma == pytest.approx(base.gamma - 0.01, rel=1e-14)
    with pytest.raises(DomainError):
        unfolding_probe(base, lambda1=0.2 * base.p)


def test_unfolding_probe_rejects_leaving_gamma_region():
    # near the admissibility edge a small legal offset exits gamma > eta
    k = 5.574
    bt = bogdanov_takens_locus(z_tilde(k), k)
    base = bt.params()
    assert base.gamma - base.eta < 1e-3
    with pytest.raises(DomainError):
        unfolding_probe(base, lambda3=-0.01)


def test_w2_sweep_values_stay_within_probe_range():
    # the registry's full gamma grid is reachable by legal probe offsets
    from sirsbif.registry import get_entry
    base = bogdanov_takens_locus(0.2012, 2.0).params()
    records = [unfolding_probe(base, lambda3=gam - base.gamma)
               for gam in get_entry("w2").gamma_grid]
    assert len(records) == 6
    for rec, gam in zip(records, get_entry("w2").gamma_grid):
        assert rec.gamma == pytest.approx(gam, rel=1e-12)
