"""Degenerate equilibria: saddle-node and double-zero loci, normal-form
coefficients, and the decision tree that separates saddle-node, degenerate
node, cusp (codimension 2/3/4) and nilpotent focus/elliptic points.

All quantities are closed forms in the equilibrium abscissa z and the
remaining free parameters; every locus constructor re-checks itself
numerically (H and H' residuals, or trace/determinant residuals).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConvergenceError, DomainError
from .model import ModelParams, validate_params
from .equilibria import ROOT_TOL, TANGENCY_TOL, evaluate_H, trace_det

K0_NILPOTENT = 2.80425   # split point between the elliptic and focus sub-regions

_ZERO_TOL = 1e-9         # scaled zero test for algebraic coefficients

_RESIDUAL_GUARD = 1e-8   # construction-time sanity bound on locus residuals


class DegenerateKind(enum.Enum):
    SADDLE_NODE_STABLE_SECTOR = "SaddleNodeStableSector"
    SADDLE_NODE_UNSTABLE_SECTOR = "SaddleNodeUnstableSector"
    DEGENERATE_NODE_STABLE = "DegenerateNodeStable"
    DEGENERATE_NODE_UNSTABLE = "DegenerateNodeUnstable"
    CUSP_CODIM_2 = "CuspCodim2"
    CUSP_CODIM_3 = "CuspCodim3"
    CUSP_CODIM_4 = "CuspCodim4"
    NILPOTENT_FOCUS_CODIM_3 = "NilpotentFocusCodim3"
    NILPOTENT_ELLIPTIC_CODIM_3 = "NilpotentEllipticCodim3"
    NILPOTENT_ELLIPTIC_CODIM_4_PLUS = "NilpotentEllipticCodim4Plus"
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True)
class SaddleNodeLocus:
    """Parameters making z a double zero of H, plus the reduced-flow coefficients."""

    z: float
    p: float
    eta: float
    k: float
    lambda0_hat: float
    gamma_hat: float
    eta_hat: float
    p_hat: float
    eta_bar1: float
    xi20: float
    xi30: float
    res_H: float
    res_Hp: float

    def params(self) -> ModelParams:
        return validate_params(self.p, self.lambda0_hat, self.gamma_hat, self.eta, self.k)


@dataclass(frozen=True)
class BTLocus:
    """Parameters giving z a double-zero eigenvalue with b11 = 0 (codim >= 3)."""

    z: float
    k: float
    p_check: float
    lambda0_tilde: float
    eta_tilde: float
    gamma_tilde: float
    lambda0_check: float
    res_trace: float
    res_det: float

    def params(self) -> ModelParams:
        return validate_params(self.p_check, self.lambda0_tilde, self.gamma_tilde,
                               self.eta_tilde, self.k)


@dataclass(frozen=True)
class CuspCoefficients:
    """Quadratic normal-form data on the b11 = 0 locus, and the cubic/quartic
    reduced coefficients G and F that set the cusp codimension."""

    z: float
    k: float
    b20: float
    b11: float
    G: float
    G1: float
    G2: float
    F: float
    F1: float
    F2: float
    z_tilde: Optional[float]


@dataclass(frozen=True)
class NilpotentFocusCoefficients:
    """Cubic normal-form data at a triple degeneracy (b20 = 0 branch)."""

    x4_star: float
    k: float
    M: float
    N: float
    b11: float
    b30: float
    discriminant: float
    lambda0_bar: float
    gamma_bar: float
    k0: float = K0_NILPOTENT


def eta_hat(z: float, p: float, k: float) -> float:
    return 1.0 / (z + p * z**k)


def p_hat(z: float, k: float) -> float:
    return (k - 2.0) / (k * z ** (k - 1.0))


def eta_bar1(z: float, k: float) -> float:
    return k / (2.0 * z * (k - 1.0))


def xi20_coefficient(z: float, p: float, eta: float, k: float) -> tuple[float, float]:
    """Quadratic reduced-flow coefficient and its magnitude scale."""
    core = k - 2.0 - k * p * z ** (k - 1.0)
    denom = 2.0 * eta * (eta * z + p * eta * z**k - 1.0) ** 2
    scale = (abs(k - 2.0) + abs(k * p * z ** (k - 1.0))) / abs(denom) * (1.0 + eta)
    return -(1.0 + eta) * core / denom, scale


def xi30_coefficient(z: float, p: float, eta: float, k: float) -> float:
    num = k * (1.0 + eta) * (2.0 * k * p * z**k - p * z**k - k * z + 2.0 * z)
    den = 6.0 * z**2 * eta**2 * (p * eta * z**k + eta * z - 1.0) ** 2
    return num / den


def b20_coefficient(z: float, p: float, k: float) -> tuple[float, float]:
    """Quadratic coefficient of the double-zero normal form, with magnitude scale."""
    pzk = p * z**k
    val = (1.0 + z + pzk) * (k * z - 2.0 * z - k * pzk) / (2.0 * z)
    scale = (1.0 + z + pzk) * (abs(k * z) + abs(2.0 * z) + abs(k * pzk)) / (2.0 * z)
    return val, scale


def b11_coefficient(z: float, p: float, k: float) -> tuple[float, float]:
    """Mixed coefficient of the double-zero normal form, with magnitude scale."""
    terms = ((k - 1.0) * z, (k - 2.0) * z**2, -k * p**2 * z ** (2.0 * k),
             -2.0 * p * z ** (k + 1.0))
    return sum(terms) / z, sum(abs(t) for t in terms) / z


def p_check(z: float, k: float) -> float:
    """Root of b11 in p; defined for k > (1 + 2z)/(1 + z)."""
    if k <= (1.0 + 2.0 * z) / (1.0 + z):
        raise DomainError(
            f"k = {k} must exceed (1+2z)/(1+z) = {(1 + 2 * z) / (1 + z):.6g} for b11 to vanish")
    s = math.sqrt(z * (k - z + k * z) * (k - 1.0))
    return (s - z) / (k * z**k)


def saddle_node_locus(z: float, p: float, eta: float, k: float) -> SaddleNodeLocus:
    """Solve H(z) = H'(z) = 0 for (lambda0, gamma) at the given (z, p, eta, k)."""
    if not (z > 0 and p > 0 and eta > 0 and k > 1):
        raise DomainError("saddle-node locus needs z > 0, p > 0, eta > 0, k > 1")
    pzk = p * z**k
    lam_hat = (1.0 + eta) * (z + k * pzk) / (z ** (k - 1.0) * p * (k - 1.0))
    gam_hat = (1.0 + eta) * (z + pzk) ** 2 / (z**k * p * (k - 1.0))
    if gam_hat <= eta:
        raise DomainError(f"locus leaves the parameter region: gamma_hat = {gam_hat:.6g} <= eta = {eta:.6g}")
    params = validate_params(p, lam_hat, gam_hat, eta, k)
    res_h = abs(evaluate_H(params, z))
    res_hp = abs(evaluate_H(params, z, 1))
    if max(res_h, res_hp) > _RESIDUAL_GUARD:
        raise ConvergenceError(
            f"saddle-node locus residuals too large: |H| = {res_h:g}, |H'| = {res_hp:g}")
    return SaddleNodeLocus(
        z=z, p=p, eta=eta, k=k,
        lambda0_hat=lam_hat, gamma_hat=gam_hat,
        eta_hat=eta_hat(z, p, k), p_hat=p_hat(z, k), eta_bar1=eta_bar1(z, k),
        xi20=xi20_coefficient(z, p, eta, k)[0],
        xi30=xi30_coefficient(z, p, eta, k),
        res_H=res_h, res_Hp=res_hp)


def double_zero_locus(z: float, p: float, k: float) -> tuple[float, float, float]:
    """(lambda0, gamma, eta) making z a double-zero-eigenvalue equilibrium
    at general p (the eta = eta_hat branch of the saddle-node locus)."""
    pzk = p * z**k
    lam = (1.0 + z + pzk) * (z + k * pzk) / (p * z ** (k - 1.0) * (k - 1.0) * (z + pzk))
    gam = (1.0 + z + pzk) * (z + pzk) / (p * z**k * (k - 1.0))
    return lam, gam, eta_hat(z, p, k)


def bogdanov_takens_locus(z: float, k: float) -> BTLocus:
    """The b11 = 0 double-zero locus: p, lambda0, eta, gamma as functions of (z, k)."""
    if z <= 0:
        raise DomainError(f"z must be positive, got {z}")
    pc = p_check(z, k)          # raises DomainError when k <= (1+2z)/(1+z)
    s = math.sqrt((k - 1.0) * (k - z + k * z) * z)
    lam = k * z * (k - z + k * z) / ((k - 1.0) * (s - z))
    eta = k / (s - z + k * z)
    gam = (k * z - z + s) * (k - z + k * z + s) / ((k - 1.0) * k * (s - z))
    if gam <= eta:
        raise DomainError(f"locus leaves the parameter region: gamma_tilde = {gam:.6g} <= eta_tilde = {eta:.6g}")
    params = validate_params(pc, lam, gam, eta, k)
    tr, det = trace_det(params, z)
    if max(abs(tr), abs(det)) > _RESIDUAL_GUARD:
        raise ConvergenceError(
            f"double-zero residuals too large: |Tr| = {abs(tr):g}, |Det| = {abs(det):g}")
    lam_check, _, _ = double_zero_locus(z, pc, k)
    return BTLocus(z=z, k=k, p_check=pc, lambda0_tilde=lam, eta_tilde=eta,
                   gamma_tilde=gam, lambda0_check=lam_check,
                   res_trace=abs(tr), res_det=abs(det))


def z_tilde(k: float) -> float:
    """The abscissa where G vanishes (defined for k > 2)."""
    if k <= 2.0:
        raise DomainError(f"z_tilde is defined for k > 2, got k = {k}")
    disc = 2.0 - 17.0 * k + 58.0 * k**2 - 101.0 * k**3 + 94.0 * k**4 - 44.0 * k**5 + 8.0 * k**6
    return ((2.0 - 7.0 * k + 7.0 * k**2 - 2.0 * k**3 + math.sqrt(2.0) * math.sqrt(disc))
            / (6.0 * (k**3 - 4.0 * k**2 + 5.0 * k - 2.0)))


def cusp_coefficients(z: float, k: float) -> CuspCoefficients:
    """Normal-form data on the b11 = 0 locus at (z, k)."""
    pc = p_check(z, k)
    s = math.sqrt(z * (k - 1.0) * (k - z + k * z))
    q4 = (z * (k - 1.0) * (k - z + k * z)) ** 0.25
    G1 = (k - 1.0) * ((2.0 * z**2 - 2.0) * k**3 - (10.0 * z**2 + 5.0 * z - 1.0) * k**2
                      + (16.0 * z**2 + 4.0 * z) * k - 8.0 * z**2)
    G2 = s * ((2.0 * z + 2.0) * k**3 - (10.0 * z + 1.0) * k**2 + 16.0 * k * z - 8.0 * z)
    G = (-(k - 1.0) * ((k - 1.0) * math.sqrt(z) + math.sqrt((k - 1.0) * (k - z + k * z)))
         * q4 * (G1 + G2)
         / (3.0 * math.sqrt(2.0) * k**3 * z * (k - z + k * z - s)))
    F1 = -z * ((26.0 * z**2 + 68.0 * z + 42.0) * k**5 + (8.0 * z**2 - 79.0 * z - 71.0) * k**4
               - (214.0 * z**2 + 59.0 * z + 35.0) * k**3 + (380.0 * z**2 + 106.0 * z - 5.0) * k**2
               - (280.0 * z**2 + 36.0 * z) * k + 80.0 * z**2)
    F2 = s * ((46.0 * z**2 + 62.0 * z + 16.0) * k**4 - (106.0 * z**2 + 67.0 * z + 22.0) * k**3
              + (180.0 * z**2 + 10.0 * z + 7.0) * k**2 - (200.0 * z**2 - 4.0 * z) * k
              + 80.0 * z**2)
    F = (-(k - 1.0)**3 * ((k - 1.0) * z + s) ** 2 * q4 * (F1 + F2)
         / (36.0 * math.sqrt(2.0) * k**3 * z**1.5 * (k - z + k * z - s) * (z - k * z + s) ** 3))
    return CuspCoefficients(
        z=z, k=k,
        b20=b20_coefficient(z, pc, k)[0], b11=b11_coefficient(z, pc, k)[0],
        G=G, G1=G1, G2=G2, F=F, F1=F1, F2=F2,
        z_tilde=z_tilde(k) if k > 2.0 else None)


def nilpotent_admissible_floor(k: float) -> float:
    """Smallest x4* keeping the triple-degeneracy locus inside the parameter region."""
    return k * (math.sqrt(2.0 * k - 3.0) - 1.0) / (4.0 * (k - 1.0))


def nilpotent_discriminant_locus(k: float) -> float:
    """x4* where the type discriminant b11^2 + 8 b30 vanishes."""
    return (16.0 * k - 5.0 * k**2) / (16.0 * k**2 - 48.0 * k + 32.0)


def nilpotent_focus_analysis(x4_star: float, k: float) -> NilpotentFocusCoefficients:
    """Cubic normal-form coefficients at the b20 = 0 triple degeneracy."""
    if k <= 2.0:
        raise DomainError(f"the triple-degeneracy branch needs k > 2, got k = {k}")
    floor = nilpotent_admissible_floor(k)
    if x4_star <= floor:
        raise DomainError(
            f"x4_star = {x4_star:.6g} must exceed the admissibility floor {floor:.6g}")
    w = k - 2.0 * x4_star + 2.0 * k * x4_star
    M = -math.sqrt(3.0) * k / math.sqrt((k - 2.0) * w)
    N = (math.sqrt((k - 2.0) * w)
         * (195.0 * k**3 * x4_star - 665.0 * k**2 * x4_star + 630.0 * k * x4_star
            - 160.0 * x4_star + 44.0 * k**3 - 87.0 * k**2 - 6.0 * k)
         / (3.0 * math.sqrt(3.0)
            * (10.0 * k**2 * x4_star - 30.0 * k * x4_star + 20.0 * x4_star
               + 2.0 * k**2 - 3.0 * k) ** 2))
    b11 = k - 1.0
    b30 = (k - 1.0) ** 2 * (k - 2.0) * (2.0 * x4_star - k - 2.0 * k * x4_star) / (3.0 * k**2)
    disc = b11**2 + 8.0 * b30
    lam_bar = k * w / (2.0 * (k - 2.0) * (k - 1.0))
    gam_bar = 2.0 * w / (k * (k - 2.0))
    return NilpotentFocusCoefficients(x4_star=x4_star, k=k, M=M, N=N, b11=b11,
                                      b30=b30, discriminant=disc,
                                      lambda0_bar=lam_bar, gamma_bar=gam_bar)


def classify_nilpotent(coeffs: NilpotentFocusCoefficients) -> DegenerateKind:
    scale = max(coeffs.b11**2, abs(8.0 * coeffs.b30))
    if abs(coeffs.discriminant) <= _ZERO_TOL * max(1.0, scale):
        return DegenerateKind.NILPOTENT_ELLIPTIC_CODIM_4_PLUS
    if coeffs.discriminant < 0.0:
        return DegenerateKind.NILPOTENT_FOCUS_CODIM_3
    return DegenerateKind.NILPOTENT_ELLIPTIC_CODIM_3


def classify_degenerate(params: ModelParams, z: float) -> DegenerateKind:
    """Decision tree for a double zero of H at abscissa z under ``params``."""
    res_h = abs(evaluate_H(params, z))
    res_hp = abs(evaluate_H(params, z, 1))
    if res_h > 1e4 * ROOT_TOL * max(1.0, params.x_max) or res_hp > TANGENCY_TOL:
        raise DomainError(
            f"(params, z) is not a polished double zero: |H| = {res_h:g}, |H'| = {res_hp:g}")
    p, eta, k = params.p, params.eta, params.k
    e_hat = eta_hat(z, p, k)
    if not _is_zero(eta - e_hat, max(eta, e_hat)):
        # one zero eigenvalue: saddle-node when the quadratic coefficient survives
        xi20, xi20_scale = xi20_coefficient(z, p, eta, k)
        if not _is_zero(xi20, xi20_scale):
            if eta < e_hat:
                return DegenerateKind.SADDLE_NODE_STABLE_SECTOR
            return DegenerateKind.SADDLE_NODE_UNSTABLE_SECTOR
        xi30 = xi30_coefficient(z, p, eta, k)
        if xi30 > 0.0:
            return _classify_degenerate_node(z, eta, k)
        return DegenerateKind.UNRESOLVED
    # two zero eigenvalues
    b20, b20_scale = b20_coefficient(z, p, k)
    b11, b11_scale = b11_coefficient(z, p, k)
    if not _is_zero(b20, b20_scale):
        if not _is_zero(b11, b11_scale):
            return DegenerateKind.CUSP_CODIM_2
        coeffs = cusp_coefficients(z, k)
        g_scale = abs(coeffs.G1) + abs(coeffs.G2)
        if not _is_zero(coeffs.G1 + coeffs.G2, g_scale):
            return DegenerateKind.CUSP_CODIM_3
        if coeffs.F < 0.0:
            return DegenerateKind.CUSP_CODIM_4
        return DegenerateKind.UNRESOLVED
    # b20 = 0 forces p = p_hat, eta_hat = eta_bar1: the triple-degeneracy branch
    try:
        coeffs = nilpotent_focus_analysis(z, k)
    except DomainError:
        return DegenerateKind.UNRESOLVED
    return classify_nilpotent(coeffs)


def _classify_degenerate_node(z: float, eta: float, k: float) -> DegenerateKind:
    """Stability of the degenerate node per the tabulated inequality regions."""
    e_bar = eta_bar1(z, k)
    z_lo = k * (math.sqrt(2.0 * k - 3.0) - 1.0) / (4.0 * (k - 1.0)) if k >= 1.5 else 0.0
    z_hi = k * (k - 2.0) / (4.0 * (k - 1.0))
    denom = k**2 + 4.0 * z - 4.0 * k * z - 2.0 * k
    eta_curve = 4.0 * z * (k - 1.0) / denom if denom != 0.0 else math.inf
    stable = ((eta < e_bar and z > z_lo)
              or (z < z_lo and 0.0 < eta_curve and eta < eta_curve))
    unstable = ((eta > e_bar and z > z_hi)
                or (e_bar < eta < eta_curve and z_lo < z < z_hi))
    if stable and not unstable:
        return DegenerateKind.DEGENERATE_NODE_STABLE
    if unstable and not stable:
        return DegenerateKind.DEGENERATE_NODE_UNSTABLE
    return DegenerateKind.UNRESOLVED


def unfolding_probe(base: ModelParams, lambda1: float = 0.0, lambda2: float = 0.0,
                    lambda3: float = 0.0, lambda4: float = 0.0) -> ModelParams:
    """Perturb (p, lambda0, gamma, eta) around a degenerate-locus base point.

    Small perturbations only: each |lambda_i| must stay within 10% of the
    corresponding base value.  Validation re-checks membership of Gamma.
    """
    offsets = (lambda1, lambda2, lambda3, lambda4)
    bases = (base.p, base.lambda0, base.gamma, base.eta)
    names = ("lambda1", "lambda2", "lambda3", "lambda4")
    for name, off, ref in zip(names, offsets, bases):
        if abs(off) > 0.1 * abs(ref):
            raise DomainError(f"{name} = {off:g} exceeds 10% of its base value {ref:g}")
    return validate_params(base.p + lambda1, base.lambda0 + lambda2,
                           base.gamma + lambda3, base.eta + lambda4, base.k)


def _is_zero(value: float, scale: float) -> bool:
    return abs(value) <= _ZERO_TOL * max(1.0, abs(scale))
