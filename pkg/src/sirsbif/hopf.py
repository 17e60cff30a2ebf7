"""Trace-zero locus, focal values, and weak-focus order.

At a candidate weak focus (z, eta z) the remaining parameters are pinned by
the trace-zero condition; the field is moved to the rotation-normalized frame

    u' = v,  v' = -u + g(u, v),

and a Lyapunov function V = (u^2 + v^2)/2 + higher terms is built degree by
degree.  Odd degrees solve uniquely; every even degree 2m+2 leaves a single
obstruction c_m, the m-th focal value.  The sign of the first nonzero focal
value decides stability, its index the weak-focus order.

The engine normalization differs from the closed-form normalization by the fixed
positive factor 2 (our V starts at (u^2+v^2)/2); the calibration is computed
at a reference point once and re-verified rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath as mp
import numpy as np

from .errors import DomainError, IllConditioned
from .series import BivariateSeries, generalized_binomial

ENGINE_DPS = 40
ZERO_TOL = 1e-9
_SOLVE_RESIDUAL_TOL = 1e-8

MAX_FOCAL_COUNT = 4


@dataclass(frozen=True)
class HopfLocus:
    """Parameters putting a zero-trace, positive-determinant equilibrium at z."""

    z: float
    p: float
    eta: float
    k: float
    lambda0_breve: float
    gamma_breve: float
    D: float
    in_omega_star: bool
    res_trace: float


@dataclass(frozen=True)
class FocalValues:
    """Engine focal values with the closed-form cross-checks."""

    theta: tuple            # engine-normalized focal values, up to 4
    zero_tols: tuple        # per-value scaled zero thresholds
    theta1_closed_form: float  # first focal value in the closed-form normalization
    calibration: float      # positive constant: closed-form scale / engine scale
    order: Optional[int]    # first index with |theta| above tolerance, or None
    stability: str          # "stable", "unstable" or "undetermined"
    D: float
    f1: float
    L11: Optional[float]    # k = 2 closed forms, when defined
    L22: Optional[float]


@dataclass(frozen=True)
class HopfFactorValues:
    """The eight polynomial factors controlling focal-value degeneracies."""

    R0f: float
    R1f: float
    R2f: float
    R3f: float
    l1: float
    l2: float
    l3: float
    l4: float
    z_breve: Optional[float]


def omega_star_bounds(z: float, p: float, k: float) -> tuple[float, float]:
    """(lower, upper) admissible eta range for a genuine weak-focus frame."""
    pzk = p * z**k
    return 1.0 / (z + pzk), (z + pzk) * (1.0 + z + pzk) / (pzk * (k - 1.0))


def in_omega_star(z: float, p: float, eta: float, k: float) -> bool:
    if not (z > 0 and p > 0 and k > 1):
        return False
    lo, hi = omega_star_bounds(z, p, k)
    return lo < eta < hi


def determinant_at_focus(z: float, p: float, eta: float, k: float) -> float:
    return p * eta * z**k + eta * z - 1.0


def hopf_parameters(z: float, p: float, eta: float, k: float) -> tuple[float, float]:
    """(lambda0, gamma) of the trace-zero locus through (z, p, eta, k)."""
    pzk = p * z**k
    lam = (1.0 + z + pzk * (k - eta + k * eta)) / (p * z ** (k - 1.0) * (k - 1.0))
    gam = (z * (z + 1.0) + pzk * (pzk + 1.0) + 2.0 * p * z ** (k + 1.0)) / (pzk * (k - 1.0))
    return lam, gam


def hopf_locus(z: float, p: float, eta: float, k: float) -> HopfLocus:
    """Trace-zero locus through (z, p, eta, k).

    gamma_breve coincides with the upper admissible-eta bound scaled out, so
    gamma_breve <= eta is the same condition as eta falling above the
    admissible band; the returned flag carries it instead of an error.
    """
    if not (z > 0 and p > 0 and eta > 0 and k > 1):
        raise DomainError("hopf locus needs z > 0, p > 0, eta > 0, k > 1")
    lam, gam = hopf_parameters(z, p, eta, k)
    inside = in_omega_star(z, p, eta, k)
    res_trace = math.nan
    if gam > eta:
        from .model import validate_params
        from .equilibria import trace_det
        params = validate_params(p, lam, gam, eta, k)
        tr, _ = trace_det(params, z)
        res_trace = abs(tr)
    return HopfLocus(z=z, p=p, eta=eta, k=k, lambda0_breve=lam, gamma_breve=gam,
                     D=determinant_at_focus(z, p, eta, k),
                     in_omega_star=inside, res_trace=res_trace)


def closed_form_f1(z: float, p: float, eta: float, k: float) -> float:
    """Closed-form degree-3 obstruction polynomial (numerator of the first focal value)."""
    return ((4.0 - k + 3.0 * eta - 3.0 * k * eta) * k * p**2 * z ** (2.0 * k + 1.0)
            + (2.0 - k + eta - k * eta) * (k + 2.0) * p * z ** (k + 2.0)
            + (3.0 - k + eta - k * eta) * k * p * z ** (k + 1.0)
            + (k - k * eta + eta) * k * p**3 * z ** (3.0 * k)
            + (2.0 * k - 1.0) * k * p**2 * z ** (2.0 * k)
            + (k - 2.0 - eta + k * eta) * (k - 2.0) * z**3
            - (2.0 - k + eta - k * eta) * (k - 2.0) * z**2)


def theta1_closed_form(z: float, p: float, eta: float, k: float) -> float:
    """First focal value in the closed-form normalization."""
    D = determinant_at_focus(z, p, eta, k)
    return closed_form_f1(z, p, eta, k) / (8.0 * eta * z**2 * D**1.5)


def closed_form_L(z: float, p: float, eta: float) -> tuple[float, float]:
    """(L11, L22): the k = 2 closed-form numerators of the first two focal values."""
    L11 = (1.0 + 3.0 * p * z + 2.0 * p * z**2 + 2.0 * p**2 * z**3
           - eta - 2.0 * z * eta - 3.0 * p * z**2 * eta - p**2 * z**3 * eta)
    e, e2, e3, e4 = eta, eta**2, eta**3, eta**4
    L22 = (-72 - 216 * p * z - 36 * p * z**2 + 180 * p**2 * z**3 + 144 * p**2 * z**4
           - 144 * p**3 * z**6 - 144 * p**4 * z**7
           + (72 + 284 * z + 632 * p * z**2 - 177 * p * z**3 + 384 * p**2 * z**3
              - 682 * p**2 * z**4 - 152 * p**2 * z**5 - 493 * p**3 * z**5
              + 80 * p**3 * z**6 + 372 * p**3 * z**7 + 232 * p**4 * z**7
              + 744 * p**4 * z**8 + 372 * p**5 * z**9) * e
           + (-140 * z - 345 * z**2 - 96 * p * z**2 - 659 * p * z**3 + 485 * p * z**4
              - 527 * p**2 * z**4 + 1230 * p**2 * z**5 - 193 * p**3 * z**5
              - 230 * p**2 * z**6 + 1087 * p**3 * z**6 - 876 * p**3 * z**7
              + 342 * p**4 * z**7 - 248 * p**3 * z**8 - 1062 * p**4 * z**8
              - 744 * p**4 * z**9 - 416 * p**5 * z**9 - 744 * p**5 * z**10
              - 248 * p**6 * z**11) * e2
           + (65 * z**2 + 127 * z**3 + 69 * p * z**3 + 189 * p * z**4 + 15 * p**2 * z**4
              - 272 * p * z**5 + 58 * p**2 * z**5 - 721 * p**2 * z**6 - 14 * p**3 * z**6
              + 248 * p**2 * z**7 - 715 * p**3 * z**7 - 10 * p**4 * z**7
              + 868 * p**3 * z**8 - 355 * p**4 * z**8 + 1116 * p**4 * z**9
              - 89 * p**5 * z**9 + 620 * p**5 * z**10 + 124 * p**6 * z**11) * e3
           + (3 * z**3 + 6 * z**4 + 26 * p * z**4 + 53 * p * z**5 + 42 * p**2 * z**5
              + 137 * p**2 * z**6 + 19 * p**3 * z**6 + 154 * p**3 * z**7
              + 79 * p**4 * z**8 + 15 * p**5 * z**9) * e4)
    return L11, L22


def factor_values(z: float, p: float, eta: float, k: float) -> HopfFactorValues:
    """Evaluate the degeneracy factors; z_breve only exists for 3/2 < k < 2."""
    if not (z > 0 and eta > 0 and k > 1):
        raise DomainError("factor values need z > 0, eta > 0, k > 1")
    R0f = k * eta - eta - k
    R1f = k * eta + k - eta - 2.0
    R2f = 2.0 * k * eta * z - 2.0 * eta * z - k
    R3f = k * eta**2 * z - eta**2 * z + 2.0 * k * eta * z - 2.0 * eta * z - k
    l1 = 10.0 * k**2 * z - 30.0 * k * z + 20.0 * z + 2.0 * k**2 - 3.0 * k
    l2 = (12.0 * (k - 1.0) ** 2 * (k - 2.0) * z**2
          + 4.0 * (k - 1.0) * (k - 2.0) * (2.0 * k - 1.0) * z
          - k * (2.0 * k - 1.0) ** 2)
    l3 = (12.0 * (k - 1.0) ** 4 * z**4 + 8.0 * (k - 1.0) ** 3 * (5.0 * k + 2.0) * z**3
          + (k - 1.0) ** 2 * (2.0 * k - 1.0) * (23.0 * k + 18.0) * z**2
          + 2.0 * k * z * (k - 1.0) * (2.0 * k - 1.0) * (5.0 * k + 2.0)
          + k**2 * (k + 1.0) * (2.0 * k - 1.0))
    l4 = (300.0 * (k - 2.0) ** 2 * (k - 1.0) ** 3 * z**4
          + 4.0 * (k - 1.0) ** 2 * (k - 2.0) * (127.0 * k**2 - 181.0 * k - 158.0) * z**3
          + 2.0 * (k - 1.0) ** 2 * (2.0 * k - 1.0) * (66.0 * k**2 + 111.0 * k - 535.0) * z**2
          + (2.0 * k - 1.0) ** 2 * (51.0 * k**3 - 60.0 * k**2 - 407.0 * k + 648.0) * z
          + (k - 2.0) * (k + 1.0) * (2.0 * k - 1.0) ** 2 * (37.0 * k - 81.0))
    z_breve = None
    if 1.5 < k < 2.0:
        z_breve = k * (2.0 * k - 3.0) / (10.0 * (k - 1.0) * (2.0 - k))
    return HopfFactorValues(R0f=R0f, R1f=R1f, R2f=R2f, R3f=R3f,
                            l1=l1, l2=l2, l3=l3, l4=l4, z_breve=z_breve)


def _field_series_at_hopf(z, p, eta, k, max_degree: int) -> BivariateSeries:
    """First-component series about the trace-zero equilibrium, mpf-exact."""
    a = [mp.mpf(0)] * (max_degree + 1)
    a[0] += z
    if max_degree >= 1:
        a[1] += 1
    pzk = p * z**k
    for n in range(max_degree + 1):
        a[n] += pzk * generalized_binomial(k, n) / z**n
    lam = (1 + z + pzk * (k - eta + k * eta)) / (p * z ** (k - 1) * (k - 1))
    gam = (z * (z + 1) + pzk * (pzk + 1) + 2 * p * z ** (k + 1)) / (pzk * (k - 1))
    lin0 = lam - (1 + eta) * z
    dx = BivariateSeries(max_degree=max_degree)
    for n in range(max_degree + 1):
        if a[n] == 0:
            continue
        dx[(n, 0)] = dx[(n, 0)] + a[n] * lin0
        dx[(n + 1, 0)] = dx[(n + 1, 0)] - a[n]
        dx[(n, 1)] = dx[(n, 1)] - a[n]
    dx[(0, 0)] = dx[(0, 0)] - gam * z
    dx[(1, 0)] = dx[(1, 0)] - gam
    return dx


def _rotation_frame_nonlinearity(z, p, eta, k, max_degree: int) -> BivariateSeries:
    """g(u, v) for u' = v, v' = -u + g after the linear change and time scaling."""
    D = p * eta * z**k + eta * z - 1
    if D <= 0:
        raise DomainError("determinant at the focus must be positive (Omega* violated)")
    dx = _field_series_at_hopf(z, p, eta, k, max_degree)
    nonlinear = dx.drop_below(2)
    g = nonlinear.substitute_linear(1 / eta, mp.sqrt(D) / eta, mp.mpf(1), mp.mpf(0))
    return (eta / D) * g


def _rotation_operator_matrix(n: int) -> np.ndarray:
    """Matrix of V -> v dV/du - u dV/dv on homogeneous degree-n polynomials."""
    m = n + 1
    A = np.zeros((m, m))
    for i in range(m):
        a, b = n - i, i
        if a > 0:
            A[b + 1, i] += a
        if b > 0:
            A[b - 1, i] += -b
    return A


def hierarchy_smallest_singular_value(n: int) -> float:
    """Smallest singular value of the odd-degree solve matrix, relative to its norm."""
    A = _rotation_operator_matrix(n)
    s = np.linalg.svd(A, compute_uv=False)
    return float(s[-1] / s[0])


def _lyapunov_constants(g: BivariateSeries, count: int):
    """Focal values c_1..c_count of u' = v, v' = -u + g, with per-value scales."""
    vdeg = {2: [mp.mpf("0.5"), mp.mpf(0), mp.mpf("0.5")]}
    constants, scales = [], []
    gterms = list(g.coeffs.items())
    for n in range(3, 2 * count + 3):
        T = [mp.mpf(0)] * (n + 1)
        for d, coeffs in vdeg.items():
            for i, c in enumerate(coeffs):
                if i == 0 or c == 0:
                    continue
                for (a, b), gc in gterms:
                    if a + b + d - 1 == n:
                        T[i - 1 + b] += i * c * gc
        m = n + 1
        even = (n % 2 == 0)
        size = m + 1 if even else m
        A = mp.zeros(size, size)
        rhs = mp.zeros(size, 1)
        for i in range(m):
            rhs[i] = -T[i]
        for col in range(m):
            a, b = n - col, col
            if a > 0:
                A[b + 1, col] += a
            if b > 0:
                A[b - 1, col] += -b
        if even:
            half = n // 2
            ker = [mp.mpf(0)] * m
            for j in range(half + 1):
                ker[2 * j] = mp.binomial(half, j)
            for i in range(m):
                A[i, m] = -ker[i]
                A[m, i] = ker[i]
        x = mp.lu_solve(A, rhs)
        resid = max(abs(sum(A[i, j] * x[j] for j in range(size)) - rhs[i])
                    for i in range(size))
        rhs_scale = max([abs(t) for t in T] + [mp.mpf(1)])
        if resid > _SOLVE_RESIDUAL_TOL * rhs_scale:
            raise IllConditioned(
                f"degree-{n} hierarchy solve residual {mp.nstr(resid, 3)} exceeds budget",
                condition=float(resid / rhs_scale))
        vdeg[n] = [x[i] for i in range(m)]
        if even:
            constants.append(x[m])
            scales.append(rhs_scale)
    return constants, scales


_calibration_cache: Optional[float] = None


def engine_calibration() -> float:
    """Closed-form-over-engine scale of the first focal value, measured at a reference point."""
    global _calibration_cache
    if _calibration_cache is None:
        ref = focal_values(1.0, 1.0, 1.0, 2.0, count=1, _calibrating=True)
        _calibration_cache = theta1_closed_form(1.0, 1.0, 1.0, 2.0) / float(ref.theta[0])
    return _calibration_cache


def focal_values(z: float, p: float, eta: float, k: float, count: int = 4,
                 _calibrating: bool = False) -> FocalValues:
    """Engine focal values at the trace-zero point through (z, p, eta, k)."""
    if not 1 <= count <= MAX_FOCAL_COUNT:
        raise DomainError(f"count must be between 1 and {MAX_FOCAL_COUNT}, got {count}")
    if not in_omega_star(z, p, eta, k):
        raise DomainError(f"(k, z, p, eta) = {(k, z, p, eta)} is outside Omega*")
    with mp.workdps(ENGINE_DPS):
        zm, pm, em, km = map(mp.mpf, (z, p, eta, k))
        g = _rotation_frame_nonlinearity(zm, pm, em, km, 2 * count + 1)
        constants, scales = _lyapunov_constants(g, count)
        theta = tuple(float(c) for c in constants)
        tols = tuple(ZERO_TOL * max(1.0, float(s)) for s in scales)
    order = None
    for m, (value, tol) in enumerate(zip(theta, tols), start=1):
        if abs(value) > tol:
            order = m
            break
    if order is None:
        stability = "undetermined"
    else:
        stability = "stable" if theta[order - 1] < 0.0 else "unstable"
    f1 = closed_form_f1(z, p, eta, k)
    L11 = L22 = None
    if k == 2.0:
        L11, L22 = closed_form_L(z, p, eta)
    return FocalValues(theta=theta, zero_tols=tols,
                       theta1_closed_form=theta1_closed_form(z, p, eta, k),
                       calibration=1.0 if _calibrating else engine_calibration(),
                       order=order, stability=stability,
                       D=determinant_at_focus(z, p, eta, k),
                       f1=f1, L11=L11, L22=L22)


def weak_focus_order(z: float, p: float, eta: float, k: float,
                     count: int = 4) -> tuple:
    """(order, stability): order in {1..4} or None for 'undetermined'."""
    fv = focal_values(z, p, eta, k, count=count)
    return fv.order, fv.stability
