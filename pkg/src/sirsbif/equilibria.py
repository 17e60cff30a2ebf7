"""Endemic equilibria: zeros of H on (0, lambda0/(1+eta)] and their types.

An interior equilibrium abscissa z solves

    H(x) = (1 + p x^(k-1)) (1 - (1+eta) x / lambda0) - 1/r0 = 0,

and the equilibrium is (z, eta z).  The five exponent regimes
k < 1, k = 1, 1 < k < 2, k = 2, k > 2 give H at most three positive zeros;
roots are isolated on the monotone pieces cut out by the zeros of H' and
polished by Newton iteration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

from .errors import ConvergenceError, DomainError
from .model import ModelParams

ROOT_TOL = 1e-12        # relative to lambda0/(1+eta)
TANGENCY_TOL = 1e-7     # |H'(z)| below this marks a double zero
TRACE_TOL = 1e-9        # |Tr| below this marks a weak-focus candidate
R0_THRESHOLD_TOL = 1e-9
MAX_NEWTON_ITER = 100

_EDGE = 1e-10           # relative left edge of the bracketing interval


class EquilibriumKind(enum.Enum):
    DISEASE_FREE_STABLE_NODE = "DiseaseFreeStableNode"
    DISEASE_FREE_SADDLE = "DiseaseFreeSaddle"
    DISEASE_FREE_SADDLE_NODE = "DiseaseFreeSaddleNode"
    STABLE_NODE = "StableNode"
    UNSTABLE_NODE = "UnstableNode"
    STABLE_FOCUS = "StableFocus"
    UNSTABLE_FOCUS = "UnstableFocus"
    SADDLE = "Saddle"
    WEAK_FOCUS_CANDIDATE = "WeakFocusCandidate"
    SADDLE_NODE = "SaddleNode"
    DEGENERATE_NODE_STABLE = "DegenerateNodeStable"
    DEGENERATE_NODE_UNSTABLE = "DegenerateNodeUnstable"
    DEGENERATE_DOUBLE_ZERO = "DegenerateDoubleZero"


@dataclass(frozen=True)
class CriticalStructure:
    """Monotonicity skeleton of H: regime tag plus the zeros of H' that exist."""

    regime: str
    x_bar_c: Optional[float] = None          # inflection abscissa of H', k > 2 only
    hprime_at_xbar_c: Optional[float] = None
    x01: Optional[float] = None              # zeros of H' (x01 < x02), k > 2
    x02: Optional[float] = None
    x_c: Optional[float] = None              # unique zero of H', 1 < k <= 2


@dataclass(frozen=True)
class EquilibriumReport:
    """One interior equilibrium: location, linearization data, residuals."""

    z: float
    trace: float
    det: float
    multiplicity: int
    res_H: float
    res_Hp: float
    kind: Optional[EquilibriumKind] = None

    def with_kind(self, kind: EquilibriumKind) -> "EquilibriumReport":
        return replace(self, kind=kind)


def evaluate_H(params: ModelParams, x: float, derivative_order: int = 0) -> float:
    """H, H' or H'' at x > 0 (closed forms)."""
    if x <= 0:
        raise DomainError(f"H and its derivatives need x > 0, got {x}")
    p, lam, eta, k = params.p, params.lambda0, params.eta, params.k
    if derivative_order == 0:
        return (1.0 + p * x ** (k - 1.0)) * (1.0 - (1.0 + eta) / lam * x) - 1.0 / params.r0
    if derivative_order == 1:
        return (p * (k - 1.0) * x ** (k - 2.0)
                - p * k * (1.0 + eta) / lam * x ** (k - 1.0)
                - (1.0 + eta) / lam)
    if derivative_order == 2:
        return p * (k - 1.0) * x ** (k - 3.0) * (k - 2.0 - k * (1.0 + eta) / lam * x)
    raise DomainError(f"derivative_order must be 0, 1 or 2, got {derivative_order}")


def trace_det(params: ModelParams, z: float) -> tuple[float, float]:
    """Jacobian trace and determinant at an interior equilibrium abscissa."""
    lam, gam, eta = params.lambda0, params.gamma, params.eta
    h = evaluate_H(params, z)
    hp = evaluate_H(params, z, 1)
    denom = lam - (1.0 + eta) * z
    tr = lam * h + lam * z * hp + gam * eta * z / denom - 1.0
    det = -lam * (h + z * hp)
    return tr, det


def critical_structure(params: ModelParams) -> CriticalStructure:
    """Classify the exponent regime and locate the zeros of H' that exist."""
    k = params.k
    end = params.x_max
    lo = _EDGE * end
    hp = lambda x: evaluate_H(params, x, 1)
    if k < 1.0:
        return CriticalStructure(regime="k<1")
    if k == 1.0:
        return CriticalStructure(regime="k=1")
    if k <= 2.0:
        regime = "1<k<2" if k < 2.0 else "k=2"
        # H'' < 0 throughout, so H' decreases; a sign change pins its unique zero
        if hp(lo) <= 0.0:
            return CriticalStructure(regime=regime)
        if hp(end) >= 0.0:
            return CriticalStructure(regime=regime)
        return CriticalStructure(regime=regime, x_c=_bisect(hp, lo, end))
    x_bar_c = end * (k - 2.0) / k
    hp_c = hp(x_bar_c)
    if hp_c <= 0.0:
        return CriticalStructure(regime="k>2", x_bar_c=x_bar_c, hprime_at_xbar_c=hp_c)
    # H' rises on (0, x_bar_c) from -(1+eta)/lambda0 and falls past it
    x01 = _bisect(hp, lo, x_bar_c) if hp(lo) < 0.0 else lo
    x02 = _bisect(hp, x_bar_c, end) if hp(end) < 0.0 else end
    return CriticalStructure(regime="k>2", x_bar_c=x_bar_c, hprime_at_xbar_c=hp_c,
                             x01=x01, x02=x02)


def find_endemic_equilibria(params: ModelParams) -> list[EquilibriumReport]:
    """All zeros of H in (0, lambda0/(1+eta)], with multiplicity, ascending in z."""
    end = params.x_max
    lo = _EDGE * end
    h = lambda x: evaluate_H(params, x)
    struct = critical_structure(params)

    if struct.regime == "k<1":
        # H decreases from +infinity to -1/r0: exactly one simple zero, which
        # can sit at exponentially small x when p is small and r0 far below 1,
        # so the polish runs in log space where the problem is well scaled
        a = end
        while h(a) <= 0.0:
            a *= 0.5
            if a < 1e-280 * end:
                raise ConvergenceError("no positive part of H found for k < 1",
                                       bracket=(0.0, end))
        return [_polish_log(params, a, min(2.0 * a, end))]

    if struct.regime == "k=1":
        if params.lambda0 * (1.0 + params.p) <= params.gamma:
            return []
        z = (params.lambda0 * (1.0 + params.p) - params.gamma) \
            / ((1.0 + params.p) * (1.0 + params.eta))
        return [_polish_simple(params, max(lo, 0.5 * z), min(end, 1.5 * z))]

    # breakpoints of monotone pieces
    crits = [c for c in (struct.x01, struct.x02, struct.x_c) if c is not None]
    pieces = []
    knots = [lo] + crits + [end]
    for a, b in zip(knots[:-1], knots[1:]):
        if b > a:
            pieces.append((a, b))

    reports: list[EquilibriumReport] = []
    for a, b in pieces:
        ha, hb = h(a), h(b)
        if ha == 0.0:
            ha = h(a * (1.0 + 1e-13))
        if ha * hb < 0.0:
            reports.append(_polish_simple(params, a, b))
    # tangencies: a critical point where H is numerically zero.  The
    # threshold is the |H| reachable with |H'| within the tangency tolerance,
    # floored by the evaluation noise of H itself.  Any crossing roots inside
    # the surrounding plateau are images of the same double zero, so they are
    # replaced, not kept alongside it.
    for c in crits:
        hc = h(c)
        hpp = max(abs(evaluate_H(params, c, 2)), 1e-12)
        htol = max(TANGENCY_TOL**2 / (2.0 * hpp), 32.0 * _noise_scale(params, c))
        if abs(hc) > htol:
            continue
        plateau = min(max(1e-6 * end, TANGENCY_TOL / hpp,
                          2.0 * math.sqrt(2.0 * htol / hpp)),
                      1e-3 * end)
        reports = [r for r in reports if abs(r.z - c) > plateau]
        reports.append(_polish_double(params, c))
    reports = [_snap_triple_zero(params, r) for r in reports]
    reports.sort(key=lambda r: r.z)
    return _merge_plateau_pairs(params, reports)


def _noise_scale(params: ModelParams, x: float) -> float:
    """Magnitude floor below which an H value is indistinguishable from zero."""
    eps = 2.220446049250313e-16
    inc = 1.0 + params.p * x ** (params.k - 1.0)
    bracket = 1.0 + abs(1.0 - (1.0 + params.eta) / params.lambda0 * x)
    return eps * (abs(inc) * bracket + 1.0 / params.r0)


def _merge_plateau_pairs(params: ModelParams,
                         reports: list[EquilibriumReport]) -> list[EquilibriumReport]:
    """Collapse twin reports produced when a tangency's critical value rounds
    to the crossing side: the pair straddles a point where H is below its own
    evaluation noise, so the data cannot distinguish it from a double zero."""
    merged: list[EquilibriumReport] = []
    i = 0
    end = params.x_max
    while i < len(reports):
        cur = reports[i]
        if i + 1 < len(reports) and reports[i + 1].z - cur.z <= 1e-5 * end:
            mid = 0.5 * (cur.z + reports[i + 1].z)
            if abs(evaluate_H(params, mid)) <= 32.0 * _noise_scale(params, mid):
                merged.append(_snap_triple_zero(params, _polish_double(params, mid)))
                i += 2
                continue
        merged.append(cur)
        i += 1
    return merged


def _snap_triple_zero(params: ModelParams, report: EquilibriumReport) -> EquilibriumReport:
    """Relocate a tangency onto the analytic inflection abscissa when H has a
    triple zero there.  Near such a point H is cubically flat, so Newton on H
    stalls on a ~1e-6-wide floating-point noise plateau; the inflection
    abscissa of H'' is closed-form and exact."""
    if params.k <= 2.0 or report.multiplicity != 2:
        return report
    x_bar_c = params.x_max * (params.k - 2.0) / params.k
    if abs(report.z - x_bar_c) > 1e-3 * params.x_max:
        return report
    if abs(evaluate_H(params, x_bar_c, 1)) > TANGENCY_TOL:
        return report
    if abs(evaluate_H(params, x_bar_c)) > max(1e-10, 64.0 * _noise_scale(params, x_bar_c)):
        return report
    return _make_report(params, x_bar_c, 2)


def classify_equilibrium(params: ModelParams, report_or_origin) -> EquilibriumKind:
    """Type of the origin (pass the string 'origin') or of a polished report."""
    if isinstance(report_or_origin, str):
        if report_or_origin != "origin":
            raise DomainError(f"unknown equilibrium tag {report_or_origin!r}")
        if abs(params.r0 - 1.0) <= R0_THRESHOLD_TOL:
            return EquilibriumKind.DISEASE_FREE_SADDLE_NODE
        if params.r0 < 1.0:
            return EquilibriumKind.DISEASE_FREE_STABLE_NODE
        return EquilibriumKind.DISEASE_FREE_SADDLE

    report = report_or_origin
    scale = params.x_max
    # a root located to ROOT_TOL can still carry |H| up to |H'| x tolerance
    allowed = max(1e6 * ROOT_TOL * max(1.0, scale),
                  report.res_Hp * ROOT_TOL * scale * 1e3)
    if report.res_H > allowed:
        raise DomainError(f"unpolished report: |H(z)| = {report.res_H:g}")
    tr, det = report.trace, report.det
    if report.multiplicity == 2 or report.res_Hp <= TANGENCY_TOL:
        if abs(tr) <= TRACE_TOL * max(1.0, abs(params.lambda0)):
            return EquilibriumKind.DEGENERATE_DOUBLE_ZERO
        return EquilibriumKind.SADDLE_NODE
    if det < 0.0:
        return EquilibriumKind.SADDLE
    if abs(tr) <= TRACE_TOL * max(1.0, abs(params.lambda0)):
        return EquilibriumKind.WEAK_FOCUS_CANDIDATE
    disc = tr * tr - 4.0 * det
    if disc < 0.0:
        return EquilibriumKind.STABLE_FOCUS if tr < 0.0 else EquilibriumKind.UNSTABLE_FOCUS
    return EquilibriumKind.STABLE_NODE if tr < 0.0 else EquilibriumKind.UNSTABLE_NODE


def classified_equilibria(params: ModelParams) -> list[EquilibriumReport]:
    """find_endemic_equilibria with the kind field filled in."""
    return [r.with_kind(classify_equilibrium(params, r))
            for r in find_endemic_equilibria(params)]


def _bisect(f, a: float, b: float, iters: int = 200) -> float:
    fa = f(a)
    for _ in range(iters):
        m = 0.5 * (a + b)
        if m == a or m == b:
            break
        fm = f(m)
        if fa * fm <= 0.0:
            b = m
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def _make_report(params: ModelParams, z: float, multiplicity: int) -> EquilibriumReport:
    tr, det = trace_det(params, z)
    return EquilibriumReport(z=z, trace=tr, det=det, multiplicity=multiplicity,
                             res_H=abs(evaluate_H(params, z)),
                             res_Hp=abs(evaluate_H(params, z, 1)))


def _polish_simple(params: ModelParams, a: float, b: float) -> EquilibriumReport:
    """Newton with bisection fallback inside a sign-change bracket."""
    h = lambda x: evaluate_H(params, x)
    hp = lambda x: evaluate_H(params, x, 1)
    fa, fb = h(a), h(b)
    if fa * fb > 0.0:
        raise ConvergenceError("bracket does not straddle a zero of H", bracket=(a, b))
    x = 0.5 * (a + b)
    tol = ROOT_TOL * params.x_max
    for _ in range(MAX_NEWTON_ITER):
        fx = h(x)
        if fx == 0.0:
            break
        if fa * fx <= 0.0:
            b, fb = x, fx
        else:
            a, fa = x, fx
        d = hp(x)
        step = fx / d if d != 0.0 else float("inf")
        x_new = x - step
        if not (a < x_new < b):
            x_new = 0.5 * (a + b)
        if abs(x_new - x) <= tol:
            x = x_new
            break
        x = x_new
    else:
        raise ConvergenceError("Newton polishing did not converge", bracket=(a, b))
    mult = 2 if abs(hp(x)) <= TANGENCY_TOL else 1
    return _make_report(params, x, mult)


def _polish_log(params: ModelParams, a: float, b: float) -> EquilibriumReport:
    """Newton on G(u) = H(exp(u)); G'(u) = x H'(x) stays O(1) even when the
    root is many orders of magnitude below the interval scale."""
    h = lambda x: evaluate_H(params, x)
    ua, ub = math.log(a), math.log(b)
    fa, fb = h(a), h(b)
    if fa * fb > 0.0:
        raise ConvergenceError("bracket does not straddle a zero of H", bracket=(a, b))
    u = 0.5 * (ua + ub)
    for _ in range(MAX_NEWTON_ITER):
        x = math.exp(u)
        fx = h(x)
        if fx == 0.0:
            break
        if fa * fx <= 0.0:
            ub, fb = u, fx
        else:
            ua, fa = u, fx
        d = x * evaluate_H(params, x, 1)
        u_new = u - fx / d if d != 0.0 else 0.5 * (ua + ub)
        if not (ua < u_new < ub):
            u_new = 0.5 * (ua + ub)
        if abs(u_new - u) <= 1e-15:
            u = u_new
            break
        u = u_new
    x = math.exp(u)
    mult = 2 if abs(evaluate_H(params, x, 1)) <= TANGENCY_TOL else 1
    return _make_report(params, x, mult)


def _polish_double(params: ModelParams, c: float) -> EquilibriumReport:
    """Polish a tangency point as a zero of H' (Newton with H'')."""
    x = c
    tol = ROOT_TOL * params.x_max
    for _ in range(MAX_NEWTON_ITER):
        d1 = evaluate_H(params, x, 1)
        d2 = evaluate_H(params, x, 2)
        if d2 == 0.0:
            break
        x_new = x - d1 / d2
        if x_new <= 0.0:
            x_new = 0.5 * x
        if abs(x_new - x) <= tol:
            x = x_new
            break
        x = x_new
    return _make_report(params, x, 2)
