"""Reduced planar SIRS system with incidence x(1 + p x^(k-1)).

The working system is

    dx/dt = x (1 + p x^(k-1)) (lambda0 - x - y) - gamma x
    dy/dt = eta x - y

on the triangle  {x >= 0, y >= 0, x + y <= lambda0}, with parameter region
Gamma = {p > 0, lambda0 > 0, gamma > eta > 0, k > 0}.  The basic reproduction
number is r0 = lambda0 / gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp

from .errors import DomainError
from .series import BivariateSeries, generalized_binomial

SERIES_DPS = 40

REGION_SLACK = 1e-9


@dataclass(frozen=True)
class OriginalParams:
    """Parameters of the unscaled three-compartment model."""

    b: float        # recruitment rate, > 0
    d: float        # natural death rate, > 0
    beta: float     # transmission coefficient, > 0
    delta: float    # immunity-loss rate, >= 0
    mu: float       # recovery rate, > 0
    upsilon: float  # nonlinearity weight, > 0
    k: float        # exposure exponent, > 0

    def __post_init__(self):
        for name in ("b", "d", "beta", "mu", "upsilon", "k"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and > 0, got {v}")
        if not (math.isfinite(self.delta) and self.delta >= 0):
            raise DomainError(f"delta must be finite and >= 0, got {self.delta}")


@dataclass(frozen=True)
class ModelParams:
    """Validated parameters of the reduced planar system (a point of Gamma)."""

    p: float
    lambda0: float
    gamma: float
    eta: float
    k: float
    r0: float = field(init=False)

    def __post_init__(self):
        checks = [
            ("p", self.p > 0, "p <= 0"),
            ("lambda0", self.lambda0 > 0, "lambda0 <= 0"),
            ("eta", self.eta > 0, "eta <= 0"),
            ("gamma", self.gamma > self.eta, "gamma <= eta"),
            ("k", self.k > 0, "k <= 0"),
        ]
        for name, ok, msg in checks:
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} is not finite: {v}")
            if not ok:
                raise DomainError(msg)
        object.__setattr__(self, "r0", self.lambda0 / self.gamma)

    @property
    def x_max(self) -> float:
        """Right endpoint lambda0/(1+eta) of the endemic-abscissa interval."""
        return self.lambda0 / (1.0 + self.eta)

    def replace(self, **kwargs) -> "ModelParams":
        vals = {name: getattr(self, name) for name in ("p", "lambda0", "gamma", "eta", "k")}
        vals.update(kwargs)
        return ModelParams(**vals)


@dataclass(frozen=True)
class State:
    """A point of the phase plane (scaled infective and recovered densities)."""

    x: float
    y: float

    def in_region(self, params: ModelParams, slack: float = REGION_SLACK) -> bool:
        return (self.x >= -slack and self.y >= -slack
                and self.x + self.y <= params.lambda0 + slack)


def validate_params(p, lambda0, gamma, eta, k) -> ModelParams:
    """Validate a Gamma-membership candidate; raises DomainError naming the violation."""
    return ModelParams(float(p), float(lambda0), float(gamma), float(eta), float(k))


def reduce_original_params(orig: OriginalParams) -> ModelParams:
    """Rescale the three-compartment parameters to the reduced planar ones."""
    scale = (orig.d + orig.delta) / orig.beta
    p = scale ** (orig.k - 1.0) * orig.upsilon
    lambda0 = (orig.b / orig.d) / scale
    gamma = (orig.d + orig.mu) / (orig.d + orig.delta)
    eta = orig.mu / (orig.d + orig.delta)
    # gamma - eta = d/(d+delta) > 0 for every valid input, so this cannot raise
    return validate_params(p, lambda0, gamma, eta, orig.k)


def incidence_term(p: float, k: float, x: float) -> float:
    """x * (1 + p x^(k-1)) = x + p x^k, continuously extended by 0 at x = 0."""
    if x == 0.0:
        return 0.0
    return x + p * x**k


def vector_field(params: ModelParams, s: State) -> tuple[float, float]:
    """Right-hand side (dx/dt, dy/dt) at a state with x >= 0."""
    inc = incidence_term(params.p, params.k, s.x)
    dx = inc * (params.lambda0 - s.x - s.y) - params.gamma * s.x
    dy = params.eta * s.x - s.y
    return dx, dy


def basic_reproduction_number(params: ModelParams) -> float:
    return params.lambda0 / params.gamma


def taylor_expand(params: ModelParams, center: State, order: int = 9):
    """Expand the vector field about a point with x > 0.

    Returns a pair of BivariateSeries in the local offsets (X, Y) = (x, y) - center.
    The first component needs the generalized binomial series of (z + X)^k, which
    is why the center must have strictly positive x; the second is exactly linear.
    """
    if center.x <= 0:
        raise DomainError(f"Taylor center needs x > 0, got x = {center.x}")
    if order < 2:
        raise DomainError(f"order must be >= 2, got {order}")
    with mp.workdps(SERIES_DPS):
        z = mp.mpf(center.x)
        yc = mp.mpf(center.y)
        p, lam, gam, eta, k = (mp.mpf(params.p), mp.mpf(params.lambda0),
                               mp.mpf(params.gamma), mp.mpf(params.eta), mp.mpf(params.k))
        # incidence factor a(X) = (z+X) + p z^k (1 + X/z)^k, as a series in X alone
        a = [mp.mpf(0)] * (order + 1)
        a[0] += z
        if order >= 1:
            a[1] += 1
        pzk = p * z**k
        for n in range(order + 1):
            a[n] += pzk * generalized_binomial(k, n) / z**n
        lin0 = lam - z - yc
        dx = BivariateSeries(max_degree=order)
        for n in range(order + 1):
            if a[n] == 0:
                continue
            dx[(n, 0)] = dx[(n, 0)] + a[n] * lin0
            dx[(n + 1, 0)] = dx[(n + 1, 0)] - a[n]
            dx[(n, 1)] = dx[(n, 1)] - a[n]
        dx[(0, 0)] = dx[(0, 0)] - gam * z
        dx[(1, 0)] = dx[(1, 0)] - gam
        dy = BivariateSeries(
            {(0, 0): eta * z - yc, (1, 0): eta, (0, 1): mp.mpf(-1)}, max_degree=order)
    return dx, dy
