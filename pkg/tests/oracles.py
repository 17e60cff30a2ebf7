"""Independent verification helpers used across the test suite.

These deliberately avoid the library's own root isolation and linearization
paths: the scan oracle works on a dense numpy grid with plain bisection, and
the Jacobian oracle differentiates the raw vector field numerically.
"""

import numpy as np

from sirsbif import State, validate_params, vector_field
from sirsbif.equilibria import evaluate_H


def _power(xs, expo):
    # always a fresh array: callers mutate the result in place
    if expo == 0.0:
        return np.ones_like(xs)
    if expo == 1.0:
        return xs.copy()
    if expo == 2.0:
        return xs * xs
    if expo == 0.5:
        return np.sqrt(xs)
    if expo == -0.5:
        return 1.0 / np.sqrt(xs)
    return xs**expo


_BASE_GRIDS = {}


def scan_roots(params, n=1_000_000):
    """All sign-change roots of H on (0, lambda0/(1+eta)] from an n-point scan,
    polished by bisection.  Tangential (even-multiplicity) zeros produce no
    sign change and are invisible to this oracle by construction."""
    end = params.x_max
    if n not in _BASE_GRIDS:
        _BASE_GRIDS[n] = np.linspace(1.0 / n, 1.0, n)
    xs = _BASE_GRIDS[n] * end
    p, lam, eta, k = params.p, params.lambda0, params.eta, params.k
    vals = _power(xs, k - 1.0)
    vals *= p
    vals += 1.0
    bracket = xs * (-(1.0 + eta) / lam)
    bracket += 1.0
    vals *= bracket
    vals -= 1.0 / params.r0
    sgn = np.sign(vals)
    roots = []
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        a, b = float(xs[i]), float(xs[i + 1])
        fa = evaluate_H(params, a)
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = evaluate_H(params, m)
            if fa * fm <= 0.0:
                b = m
            else:
                a, fa = m, fm
        roots.append(0.5 * (a + b))
    for i in np.nonzero(sgn == 0)[0]:
        roots.append(float(xs[i]))
    return sorted(roots)


def fd_jacobian(params, z, h_rel=1e-6):
    """Centered-difference Jacobian of the vector field at (z, eta z)."""
    h = h_rel * z
    x0, y0 = z, params.eta * z

    def f(x, y):
        return np.array(vector_field(params, State(x, y)))

    J = np.empty((2, 2))
    J[:, 0] = (f(x0 + h, y0) - f(x0 - h, y0)) / (2.0 * h)
    J[:, 1] = (f(x0, y0 + h) - f(x0, y0 - h)) / (2.0 * h)
    return J


def sample_gamma_params(rng, k_choices=(0.5, 1.0, 1.5, 2.0, 3.0)):
    """One random admissible parameter record."""
    k = float(rng.choice(np.asarray(k_choices)))
    p = float(rng.uniform(0.05, 6.0))
    lam = float(rng.uniform(0.3, 8.0))
    eta = float(rng.uniform(0.05, 3.0))
    gam = eta + float(rng.uniform(0.01, 6.0))
    return validate_params(p, lam, gam, eta, k)


def sample_omega_star(rng, k_lo=1.0, k_hi=5.0, margin=0.05):
    """Random (z, p, eta, k) strictly inside the admissible weak-focus band."""
    from sirsbif.hopf import omega_star_bounds
    while True:
        k = float(rng.uniform(k_lo + 1e-3, k_hi))
        z = float(rng.uniform(0.1, 3.0))
        p = float(rng.uniform(0.05, 4.0))
        lo, hi = omega_star_bounds(z, p, k)
        if not (hi > lo > 0.0):
            continue
        frac = float(rng.uniform(margin, 1.0 - margin))
        eta = lo + frac * (hi - lo)
        if eta > 0.0:
            return z, p, eta, k
