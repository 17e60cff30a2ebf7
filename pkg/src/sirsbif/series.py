"""Truncated bivariate power series on high-precision coefficients.

Coefficients are mpmath floats so that the degree-9 expansions used by the
focal-value hierarchy survive the large cancellations they are subject to.
All arithmetic is closed at the series' maximum total degree: terms with
i + j > ``max_degree`` are dropped on construction and after every operation.
"""

from __future__ import annotations

import mpmath as mp

DEFAULT_MAX_DEGREE = 9


def generalized_binomial(k, n: int):
    """Binomial coefficient C(k, n) for real k and integer n >= 0."""
    out = mp.mpf(1)
    for i in range(n):
        out = out * (mp.mpf(k) - i) / (i + 1)
    return out


class BivariateSeries:
    """Polynomial sum c[i,j] * X^i * Y^j truncated at total degree ``max_degree``."""

    __slots__ = ("max_degree", "coeffs")

    def __init__(self, coeffs=None, max_degree: int = DEFAULT_MAX_DEGREE):
        self.max_degree = int(max_degree)
        self.coeffs = {}
        if coeffs:
            for (i, j), c in coeffs.items():
                if i + j <= self.max_degree:
                    c = mp.mpf(c)
                    if c != 0:
                        self.coeffs[(i, j)] = c

    def copy(self) -> "BivariateSeries":
        out = BivariateSeries(max_degree=self.max_degree)
        out.coeffs = dict(self.coeffs)
        return out

    def __getitem__(self, key):
        return self.coeffs.get(key, mp.mpf(0))

    def __setitem__(self, key, value):
        i, j = key
        if i + j > self.max_degree:
            return
        value = mp.mpf(value)
        if value == 0:
            self.coeffs.pop(key, None)
        else:
            self.coeffs[key] = value

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        out = self.copy()
        for key, c in other.coeffs.items():
            if sum(key) <= out.max_degree:
                out[key] = out[key] + c
        return out

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        out = self.copy()
        for key, c in other.coeffs.items():
            if sum(key) <= out.max_degree:
                out[key] = out[key] - c
        return out

    def __mul__(self, other):
        if isinstance(other, BivariateSeries):
            out = BivariateSeries(max_degree=self.max_degree)
            for (a, b), c in self.coeffs.items():
                for (d, e), f in other.coeffs.items():
                    if a + d + b + e <= out.max_degree:
                        key = (a + d, b + e)
                        out.coeffs[key] = out.coeffs.get(key, mp.mpf(0)) + c * f
            out.coeffs = {k: v for k, v in out.coeffs.items() if v != 0}
            return out
        out = BivariateSeries(max_degree=self.max_degree)
        s = mp.mpf(other)
        if s != 0:
            out.coeffs = {k: v * s for k, v in self.coeffs.items()}
        return out

    __rmul__ = __mul__

    def truncate(self, degree: int) -> "BivariateSeries":
        out = BivariateSeries(max_degree=min(degree, self.max_degree))
        out.coeffs = {k: v for k, v in self.coeffs.items() if sum(k) <= out.max_degree}
        return out

    def drop_below(self, degree: int) -> "BivariateSeries":
        """Remove all terms of total degree < ``degree``."""
        out = BivariateSeries(max_degree=self.max_degree)
        out.coeffs = {k: v for k, v in self.coeffs.items() if sum(k) >= degree}
        return out

    def evaluate(self, x, y):
        x, y = mp.mpf(x), mp.mpf(y)
        total = mp.mpf(0)
        for (i, j), c in self.coeffs.items():
            total += c * x**i * y**j
        return total

    def substitute_linear(self, axx, axy, ayx, ayy) -> "BivariateSeries":
        """Compose with X = axx*u + axy*v, Y = ayx*u + ayy*v."""
        n = self.max_degree
        xs = _linear_powers(mp.mpf(axx), mp.mpf(axy), n)
        ys = _linear_powers(mp.mpf(ayx), mp.mpf(ayy), n)
        out = BivariateSeries(max_degree=n)
        for (i, j), c in self.coeffs.items():
            for (a, b), cx in xs[i].items():
                for (d, e), cy in ys[j].items():
                    if a + d + b + e <= n:
                        key = (a + d, b + e)
                        out.coeffs[key] = out.coeffs.get(key, mp.mpf(0)) + c * cx * cy
        out.coeffs = {k: v for k, v in out.coeffs.items() if v != 0}
        return out

    def degree_part(self, degree: int) -> dict:
        return {k: v for k, v in self.coeffs.items() if sum(k) == degree}

    def __repr__(self):
        terms = sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        body = " + ".join(f"{mp.nstr(c, 8)}*X^{i}*Y^{j}" for (i, j), c in terms[:12])
        more = "" if len(terms) <= 12 else f" + ... ({len(terms)} terms)"
        return f"BivariateSeries(N={self.max_degree}: {body}{more})"


def _linear_powers(cu, cv, n: int):
    """Powers (cu*u + cv*v)^m for m = 0..n as monomial dicts in (u, v)."""
    powers = [{(0, 0): mp.mpf(1)}]
    for m in range(1, n + 1):
        prev = powers[-1]
        cur = {}
        for (a, b), c in prev.items():
            if cu != 0:
                key = (a + 1, b)
                cur[key] = cur.get(key, mp.mpf(0)) + c * cu
            if cv != 0:
                key = (a, b + 1)
                cur[key] = cur.get(key, mp.mpf(0)) + c * cv
        powers.append(cur)
    return powers
