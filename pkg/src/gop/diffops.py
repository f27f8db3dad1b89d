"""Linear differential operators with polynomial coefficients.

``DiffOperator([g0, g1, g2])`` is the operator ``f -> g0 f + g1 f' + g2 f''``.
The class is closed under composition, which is what the derivative-sample
schemes need to express ``A**k`` as a single operator.
"""

from math import comb

import numpy as np
from numpy.polynomial import Polynomial


def _as_poly(c):
    if isinstance(c, Polynomial):
        return Polynomial(c.coef)
    return Polynomial(np.atleast_1d(np.asarray(c, dtype=float)))


class DiffOperator:
    """``sum_n g_n(x) d^n/dx^n`` with polynomial ``g_n`` (power basis)."""

    def __init__(self, coefficients):
        coeffs = [_as_poly(c) for c in coefficients]
        while len(coeffs) > 1 and not np.any(coeffs[-1].coef):
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @classmethod
    def derivative(cls, n=1):
        return cls([0] * n + [1])

    @classmethod
    def identity(cls):
        return cls([1])

    @property
    def order(self):
        return len(self.coefficients) - 1

    def __matmul__(self, other):
        """Composition ``self o other`` via the Leibniz rule."""
        out = [Polynomial([0.0]) for _ in range(self.order + other.order + 1)]
        for n, a in enumerate(self.coefficients):
            if not np.any(a.coef):
                continue
            for m, b in enumerate(other.coefficients):
                db = b
                for i in range(n + 1):
                    if i:
                        db = db.deriv()
                    out[m + n - i] = out[m + n - i] + comb(n, i) * a * db
        return DiffOperator(out)

    def __pow__(self, k):
        result = DiffOperator.identity()
        for _ in range(k):
            result = self @ result
        return result

    def __rmul__(self, scalar):
        return DiffOperator([scalar * c for c in self.coefficients])

    def coefficient_values(self, x):
        """The coefficient functions evaluated at ``x``, one array per order."""
        x = np.asarray(x, dtype=float)
        return [c(x) for c in self.coefficients]

    def apply(self, derivatives, x):
        """``sum_n g_n(x) * derivatives[n]`` for precomputed derivative values."""
        vals = self.coefficient_values(x)
        return sum(g * derivatives[n] for n, g in enumerate(vals))

    def __repr__(self):
        terms = [f"({c.coef.tolist()})*D^{n}" for n, c in enumerate(self.coefficients)]
        return "DiffOperator(" + " + ".join(terms) + ")"
