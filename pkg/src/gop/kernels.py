"""Moment kernels of the form ``sum_i p_i(x) exp(q_i(x))`` on ``[a, b]``.

The class is closed under differentiation, multiplication by polynomials
and addition, so the adjoint of any polynomial-coefficient differential
operator maps it into itself. Polynomials are stored as Chebyshev series
on ``[a, b]``; high powers like ``(x - a)^12 (x - b)^12`` are far better
conditioned there than in the monomial basis.
"""

import hashlib

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial

from .errors import BoundaryViolation


def _cheb(coef, a, b):
    return Chebyshev(np.atleast_1d(np.asarray(coef, dtype=float)), domain=[a, b])


def _to_cheb(poly, a, b):
    """A power-basis polynomial (coefficients or :class:`Polynomial`) on ``[a, b]``."""
    if isinstance(poly, Chebyshev):
        return poly.convert(kind=Chebyshev, domain=[a, b])
    if not isinstance(poly, Polynomial):
        poly = Polynomial(np.atleast_1d(np.asarray(poly, dtype=float)))
    return poly.convert(kind=Chebyshev, domain=[a, b])


def linear_factor(root, a, b):
    """``x - root`` as a Chebyshev series on ``[a, b]``; exact in that basis."""
    return Chebyshev([(a + b) / 2 - root, (b - a) / 2], domain=[a, b])


def _trim(c):
    c = c.trim(tol=0)
    return c


class KernelExpr:
    """Formal sum of ``p(x) exp(q(x))`` terms, zero outside ``[a, b]``.

    Parameters
    ----------
    terms : sequence of (Chebyshev, Chebyshev)
        Pairs ``(p, q)`` on the domain ``[a, b]``. Terms with identical
        ``q`` are merged.
    a, b : float
        Support interval.
    """

    def __init__(self, terms, a, b):
        self.a = float(a)
        self.b = float(b)
        if not self.a < self.b:
            raise ValueError("kernel support needs a < b")
        merged = {}
        for p, q in terms:
            p = _trim(_cheb(p.coef, self.a, self.b))
            q = _trim(_cheb(q.coef, self.a, self.b))
            k = tuple(q.coef.tolist())
            if k in merged:
                merged[k] = (merged[k][0] + p, q)
            else:
                merged[k] = (p, q)
        self.terms = tuple((p, q) for p, q in merged.values() if np.any(p.coef))
        self._vanishing = None

    @classmethod
    def from_power(cls, p, q=(0.0,), a=0.0, b=1.0):
        """Single term from monomial coefficients of ``p`` and ``q``.

        ``p`` and ``q`` may also be :class:`~numpy.polynomial.Chebyshev`
        series, which skips the lossy conversion from the power basis.
        """
        return cls([(_to_cheb(p, a, b), _to_cheb(q, a, b))], a, b)

    @property
    def support(self):
        return self.a, self.b

    def is_polynomial(self):
        """True if every exponent ``q`` is constant."""
        return all(len(q.coef) <= 1 for _, q in self.terms)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        inside = (x >= self.a) & (x <= self.b)
        xi = x[inside]
        out[inside] = sum((p(xi) * np.exp(q(xi)) for p, q in self.terms), np.zeros(xi.shape))
        return out

    def deriv(self, n=1):
        """``n``-th derivative; ``(p e^q)' = (p' + p q') e^q``."""
        k = self
        for _ in range(n):
            k = KernelExpr([(p.deriv() + p * q.deriv(), q) for p, q in k.terms], k.a, k.b)
        return k

    def mul_poly(self, g):
        """Product with a power-basis polynomial ``g``."""
        gc = _to_cheb(g, self.a, self.b)
        return KernelExpr([(gc * p, q) for p, q in self.terms], self.a, self.b)

    def __add__(self, other):
        if (self.a, self.b) != (other.a, other.b):
            raise ValueError("kernels with different supports cannot be added")
        return KernelExpr(self.terms + other.terms, self.a, self.b)

    def __mul__(self, scalar):
        return KernelExpr([(scalar * p, q) for p, q in self.terms], self.a, self.b)

    __rmul__ = __mul__

    def __neg__(self):
        return -1.0 * self

    def translate(self, t):
        """``x -> kernel(x - t)``, supported on ``[a + t, b + t]``."""
        a, b = self.a + t, self.b + t
        return KernelExpr([(_cheb(p.coef, a, b), _cheb(q.coef, a, b)) for p, q in self.terms], a, b)

    def power_coefficients(self):
        """Monomial coefficients of a polynomial kernel in ``t = x - a``."""
        if not self.is_polynomial():
            raise ValueError("kernel has a non-constant exponent")
        width = self.b - self.a
        out = np.zeros(1)
        for p, q in self.terms:
            c = Chebyshev(p.coef, domain=[0.0, width]).convert(kind=Polynomial).coef
            c = c * np.exp(q.coef[0] if len(q.coef) else 0.0)
            n = max(len(out), len(c))
            out = np.pad(out, (0, n - len(out))) + np.pad(c, (0, n - len(c)))
        return out

    def key(self, digits=12):
        """Stable content hash of the kernel."""
        h = hashlib.sha1()
        h.update(f"{self.a:.15g}|{self.b:.15g}".encode())
        for p, q in self.terms:
            for arr in (p.coef, q.coef):
                h.update(np.array2string(arr, precision=digits, separator=",",
                                         threshold=10**6).encode())
                h.update(b";")
        return h.hexdigest()[:16]

    def vanishing_order(self, max_order=64, tol=1e-10):
        """Number ``d`` such that derivatives ``0..d-1`` vanish at both ends.

        A derivative counts as vanishing when its endpoint values are below
        ``tol`` times the roundoff scale of its representation, i.e. the sum
        of absolute Chebyshev coefficients weighted by ``max |exp(q)|``.
        """
        if self._vanishing is None:
            grid = np.linspace(self.a, self.b, 257)
            k, d = self, 0
            while d < max_order:
                vals = k(grid)
                scale = sum(np.sum(np.abs(p.coef)) * np.max(np.exp(q(grid))) for p, q in k.terms)
                scale = max(scale, np.max(np.abs(vals)), np.finfo(float).tiny)
                if abs(vals[0]) > tol * scale or abs(vals[-1]) > tol * scale:
                    break
                if not k.terms:
                    d = max_order
                    break
                d += 1
                k = k.deriv()
            self._vanishing = d
        return self._vanishing

    def check_boundary(self, order):
        """Raise :class:`BoundaryViolation` unless derivatives below ``order`` vanish."""
        have = self.vanishing_order()
        if have < order:
            raise BoundaryViolation(
                f"kernel on [{self.a:g}, {self.b:g}] vanishes to order {have} at the ends, "
                f"integration by parts needs {order}"
            )

    def __repr__(self):
        return f"KernelExpr({len(self.terms)} term(s) on [{self.a:g}, {self.b:g}])"


def adjoint_apply(op, kernel):
    """``A* kernel = sum_n (-1)^n d^n/dx^n (g_n kernel)`` for ``A = sum g_n d^n``.

    Raises
    ------
    BoundaryViolation
        If derivatives of ``kernel`` up to order ``A.order - 1`` do not vanish
        at both ends, so boundary terms of the partial integration survive.
    """
    kernel.check_boundary(op.order)
    out = KernelExpr([], kernel.a, kernel.b)
    for n, g in enumerate(op.coefficients):
        if not np.any(g.coef):
            continue
        term = kernel.mul_poly(g).deriv(n)
        out = out + (term if n % 2 == 0 else -term)
    return out


def phi_P(M, a=-0.5, b=0.75, alpha=0.1, beta0=-2.0, beta1=2.0):
    """``(x-a)^{4M} (x-b)^{4M} exp(-alpha (x-beta0)^2 (x-beta1)^2)`` on ``[a, b]``."""
    # powering the product keeps coefficients at the scale of the values
    base = (linear_factor(a, a, b) * linear_factor(b, a, b)) ** (4 * M)
    q = -alpha * Polynomial([-beta0, 1]) ** 2 * Polynomial([-beta1, 1]) ** 2
    return KernelExpr.from_power(base, q, a, b)


def bump(m, a=0.0, b=1.0):
    """``(x - a)^m (b - x)^m`` on ``[a, b]``."""
    base = (-linear_factor(a, a, b) * linear_factor(b, a, b)) ** m
    return KernelExpr.from_power(base, (0.0,), a, b)
