"""Spectral maps and iteration operators realized on sample grids.

A :class:`SpectralMap` is the scalar function ``phi`` carrying eigenvalues
of ``A`` to eigenvalues of the iteration operator ``phi(A)``. An
iteration action is the concrete form of ``phi(A)**k`` as a weighted sum of
(derivative) samples of ``f``: ``grid_points(x0, k)`` returns triples
``(point, weight, derivative_order)`` with

    (phi(A)**k f)(x0) = sum weight * f^(order)(point).

Powers are always formed in closed form (e.g. ``S_tau**k = S_{k tau}``),
never by truncating the power series of ``phi``.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .diffops import DiffOperator
from .errors import BranchViolation, DomainEscape, RegionViolation, SchemeError
from .families import ShiftGenerator, generator

_PI = float(np.pi)


@dataclass(frozen=True)
class SpectralMap:
    """``phi`` together with its inverse on a principal branch.

    kinds
        ``identity``   phi(z) = z
        ``exp``        phi(z) = exp(tau z); inverse branch arg in [-pi, pi)
        ``cos``        phi(alpha) = cos(tau alpha) on the cosine frequency
                       ``alpha = sqrt(z)``; inverse lands in [0, pi/tau]
        ``reciprocal`` phi(z) = 1/z
    """

    kind: str = "identity"
    tau: float = 1.0

    def __post_init__(self):
        if self.kind not in ("identity", "exp", "cos", "reciprocal"):
            raise ValueError(f"unknown spectral map {self.kind!r}")
        if self.kind in ("exp", "cos") and self.tau == 0:
            raise ValueError("tau must be nonzero")
        if self.kind == "cos" and self.tau < 0:
            raise ValueError("cos map needs tau > 0")

    @property
    def acts_on_frequency(self):
        """True if the map takes the cosine frequency rather than the eigenvalue."""
        return self.kind == "cos"

    def forward(self, lam):
        lam = complex(lam)
        if self.kind == "identity":
            return lam
        if self.kind == "exp":
            if abs((lam * self.tau).imag) > _PI + 1e-12:
                raise RegionViolation(f"Im(tau*lam) of {lam} leaves the principal strip")
            return complex(np.exp(self.tau * lam))
        if self.kind == "cos":
            if abs(lam.imag) > 1e-12 or not (0 <= lam.real <= _PI / self.tau + 1e-12):
                raise RegionViolation(f"cos map needs real frequency in [0, pi/tau], got {lam}")
            return complex(np.cos(self.tau * lam.real))
        if lam == 0:
            raise RegionViolation("reciprocal map is undefined at 0")
        return 1 / lam

    def inverse(self, mu, clamp_tol=1e-9):
        mu = complex(mu)
        if self.kind == "identity":
            return mu
        if self.kind == "exp":
            if mu == 0 or not np.isfinite(mu):
                raise BranchViolation(f"{mu} has no logarithm", mu)
            arg = float(np.angle(mu))
            if arg >= _PI:
                arg = -_PI
            return complex(np.log(abs(mu)), arg) / self.tau
        if self.kind == "cos":
            if abs(mu.imag) > clamp_tol or abs(mu.real) > 1 + clamp_tol:
                raise BranchViolation(f"{mu} is not in [-1, 1]", mu)
            return complex(np.arccos(np.clip(mu.real, -1.0, 1.0)) / self.tau)
        if mu == 0:
            raise BranchViolation("0 has no reciprocal", mu)
        return 1 / mu


def apply_spectral_map(spectral_map, lam):
    return spectral_map.forward(lam)


def invert_spectral_map(spectral_map, mu):
    return spectral_map.inverse(mu)


# ---------------------------------------------------------------------------
# iteration actions


def _merge(triples, digits=12):
    """Combine triples that share point and order; drop zero weights."""
    acc = {}
    for x, w, o in triples:
        key = (round(float(x), digits) + 0.0, int(o))
        if key in acc:
            acc[key][1] += w
        else:
            acc[key] = [float(x), w, int(o)]
    return [(x, w, o) for x, w, o in acc.values() if w != 0]


class IterationAction:
    """Base class; subclasses implement :meth:`grid_points`."""

    spectral_map = SpectralMap()

    def grid_points(self, x0, k):
        raise NotImplementedError

    def apply(self, f, x0, k):
        """``(phi(A)**k f)(x0)`` for ``f`` with ``f.eval_derivative``."""
        return sum(w * f.eval_derivative(x, o) for x, w, o in self.grid_points(x0, k))


class PlainPower(IterationAction):
    """``A**k`` itself, for a polynomial-coefficient differential operator."""

    def __init__(self, operator):
        self.operator = operator
        self._powers = {0: DiffOperator.identity()}

    def power(self, k):
        if k not in self._powers:
            self._powers[k] = self.operator @ self.power(k - 1)
        return self._powers[k]

    def grid_points(self, x0, k, derivative=0):
        """Triples for ``(d^derivative A**k f)(x0)``, all at ``x0``."""
        op = self.power(k)
        if derivative:
            op = DiffOperator.derivative(derivative) @ op
        vals = op.coefficient_values(x0)
        return [(float(x0), complex(g), n) for n, g in enumerate(vals) if g != 0]

    def __repr__(self):
        return f"PlainPower({self.operator!r})"


class GeneralizedShift(IterationAction):
    """``S_{G,H,tau} f(x) = exp(H(x) - H(y)) f(y)``, ``y = G^{-1}(tau + G(x))``.

    This is ``exp(tau A)`` for ``A = g d/dx + h`` and ``S**k = S_{G,H,k tau}``.
    ``H`` is a callable (default zero).
    """

    def __init__(self, gen, tau, H=None):
        self.generator = generator(gen) if isinstance(gen, str) else gen
        self.tau = float(tau)
        self.H = H
        self.spectral_map = SpectralMap("exp", self.tau)

    def target(self, x0, k):
        G = self.generator
        y = float(G.G(x0)) + k * self.tau
        if not G.in_image(y) or not G.in_interval(x0):
            raise DomainEscape(
                f"k*tau + G(x0) = {y:g} is outside G(I) = {G.image} for {G.name}"
            )
        return float(G.G_inverse(y))

    def grid_points(self, x0, k, derivative=0):
        if derivative:
            raise SchemeError("derivative functionals cannot be pulled through a generalized shift")
        x = self.target(x0, k)
        w = 1.0 if self.H is None else complex(np.exp(self.H(x0) - self.H(x)))
        return [(x, w, 0)]

    def __repr__(self):
        return f"GeneralizedShift({self.generator.name}, tau={self.tau:g})"


def Shift(tau):
    """The ordinary shift ``S_tau f = f(. + tau)``."""
    return GeneralizedShift("linear", tau)


class SymmetricShift(IterationAction):
    """``(S_{G,tau} + S_{G,-tau}) / 2``, the closed form of ``cos(tau A)``.

    ``k``-th powers expand binomially over the grid
    ``G^{-1}(G(x0) + (k - 2r) tau)``. With ``fold=True`` the G-coordinate is
    reflected to ``|G(x0) + (k - 2r) tau|``, valid for expansions in
    ``cos(lam G(x))`` which are even in that coordinate.
    """

    def __init__(self, gen, tau, fold=False):
        self.generator = generator(gen) if isinstance(gen, str) else gen
        self.tau = float(tau)
        self.fold = fold
        self.spectral_map = SpectralMap("cos", abs(self.tau))

    def folded(self, fold=True):
        return SymmetricShift(self.generator, self.tau, fold)

    def grid_points(self, x0, k, derivative=0):
        if derivative:
            raise SchemeError("derivative functionals cannot be pulled through a symmetric shift")
        G = self.generator
        g0 = float(G.G(x0))
        out = []
        for r in range(k + 1):
            y = g0 + (k - 2 * r) * self.tau
            if self.fold:
                y = abs(y)
            if not G.in_image(y):
                raise DomainEscape(f"G-coordinate {y:g} is outside G(I) = {G.image} for {G.name}")
            out.append((float(G.G_inverse(y)), comb(k, r) / 2**k, 0))
        return _merge(out)

    def __repr__(self):
        return f"SymmetricShift({self.generator.name}, tau={self.tau:g}, fold={self.fold})"


def HalfSumShift(tau, fold=False):
    """``(S_tau + S_{-tau}) / 2`` for ordinary shifts."""
    return SymmetricShift("linear", tau, fold)


class Dilation(IterationAction):
    """``D_a f(x) = f(a x)``; equals ``exp(tau x d/dx)`` for ``a = e^tau``."""

    def __init__(self, a):
        self.a = float(a)
        if self.a == 0:
            raise ValueError("dilation factor must be nonzero")
        self.spectral_map = SpectralMap("exp", float(np.log(abs(self.a))))

    def grid_points(self, x0, k, derivative=0):
        if derivative:
            raise SchemeError("derivative functionals cannot be pulled through a dilation")
        return [(self.a**k * float(x0), 1.0, 0)]

    def __repr__(self):
        return f"Dilation({self.a:g})"


def grid_points(action, x0, k):
    return action.grid_points(x0, k)


def compose_grid(action, x0, j, j2):
    """Grid rule of ``phi(A)**j2`` applied on top of the rule for ``phi(A)**j``.

    For a semigroup this coincides with ``grid_points(x0, j + j2)``.
    """
    out = []
    for x, w, _ in action.grid_points(x0, j):
        # the outer functional evaluates phi(A)**j g at x0 with g = phi(A)**j2 f
        for y, w2, o in action.grid_points(x, j2):
            out.append((y, w * w2, o))
    return _merge(out)


def natural_action(family, tau, symmetric=None):
    """The generalized (symmetric) shift matching a family's eigenfunctions."""
    from . import families as fam

    if isinstance(family, fam.Exponential):
        return Shift(tau)
    if isinstance(family, fam.GeneralizedExp):
        return GeneralizedShift(family.generator, tau, family.H)
    if isinstance(family, fam.ShiftedGaussian):
        g = family.generalized()
        return GeneralizedShift(g.generator, tau, g.H)
    if isinstance(family, fam.Cosine):
        return HalfSumShift(tau, fold=True)
    if isinstance(family, fam.ChebyshevLike):
        return SymmetricShift("arccos", tau, fold=True)
    raise SchemeError(f"no shift-type iteration operator for {family!r}")


__all__ = [
    "SpectralMap", "apply_spectral_map", "invert_spectral_map", "IterationAction",
    "PlainPower", "GeneralizedShift", "Shift", "SymmetricShift", "HalfSumShift",
    "Dilation", "grid_points", "compose_grid", "natural_action", "ShiftGenerator",
]
