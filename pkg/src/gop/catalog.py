"""Ready-made sampling schemes.

Each builder returns a :class:`~gop.sampling.Scheme` whose admissibility is
known in closed form, so the randomized probe is skipped.
"""

import numpy as np

from . import families as fam
from .errors import SchemeError
from .kernels import bump, phi_P
from .operators import HalfSumShift, PlainPower, Shift, SymmetricShift, natural_action
from .sampling import (ComposedWithAction, MomentKernel, PointEval,
                       WeightedPoints, build_scheme)


def _check_step(family, tau):
    limit = family.max_step()
    if abs(tau) > limit * (1 + 1e-12):
        raise SchemeError(f"|tau| = {abs(tau):g} exceeds {limit:g} for {family!r}; "
                          "the spectral map would not be injective")


def hankel_shift(family, M, tau=1.0, x0=0.0):
    """``F_k = F_x0 o S**k`` with ``phi(A) = S``: samples ``S**n f(x0)``, ``n < 2M``.

    ``S`` is the (generalized) shift matching the family: ``f(x0 + n tau)``
    for exponential sums, ``f(G^{-1}(n tau + G(x0)))`` with weights for a
    generalized exponential family, and so on.
    """
    _check_step(family, tau)
    S = natural_action(family, tau)
    Fs = [ComposedWithAction(S, k, PointEval(x0)) for k in range(M)]
    return build_scheme(family, S, Fs, M, name="hankel_shift", proven=True)


def strided(family, M, tau=1.0, x0=0.0, theta=None):
    """``F_k = F_x0 o S_theta**k`` with ``phi(A) = S_tau``; ``theta = 2 tau`` by default.

    Needs ``f(x0 + theta k + tau l)``, which is ``3M - 1`` values for ``theta = 2 tau``.
    """
    theta = 2 * tau if theta is None else theta
    _check_step(family, tau)
    S = natural_action(family, tau)
    T = natural_action(family, theta)
    Fs = [ComposedWithAction(T, k, PointEval(x0)) for k in range(M)]
    return build_scheme(family, S, Fs, M, name="strided", proven=True)


def derivative(family, M, x0=0.0):
    """``F_k = F_x0 o A**k`` with ``phi(A) = A``: samples ``(A**n f)(x0)``, ``n < 2M``."""
    A = PlainPower(family.operator)
    Fs = [ComposedWithAction(A, k, PointEval(x0)) for k in range(M)]
    return build_scheme(family, A, Fs, M, name="derivative", proven=True)


def mixed(family, M, tau=1.0, x0=0.0):
    """``F_k = F_x0 o S_tau**k`` with ``phi(A) = A``: samples ``f^(l)(x0 + k tau)``."""
    A = PlainPower(family.operator)
    S = Shift(tau)
    Fs = [ComposedWithAction(S, k, PointEval(x0)) for k in range(M)]
    return build_scheme(family, A, Fs, M, name="mixed", proven=True)


def cosine_hankel(family, M, tau):
    """Cosine sums with ``phi(A) = (S_tau + S_-tau)/2`` and ``F_k = F_0 o phi(A)**k``.

    Evenness folds the grid onto the ``2M`` values ``f(n tau)``.
    """
    _check_step(family, tau)
    Phi = HalfSumShift(tau, fold=True)
    Fs = [ComposedWithAction(Phi, k, PointEval(0.0)) for k in range(M)]
    return build_scheme(family, Phi, Fs, M, name="cosine_hankel", proven=True)


def cosine_chebyshev(family, M, tau):
    """Cosine sums with ``F_k f = f(k tau) + f(-k tau)``.

    The matrix entries are ``2 sum_j c_j cos(alpha_j tau)**l cos(alpha_j k tau)``.
    """
    _check_step(family, tau)
    Phi = HalfSumShift(tau, fold=True)
    Fs = [WeightedPoints(((k * tau, 1.0), (-k * tau, 1.0))) for k in range(M)]
    return build_scheme(family, Phi, Fs, M, name="cosine_chebyshev", proven=True)


def cos_exp(family, M):
    """``f = sum c_j exp(H + lam_j cos x)`` from ``f(arccos(k tau + 1))``, ``tau = -1/M``.

    ``family`` is a :class:`~gop.families.GeneralizedExp` with ``G = cos``.
    """
    if not isinstance(family, fam.GeneralizedExp) or family.generator.name != "cos":
        raise SchemeError("cos_exp needs a generalized exponential family with G = cos")
    return hankel_shift(family, M, -1.0 / M, 0.0)


def gaussian(family, M, tau=1.0):
    """Shifted Gaussians from ``f(tau k / (2 alpha))``, ``k < 2M``."""
    return hankel_shift(family, M, tau, 0.0)


def chebyshev(family, M, tau):
    """``cos(lam arccos x)`` sums from ``f(cos(n tau))``, ``n < 2M``, with ``x0 = 1``."""
    _check_step(family, tau)
    if (2 * M - 1) * tau > np.pi:
        raise SchemeError("need (2M - 1) tau <= pi so that the grid stays in [0, pi]")
    Phi = SymmetricShift("arccos", tau, fold=True)
    Fs = [ComposedWithAction(Phi, k, PointEval(1.0)) for k in range(M)]
    return build_scheme(family, Phi, Fs, M, name="chebyshev", proven=True)


def legendre_moments(family, M, a=-0.5, b=0.75, alpha=0.1, beta0=-2.0, beta1=2.0, tol=1e-10):
    """Sparse Legendre sums from ``int_a^b f (A*)**n phi_P``, ``n < 2M``."""
    A = PlainPower(family.operator)
    F = MomentKernel(phi_P(M, a, b, alpha, beta0, beta1), split_moments=False, tol=tol)
    Fs = [ComposedWithAction(A, k, F) for k in range(M)]
    return build_scheme(family, A, Fs, M, name="legendre_moments", proven=True)


def moments_derivative(family, M):
    """``F = <., x^{2M} (1-x)^{2M}>`` on ``[0, 1]``, ``F_k = F o A**k``, ``phi(A) = A``.

    Entries come from the moments ``int_0^1 f x^s``, ``s = 1..4M``; ``s = 0``
    drops out because every kernel still vanishes at 0.
    """
    A = PlainPower(family.operator)
    F = MomentKernel(bump(2 * M))
    Fs = [ComposedWithAction(A, k, F) for k in range(M)]
    return build_scheme(family, A, Fs, M, name="moments_derivative", proven=True)


def moments_shift(family, M):
    """``F = <., x^M (1-x)^M>`` on ``[0, 1]``, ``F_k = F o S_1**k``, ``phi(A) = A``.

    Entries come from ``int_0^1 f(x + k) x^s``, ``k < M``, ``s = 0..2M``.
    """
    A = PlainPower(family.operator)
    F = MomentKernel(bump(M))
    Fs = [ComposedWithAction(Shift(1.0), k, F) for k in range(M)]
    return build_scheme(family, A, Fs, M, name="moments_shift", proven=True)


def generalized_shift(family, M, tau, x0):
    """Generalized exponential sums via ``S_{G,H,tau}``; an alias of :func:`hankel_shift`."""
    return hankel_shift(family, M, tau, x0)


SCHEMES = {
    "hankel_shift": hankel_shift,
    "strided": strided,
    "derivative": derivative,
    "mixed": mixed,
    "cosine_hankel": cosine_hankel,
    "cosine_chebyshev": cosine_chebyshev,
    "chebyshev": chebyshev,
    "cos_exp": cos_exp,
    "gaussian": gaussian,
    "legendre_moments": legendre_moments,
    "moments_derivative": moments_derivative,
    "moments_shift": moments_shift,
}

__all__ = list(SCHEMES) + ["generalized_shift", "SCHEMES"]
