import numpy as np
import pytest
import sympy as sp
from numpy.polynomial import Polynomial

from gop.diffops import DiffOperator
from gop.errors import BoundaryViolation
from gop.kernels import KernelExpr, adjoint_apply, bump, linear_factor, phi_P
from gop.quadrature import integrate

D = DiffOperator.derivative(1)
LEGENDRE = DiffOperator([0, [0, 2], [-1, 0, 1]])


def test_adjoint_of_derivative_flips_sign():
    x = np.linspace(0, 1, 7)
    assert np.allclose(adjoint_apply(D, bump(1))(x), -(1 - 2 * x), atol=1e-14)


def test_second_derivative_of_bump():
    x = np.linspace(0, 1, 7)
    assert np.allclose(bump(2).deriv(2)(x), 2 - 12 * x + 12 * x**2, atol=1e-13)
    twice = adjoint_apply(D, adjoint_apply(D, bump(2)))
    assert np.allclose(twice(x), 2 - 12 * x + 12 * x**2, atol=1e-13)


def test_boundary_violation():
    k = KernelExpr.from_power([0, 1], a=0, b=1)  # x does not vanish at 1
    with pytest.raises(BoundaryViolation):
        adjoint_apply(D, k)
    with pytest.raises(BoundaryViolation):
        adjoint_apply(LEGENDRE, bump(1))  # order 2 needs phi' = 0 at the ends


def test_legendre_adjoint_on_polynomial_kernel_matches_symbolic():
    M, a, b = 3, -0.5, 0.75
    t = sp.Symbol("t")
    phi = (t - sp.Rational(a)) ** (4 * M) * (t - sp.Rational(b)) ** (4 * M)
    g = [0, 2 * t, t**2 - 1]
    sym = sp.expand(sum((-1) ** n * sp.diff(g[n] * phi, t, n) for n in range(3)))
    x = [sp.Rational(a) + sp.Rational(i, 32) for i in range(41)]
    # exact rational evaluation; a float lambdify of the expanded form cancels badly
    ref = np.array([float(sym.subs(t, xi)) for xi in x])
    k = adjoint_apply(LEGENDRE, phi_P(M, a, b, alpha=0.0))
    got = k(np.array([float(xi) for xi in x]))
    assert np.max(np.abs(got - ref)) <= 1e-12 * np.max(np.abs(ref))
    assert sp.Poly(sym, t).degree() == 8 * M


def test_phi_p_properties():
    P = phi_P(3)
    assert P.vanishing_order() == 12
    assert not P.is_polynomial()
    x = np.linspace(-0.5, 0.75, 9)
    ref = (x + 0.5) ** 12 * (x - 0.75) ** 12 * np.exp(-0.1 * (x + 2) ** 2 * (x - 2) ** 2)
    assert np.max(np.abs(P(x) - ref)) <= 1e-12 * np.max(np.abs(ref))
    assert P(np.array([-0.6, 0.8])).tolist() == [0, 0]


def test_beta_integral():
    assert abs(integrate(bump(2), 0, 1) - 1 / 30) < 1e-15


def test_translate_and_power_coefficients():
    k = bump(2).translate(3.0)
    assert k.support == (3.0, 4.0)
    assert np.allclose(k.power_coefficients(), [0, 0, 1, -2, 1])
    assert abs(k(3.5) - bump(2)(0.5)) < 1e-15


def test_key_is_content_based():
    assert bump(3).key() == bump(3).key()
    assert bump(3).key() != bump(3).translate(1).key()
    assert bump(3).key() != (2 * bump(3)).key()


def _random_kernel(rng):
    a = rng.uniform(-1, 0)
    b = a + rng.uniform(0.5, 1.5)
    m = int(rng.integers(2, 5))
    p = (linear_factor(a, a, b) * linear_factor(b, a, b)) ** m
    p = p * Polynomial(rng.uniform(-1, 1, 3)).convert(kind=type(p), domain=[a, b])
    q = Polynomial(rng.uniform(-0.5, 0.5, 3))
    return KernelExpr.from_power(p, q, a, b)


def _check_adjoint_identity(op, rng, n=100):
    for _ in range(n):
        kern = _random_kernel(rng)
        f = Polynomial(rng.uniform(-1, 1, int(rng.integers(1, 12))) + 0j)
        f = f + 1j * Polynomial(rng.uniform(-1, 1, len(f.coef)))
        Af = sum((g * f.deriv(n) if n else g * f) for n, g in enumerate(op.coefficients))
        lhs = integrate(lambda x: Af(x) * kern(x), kern.a, kern.b, 1e-13, 1e-13)
        adj = adjoint_apply(op, kern)
        rhs = integrate(lambda x: f(x) * adj(x), kern.a, kern.b, 1e-13, 1e-13)
        assert abs(lhs - rhs) <= 1e-8 * (1 + abs(lhs))


def test_adjoint_identity_derivative():
    _check_adjoint_identity(D, np.random.default_rng(21))


def test_adjoint_identity_legendre():
    _check_adjoint_identity(LEGENDRE, np.random.default_rng(22))
