"""Eigenfunction families and sparse expansions into them.

A family maps an eigen-parameter ``lam`` to an eigenfunction ``v_lam`` of a
linear operator ``A``. The parameter is what gets recovered; the operator
eigenvalue is ``family.eigenvalue_of(lam)``:

==================  ================================  ==================
family              v_lam(x)                          eigenvalue of A
==================  ================================  ==================
Exponential         exp(lam x)                        lam   (A = d/dx)
Cosine              cos(lam x)                        lam^2 (A = -d^2/dx^2)
GeneralizedExp      exp(H(x) + lam G(x))              lam   (A = g d/dx + h)
ShiftedGaussian     exp(-alpha (x - lam)^2)           lam
ChebyshevLike       cos(lam arccos x)                 -lam^2
Legendre            P_n(x), lam = n                   n (n + 1)
==================  ================================  ==================
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np
import sympy as sp
from numpy.polynomial import hermite as _herm
from numpy.polynomial import legendre as _leg

from .diffops import DiffOperator
from .errors import DomainViolation, RegionViolation

_X, _Y = sp.symbols("x y", real=True)
_DOMAIN_TOL = 1e-12


def _compile(expr, sym):
    f = sp.lambdify(sym, expr, modules="numpy")

    def call(t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(f(t), dtype=float), t.shape).copy()

    return call


def _inside(values, lo, hi, tol=_DOMAIN_TOL):
    values = np.asarray(values, dtype=float)
    slack_lo = tol * max(1.0, abs(lo)) if np.isfinite(lo) else 0.0
    slack_hi = tol * max(1.0, abs(hi)) if np.isfinite(hi) else 0.0
    return (values >= lo - slack_lo) & (values <= hi + slack_hi) & np.isfinite(values)


class ShiftGenerator:
    """A strictly monotone ``G`` on an interval together with its inverse.

    ``G`` and ``G^{-1}`` are sympy expressions in ``x`` and ``y``; numeric
    callables for ``G``, ``G'``, higher derivatives and ``G^{-1}`` are built
    from them.

    Parameters
    ----------
    name : str
    G : sympy expression in ``x``
    G_inverse : sympy expression in ``y``
    interval : (float, float)
        The interval ``I`` on which ``G`` is monotone.
    image : (float, float)
        ``G(I)``.
    """

    def __init__(self, name, G, G_inverse, interval, image):
        self.name = name
        self.G_expr = sp.sympify(G, locals={"x": _X})
        self.G_inverse_expr = sp.sympify(G_inverse, locals={"y": _Y})
        self.interval = tuple(float(v) for v in interval)
        self.image = tuple(float(v) for v in image)
        self.G = _compile(self.G_expr, _X)
        self.G_inverse = _compile(self.G_inverse_expr, _Y)
        self._derivs = {}

    def derivative(self, n):
        """Numeric callable for the ``n``-th derivative of ``G``."""
        if n not in self._derivs:
            self._derivs[n] = _compile(sp.diff(self.G_expr, _X, n), _X)
        return self._derivs[n]

    def dG(self, x):
        return self.derivative(1)(x)

    def in_interval(self, x):
        return _inside(x, *self.interval)

    def in_image(self, y):
        return _inside(y, *self.image)

    def __repr__(self):
        return f"ShiftGenerator({self.name!r}, G={self.G_expr})"


_INF = float("inf")
_PI = float(np.pi)


def _power_generator(p=2.0):
    p = float(p)
    if p == 1.0:
        raise ValueError("power preset needs p != 1 (use 'log')")
    e = 1 - p
    image = (0.0, _INF) if e > 0 else (-_INF, 0.0)
    return ShiftGenerator(
        f"power(p={p:g})", _X ** sp.Float(e) / sp.Float(e),
        (sp.Float(e) * _Y) ** sp.Float(1 / e), (0.0, _INF), image,
    )


_TABLE = {
    "quadratic": lambda: ShiftGenerator("quadratic", -_X**2 / 2, sp.sqrt(-2 * _Y), (0.0, _INF), (-_INF, 0.0)),
    "linear": lambda: ShiftGenerator("linear", _X, _Y, (-_INF, _INF), (-_INF, _INF)),
    "log": lambda: ShiftGenerator("log", sp.log(_X), sp.exp(_Y), (0.0, _INF), (-_INF, _INF)),
    "power": _power_generator,
    "arccos": lambda: ShiftGenerator("arccos", sp.acos(_X), sp.cos(_Y), (-1.0, 1.0), (0.0, _PI)),
    "arcsin": lambda: ShiftGenerator("arcsin", sp.asin(_X), sp.sin(_Y), (-1.0, 1.0), (-_PI / 2, _PI / 2)),
    "arcosh": lambda: ShiftGenerator("arcosh", sp.acosh(_X), sp.cosh(_Y), (1.0, _INF), (0.0, _INF)),
    "arsinh": lambda: ShiftGenerator("arsinh", sp.asinh(_X), sp.sinh(_Y), (-_INF, _INF), (-_INF, _INF)),
    "sin": lambda: ShiftGenerator("sin", sp.sin(_X), sp.asin(_Y), (-_PI / 2, _PI / 2), (-1.0, 1.0)),
    "cos": lambda: ShiftGenerator("cos", sp.cos(_X), sp.acos(_Y), (0.0, _PI), (-1.0, 1.0)),
    "sinh": lambda: ShiftGenerator("sinh", sp.sinh(_X), sp.asinh(_Y), (-_INF, _INF), (-_INF, _INF)),
    "cosh": lambda: ShiftGenerator("cosh", sp.cosh(_X), sp.acosh(_Y), (0.0, _INF), (1.0, _INF)),
}

GENERATOR_PRESETS = tuple(_TABLE)


@lru_cache(maxsize=None)
def generator(name, **params):
    """One of the twelve built-in generators, e.g. ``generator("cos")``.

    ``power`` accepts the exponent ``p`` (default 2).
    """
    try:
        factory = _TABLE[name]
    except KeyError:
        raise KeyError(f"unknown generator {name!r}; choose from {GENERATOR_PRESETS}") from None
    return factory(**params)


def scaled_linear_generator(scale):
    """``G(x) = scale * x`` on the whole line."""
    s = sp.Float(float(scale))
    return ShiftGenerator(f"linear*{float(scale):g}", s * _X, _Y / s, (-_INF, _INF), (-_INF, _INF))


# ---------------------------------------------------------------------------
# families


class EigenFamily:
    """Common interface of all families.

    Subclasses define ``kind``, ``domain``, ``eigenfunction`` and the region
    test. ``band`` is the constant ``C`` bounding the eigen-parameter region.
    """

    kind = "abstract"
    domain = (-_INF, _INF)
    symmetric = False
    even = False
    band = 1.0

    def eigenfunction(self, lam, x, order=0):
        raise NotImplementedError

    def in_region(self, lam):
        raise NotImplementedError

    def check_region(self, lam):
        if not self.in_region(lam):
            raise RegionViolation(f"{lam} is outside the eigenvalue region of {self!r}")

    def check_domain(self, x):
        x = np.asarray(x, dtype=float)
        if not np.all(_inside(x, *self.domain)):
            bad = x[~_inside(x, *self.domain)]
            raise DomainViolation(f"points {bad[:3].tolist()} outside domain {self.domain} of {self.kind}")

    def eigenvalue_of(self, lam):
        self.check_region(lam)
        return complex(lam)

    def label_from_eigenvalue(self, mu):
        """Inverse of :meth:`eigenvalue_of` (no region check)."""
        return complex(mu)

    def snap(self, lam):
        """Project a recovered parameter onto the parameter lattice."""
        return lam

    @property
    def operator(self):
        """The operator ``A`` as a :class:`DiffOperator`, or ``None``."""
        return None

    def operator_coefficients(self, x):
        return self.operator.coefficient_values(x)

    def max_step(self):
        """Largest step ``tau`` keeping the spectral map injective on the region."""
        return _PI / self.band

    def sample_region(self, rng, n):
        """``n`` random parameters from the region (for admissibility probes)."""
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}(band={self.band:g})"


class Exponential(EigenFamily):
    """``exp(T x)`` with ``Im T`` in ``[-C pi, C pi)``."""

    kind = "exponential"

    def __init__(self, band=1.0):
        self.band = float(band)

    def eigenfunction(self, lam, x, order=0):
        lam = complex(lam)
        return lam**order * np.exp(lam * np.asarray(x, dtype=float))

    def in_region(self, lam):
        lam = complex(lam)
        h = self.band * _PI
        return bool(np.isfinite(lam) and -h - 1e-12 <= lam.imag < h)

    @property
    def operator(self):
        return DiffOperator.derivative(1)

    def max_step(self):
        return 1.0 / self.band

    def sample_region(self, rng, n):
        h = self.band * _PI
        return rng.uniform(-1, 1, n) + 1j * rng.uniform(-h, h, n)


class Cosine(EigenFamily):
    """``cos(alpha x)`` with ``alpha`` in ``[0, C)``; even in ``x``."""

    kind = "cosine"
    symmetric = True
    even = True

    def __init__(self, band):
        self.band = float(band)

    def eigenfunction(self, lam, x, order=0):
        a = complex(lam).real
        return a**order * np.cos(a * np.asarray(x, dtype=float) + order * _PI / 2) + 0j

    def in_region(self, lam):
        lam = complex(lam)
        return bool(abs(lam.imag) <= 1e-12 and 0 <= lam.real < self.band)

    def eigenvalue_of(self, lam):
        self.check_region(lam)
        return complex(lam) ** 2

    def label_from_eigenvalue(self, mu):
        return complex(np.sqrt(complex(mu)))

    @property
    def operator(self):
        return DiffOperator([0, 0, -1])

    def sample_region(self, rng, n):
        return rng.uniform(0, self.band, n) + 0j


class GeneralizedExp(EigenFamily):
    """``exp(H(x) + lam G(x))`` for a :class:`ShiftGenerator` ``G``.

    ``H`` is a sympy expression (or string) in ``x``. The parameter region
    is ``Im lam`` in ``[-C, C)``; the operator is ``g d/dx + h`` with
    ``g = 1/G'`` and ``h = -H'/G'``.
    """

    kind = "generalized_exp"

    def __init__(self, G, H="0", band=_PI):
        self.generator = generator(G) if isinstance(G, str) else G
        self.H_expr = sp.sympify(H, locals={"x": _X})
        self.H = _compile(self.H_expr, _X)
        self._H_derivs = {0: self.H}
        self.band = float(band)
        self.domain = self.generator.interval

    def H_derivative(self, n):
        if n not in self._H_derivs:
            self._H_derivs[n] = _compile(sp.diff(self.H_expr, _X, n), _X)
        return self._H_derivs[n]

    def eigenfunction(self, lam, x, order=0):
        lam = complex(lam)
        x = np.asarray(x, dtype=float)
        G = self.generator
        y = [np.exp(self.H(x) + lam * G.G(x))]
        # derivatives of exp(u) from u^(m) = H^(m) + lam G^(m)
        du = [self.H_derivative(m)(x) + lam * G.derivative(m)(x) for m in range(1, order + 1)]
        for n in range(1, order + 1):
            y.append(sum(comb(n - 1, k) * du[k] * y[n - 1 - k] for k in range(n)))
        return y[order]

    def in_region(self, lam):
        lam = complex(lam)
        return bool(np.isfinite(lam) and -self.band - 1e-12 <= lam.imag < self.band)

    def operator_coefficients(self, x):
        d = self.generator.dG(x)
        return [-self.H_derivative(1)(x) / d, 1.0 / d]

    def sample_region(self, rng, n):
        return rng.uniform(-1, 1, n) + 1j * rng.uniform(-self.band, self.band, n)

    def __repr__(self):
        return f"GeneralizedExp(G={self.generator.name}, H={self.H_expr}, band={self.band:g})"


class ShiftedGaussian(EigenFamily):
    """``exp(-alpha (x - lam)^2)`` with real shifts ``lam``.

    Eigenfunctions of ``A = (1/(2 alpha)) d/dx + x``; as a generalized
    exponential it has ``G = 2 alpha x`` and ``H = -alpha x^2``.
    """

    kind = "gaussian"

    def __init__(self, alpha=1.0, band=10.0):
        self.alpha = float(alpha)
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        self.band = float(band)

    def eigenfunction(self, lam, x, order=0):
        lam = complex(lam).real
        s = np.sqrt(self.alpha)
        t = np.asarray(x, dtype=float) - lam
        herm = _herm.hermval(s * t, [0] * order + [1])
        return (-s) ** order * herm * np.exp(-self.alpha * t**2) + 0j

    def in_region(self, lam):
        lam = complex(lam)
        return bool(abs(lam.imag) <= 1e-12 and abs(lam.real) <= self.band)

    @property
    def operator(self):
        return DiffOperator([[0, 1], 1 / (2 * self.alpha)])

    def max_step(self):
        return _INF

    def generalized(self):
        """The same eigenfunctions up to scaling, as a :class:`GeneralizedExp`."""
        return GeneralizedExp(scaled_linear_generator(2 * self.alpha), -self.alpha * _X**2, band=1.0)

    def sample_region(self, rng, n):
        return rng.uniform(-min(self.band, 2.0), min(self.band, 2.0), n) + 0j

    def __repr__(self):
        return f"ShiftedGaussian(alpha={self.alpha:g})"


class ChebyshevLike(EigenFamily):
    """``cos(lam arccos x)`` on ``[-1, 1]``, ``lam`` in ``[0, C)``.

    Eigenfunctions of ``B = (1 - x^2) d^2/dx^2 - x d/dx`` with eigenvalue
    ``-lam^2``; integer ``lam`` gives the Chebyshev polynomials.
    """

    kind = "chebyshev"
    domain = (-1.0, 1.0)
    symmetric = True

    def __init__(self, band):
        self.band = float(band)

    def eigenfunction(self, lam, x, order=0):
        lam = complex(lam).real
        shape = np.shape(x)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        theta = np.arccos(np.clip(x, -1, 1))
        out = np.empty((order + 1,) + x.shape)
        out[0] = np.cos(lam * theta)
        interior = np.abs(x) < 1
        xi = x[interior]
        if order >= 1:
            out[1][interior] = lam * np.sin(lam * theta[interior]) / np.sqrt(1 - xi**2)
        # differentiated ODE: (1-x^2) y^(k+2) = (2k+1) x y^(k+1) - (lam^2 - k^2) y^(k)
        for k in range(order - 1):
            out[k + 2][interior] = ((2 * k + 1) * xi * out[k + 1][interior]
                                    - (lam**2 - k**2) * out[k][interior]) / (1 - xi**2)
        # at x = +-1 the same ODE gives y^(k+1) = +-(lam^2 - k^2)/(2k+1) y^(k)
        for sign in (1.0, -1.0):
            at = x == sign
            for k in range(order):
                out[k + 1][at] = sign * (lam**2 - k**2) / (2 * k + 1) * out[k][at]
        return (out[order] + 0j).reshape(shape)

    def in_region(self, lam):
        lam = complex(lam)
        return bool(abs(lam.imag) <= 1e-12 and 0 <= lam.real < self.band)

    def eigenvalue_of(self, lam):
        self.check_region(lam)
        return -complex(lam) ** 2

    def label_from_eigenvalue(self, mu):
        return complex(np.sqrt(-complex(mu)))

    @property
    def operator(self):
        return DiffOperator([0, [0, -1], [1, 0, -1]])

    def sample_region(self, rng, n):
        return rng.uniform(0, self.band, n) + 0j


def legendre_eval(n, x):
    """``P_n(x)`` by the three-term recurrence.

    ``(k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}``.
    """
    x = np.asarray(x, dtype=float)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    p_prev, p = np.ones_like(x), x.copy()
    if n == 0:
        return p_prev
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p


class Legendre(EigenFamily):
    """Legendre polynomials ``P_n`` on ``[-1, 1]``; the parameter is ``n``.

    ``A = (x^2 - 1) d^2/dx^2 + 2x d/dx`` has ``A P_n = n(n+1) P_n``.
    ``band`` caps the admissible degree.
    """

    kind = "legendre"
    domain = (-1.0, 1.0)

    def __init__(self, band=64):
        self.band = float(band)

    @staticmethod
    def degree(lam):
        lam = complex(lam)
        n = int(round(lam.real))
        if abs(lam.imag) > 1e-9 or abs(lam.real - n) > 1e-9 or n < 0:
            raise RegionViolation(f"{lam} is not a Legendre degree")
        return n

    def eigenfunction(self, lam, x, order=0):
        n = self.degree(lam)
        x = np.asarray(x, dtype=float)
        if order == 0:
            return legendre_eval(n, x) + 0j
        c = _leg.legder([0] * n + [1], order)
        return _leg.legval(x, c) + 0j

    def in_region(self, lam):
        try:
            n = self.degree(lam)
        except RegionViolation:
            return False
        return n <= self.band

    def eigenvalue_of(self, lam):
        n = self.degree(lam)
        return complex(n * (n + 1))

    def label_from_eigenvalue(self, mu):
        # principal root of n^2 + n - mu = 0
        return (-1 + np.sqrt(1 + 4 * complex(mu))) / 2

    def snap(self, lam):
        return complex(max(0, int(round(complex(lam).real))))

    @property
    def operator(self):
        return DiffOperator([0, [0, 2], [-1, 0, 1]])

    def max_step(self):
        return _INF

    def sample_region(self, rng, n):
        return rng.choice(int(min(self.band, 30)) + 1, size=n, replace=False).astype(complex)


FAMILIES = {
    "exponential": Exponential,
    "cosine": Cosine,
    "generalized_exp": GeneralizedExp,
    "gaussian": ShiftedGaussian,
    "chebyshev": ChebyshevLike,
    "legendre": Legendre,
}


def eigenvalue_of(family, lam):
    return family.eigenvalue_of(lam)


# ---------------------------------------------------------------------------
# expansions


@dataclass(frozen=True, eq=False)
class SparseExpansion:
    """``f = sum_j c_j v_{lam_j}`` for a fixed family.

    Parameters must be pairwise distinct and inside the family region, and
    every coefficient must be nonzero.
    """

    family: EigenFamily
    parameters: np.ndarray
    coefficients: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.parameters, dtype=complex))
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))
        if lam.shape != c.shape or lam.ndim != 1:
            raise ValueError("parameters and coefficients must be 1-D of equal length")
        object.__setattr__(self, "parameters", lam)
        object.__setattr__(self, "coefficients", c)
        if not self.check:
            return
        for v in lam:
            self.family.check_region(v)
        if np.any(c == 0):
            raise ValueError("coefficients must be nonzero")
        if len(lam) > 1:
            d = np.abs(lam[:, None] - lam[None, :]) + np.eye(len(lam))
            if np.any(d == 0):
                raise ValueError("parameters must be pairwise distinct")

    @property
    def M(self):
        return len(self.parameters)

    def terms(self):
        return list(zip(self.parameters, self.coefficients))

    def eval(self, x):
        return self.eval_derivative(x, 0)

    __call__ = eval

    def eval_derivative(self, x, order):
        """Exact ``order``-th derivative of the expansion at ``x``."""
        self.family.check_domain(x)
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for lam, c in self.terms():
            out = out + c * self.family.eigenfunction(lam, x, order)
        return out if out.ndim else complex(out)
