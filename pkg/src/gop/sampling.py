"""Sampling functionals, schemes and the sampling matrix.

Every matrix entry ``F_k(phi(A)**l f)`` is reduced to a linear combination
of *raw measurements* of ``f``:

``PointSample(x, order)``
    ``f^(order)(x)``
``Moment(a, b, s)``
    ``int_a^b f(x) (x - a)^s dx``
``KernelMoment(kernel)``
    ``int_a^b f(x) kernel(x) dx``

Point functionals are pulled through iteration operators with their grid
rules; kernel functionals through the adjoint (``<A f, k> = <f, A* k>``) or
by translating the kernel for shifts. Measurements carry canonical ids, so
two functionals touching the same sample share one raw value.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from . import numkit
from .errors import (AdmissibilityFailure, DomainEscape, MissingMeasurement,
                     SchemeError)
from .kernels import KernelExpr
from .operators import (Dilation, GeneralizedShift, IterationAction,
                        PlainPower, SymmetricShift)
from .quadrature import integrate

QUAD_TOL = 1e-10


# ---------------------------------------------------------------------------
# raw measurements


def _fmt(x):
    return repr(round(float(x), 12) + 0.0)


@dataclass(frozen=True)
class PointSample:
    """``f^(order)(x)``."""

    x: float
    order: int = 0

    @property
    def id(self):
        return f"pt:x={_fmt(self.x)}:d={self.order}"

    def evaluate(self, target):
        return complex(target.eval_derivative(self.x, self.order))


@dataclass(frozen=True)
class Moment:
    """``int_a^b f(x) (x - a)^s dx``."""

    a: float
    b: float
    s: int
    tol: float = field(default=QUAD_TOL, compare=False)

    @property
    def id(self):
        return f"mom:a={_fmt(self.a)}:b={_fmt(self.b)}:s={self.s}"

    def evaluate(self, target):
        a, s = self.a, self.s
        return integrate(lambda x: target.eval_derivative(x, 0) * (x - a) ** s,
                         self.a, self.b, self.tol, self.tol)


@dataclass(frozen=True, eq=False)
class KernelMoment:
    """``int f(x) kernel(x) dx`` over the kernel support."""

    kernel: KernelExpr
    tol: float = QUAD_TOL

    @property
    def id(self):
        return f"ker:{self.kernel.key()}:a={_fmt(self.kernel.a)}:b={_fmt(self.kernel.b)}"

    def evaluate(self, target):
        k = self.kernel
        return integrate(lambda x: target.eval_derivative(x, 0) * k(x), k.a, k.b, self.tol, self.tol)


class _Eigenfunction:
    """``v_lam`` with the ``eval_derivative`` interface of an expansion."""

    def __init__(self, family, lam):
        self.family, self.lam = family, lam

    def eval_derivative(self, x, order):
        return self.family.eigenfunction(self.lam, x, order)


class _Callable:
    """Wrap a plain vectorized ``f(x)``; only order-0 samples are available."""

    def __init__(self, f):
        self.f = f

    def eval_derivative(self, x, order):
        if order:
            raise SchemeError("a plain callable cannot supply derivative samples")
        return np.asarray(self.f(x), dtype=complex)


def _target(f):
    return f if hasattr(f, "eval_derivative") else _Callable(f)


# ---------------------------------------------------------------------------
# functionals


@dataclass(frozen=True)
class PointEval:
    """``F f = f(x0)``."""

    x0: float

    def atoms(self):
        return [(("pt", float(self.x0), 0), 1.0)]


@dataclass(frozen=True)
class DeltaDerivative:
    """``F f = f^(order)(x0)``."""

    x0: float
    order: int = 1

    def atoms(self):
        return [(("pt", float(self.x0), int(self.order)), 1.0)]


@dataclass(frozen=True)
class WeightedPoints:
    """``F f = sum_i w_i f(x_i)``."""

    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((float(x), complex(w)) for x, w in self.points))

    def atoms(self):
        return [(("pt", x, 0), w) for x, w in self.points]


@dataclass(frozen=True, eq=False)
class MomentKernel:
    """``F f = int f(x) kernel(x) dx``.

    With ``split_moments=True`` a kernel without exponential factor is
    measured through the monomial moments ``Moment(a, b, s)``.
    """

    kernel: KernelExpr
    split_moments: bool = True
    tol: float = QUAD_TOL

    def atoms(self):
        return [(("ker", self.kernel), 1.0)]


@dataclass(frozen=True, eq=False)
class ComposedWithAction:
    """``F_k = base o psi(A)**k``."""

    action: IterationAction
    k: int
    base: object

    def atoms(self):
        return _pull(self.base.atoms(), self.action, self.k)


def apply_functional(F, f):
    """``F(f)`` for an expansion, eigenfunction or plain callable ``f``.

    Kernel functionals are integrated directly against the kernel.
    """
    t = _target(f)
    total = 0j
    for atom, w in F.atoms():
        total += w * _measure(atom, t, tol=getattr(F, "tol", QUAD_TOL))
    return total


def _measure(atom, target, tol=QUAD_TOL):
    if atom[0] == "pt":
        return PointSample(atom[1], atom[2]).evaluate(target)
    return KernelMoment(atom[1], tol).evaluate(target)


# ---------------------------------------------------------------------------
# pulling atoms through iteration operators


def _is_plain_shift(action):
    return (isinstance(action, GeneralizedShift) and action.generator.name == "linear"
            and action.H is None)


def _pull_atom(atom, weight, action, n):
    if n == 0:
        return [(atom, weight)]
    if atom[0] == "pt":
        _, x, order = atom
        if isinstance(action, PlainPower):
            return [(("pt", y, o), weight * w) for y, w, o in action.grid_points(x, n, order)]
        if isinstance(action, Dilation):
            scale = action.a ** (n * order)
            return [(("pt", y, order), weight * w * scale) for y, w, _ in action.grid_points(x, n)]
        if order and _is_plain_shift(action):
            return [(("pt", x + n * action.tau, order), weight)]
        if order:
            raise SchemeError(f"derivative samples cannot be pulled through {action!r}")
        return [(("pt", y, o), weight * w) for y, w, o in action.grid_points(x, n)]
    kernel = atom[1]
    if isinstance(action, PlainPower):
        from .kernels import adjoint_apply
        for _ in range(n):
            kernel = adjoint_apply(action.operator, kernel)
        return [(("ker", kernel), weight)]
    if _is_plain_shift(action):
        return [(("ker", kernel.translate(n * action.tau)), weight)]
    if isinstance(action, SymmetricShift) and action.generator.name == "linear" and not action.fold:
        from math import comb
        return [(("ker", kernel.translate((n - 2 * r) * action.tau)), weight * comb(n, r) / 2**n)
                for r in range(n + 1)]
    raise SchemeError(f"kernel functionals cannot be pulled through {action!r}")


def _pull(atoms, action, n):
    out = []
    for atom, w in atoms:
        out.extend(_pull_atom(atom, w, action, n))
    return out


def _fuse(psi, k, phi, l):
    """``psi**k phi**l`` as a single ``(action, power)`` when the two commute
    into one closed-form step, else ``None``."""
    if psi is phi:
        return phi, k + l
    if (isinstance(psi, GeneralizedShift) and isinstance(phi, GeneralizedShift)
            and psi.generator is phi.generator and psi.H is phi.H):
        step = k * psi.tau + l * phi.tau
        if step == 0:
            return phi, 0
        return GeneralizedShift(phi.generator, step, phi.H), 1
    return None


# ---------------------------------------------------------------------------
# schemes


@dataclass(frozen=True)
class SamplingMatrix:
    """The ``M x (M+1)`` matrix with the raw data it was built from."""

    matrix: np.ndarray
    provenance: list
    raw_samples: dict


class Scheme:
    """A family, an iteration operator and ``M`` sampling functionals.

    Use :func:`build_scheme` to construct one. ``entries[k][l]`` maps
    measurement ids to weights; ``measurements`` lists every raw measurement
    the scheme needs, in first-use order.
    """

    def __init__(self, family, action, functionals, M, spectral_map=None, name="custom"):
        self.family = family
        self.action = action
        self.spectral_map = spectral_map or action.spectral_map
        self.functionals = list(functionals)
        self.M = M
        self.name = name
        self.measurements = {}
        self.entries = [[self._combo(k, l) for l in range(M + 1)] for k in range(M)]
        self.hankel = all(
            self.entries[k][l] == self.entries[k + 1][l - 1]
            for k in range(M - 1) for l in range(1, M + 1)
        )

    # -- construction helpers
    def _entry_atoms(self, k, l):
        F = self.functionals[k]
        if isinstance(F, ComposedWithAction):
            fused = _fuse(F.action, F.k, self.action, l)
            if fused is not None:
                return _pull(F.base.atoms(), *fused)
        return _pull(F.atoms(), self.action, l)

    def _register(self, m):
        key = m.id
        self.measurements.setdefault(key, m)
        return key

    def _combo(self, k, l):
        F = self.functionals[k]
        base = F.base if isinstance(F, ComposedWithAction) else F
        split = getattr(base, "split_moments", True)
        tol = getattr(base, "tol", QUAD_TOL)
        combo = {}

        def add(key, w):
            combo[key] = combo.get(key, 0) + w

        for atom, w in self._entry_atoms(k, l):
            if atom[0] == "pt":
                _, x, order = atom
                if self.family.even and x < 0:
                    x, w = -x, w * (-1) ** order
                self._check_point(x)
                add(self._register(PointSample(x, order)), w)
                continue
            kernel = atom[1]
            self._check_support(kernel)
            if split and kernel.is_polynomial():
                coef = kernel.power_coefficients()
                # roundoff from the Chebyshev conversion is not a real moment
                floor = 64 * np.finfo(float).eps * np.max(np.abs(coef))
                for s, c in enumerate(coef):
                    if abs(c) > floor:
                        add(self._register(Moment(kernel.a, kernel.b, s, tol)), w * c)
            else:
                add(self._register(KernelMoment(kernel, tol)), w)
        return {key: w for key, w in combo.items() if w != 0}

    def _check_point(self, x):
        lo, hi = self.family.domain
        if not (lo - 1e-12 * max(1, abs(lo)) <= x <= hi + 1e-12 * max(1, abs(hi))):
            raise DomainEscape(f"sample point {x:g} leaves the domain {self.family.domain}")

    def _check_support(self, kernel):
        lo, hi = self.family.domain
        if kernel.a < lo - 1e-12 or kernel.b > hi + 1e-12:
            raise DomainEscape(f"kernel support [{kernel.a:g}, {kernel.b:g}] leaves the domain")

    # -- data
    @property
    def measurement_ids(self):
        return list(self.measurements)

    @property
    def measurement_count(self):
        return len(self.measurements)

    def simulate(self, f):
        """Exact raw measurements of ``f``."""
        t = _target(f)
        return {key: complex(m.evaluate(t)) for key, m in self.measurements.items()}

    def assemble(self, measurements):
        missing = [key for key in self.measurements if key not in measurements]
        if missing:
            raise MissingMeasurement(f"{len(missing)} measurement(s) missing, e.g. {missing[0]}")
        mat = np.array([[sum(w * measurements[key] for key, w in e.items()) for e in row]
                        for row in self.entries], dtype=complex)
        raw = {key: complex(measurements[key]) for key in self.measurements}
        return SamplingMatrix(mat, self.entries, raw)

    def functional_values(self, lam):
        """``F_k(v_lam)`` for ``k = 0..M-1``."""
        t = _Eigenfunction(self.family, lam)
        cache = {}

        def value(key):
            if key not in cache:
                cache[key] = self.measurements[key].evaluate(t)
            return cache[key]

        return np.array([sum(w * value(key) for key, w in self.entries[k][0].items())
                         for k in range(self.M)], dtype=complex)

    def hankel_sequence(self):
        """Combos for ``h_n = F(phi(A)**n f)``, ``n = 0..2M-1``, on Hankel schemes."""
        if not self.hankel:
            raise SchemeError("scheme is not of Hankel type")
        M = self.M
        return [self.entries[min(n, M - 1)][n - min(n, M - 1)] for n in range(2 * M)]

    def __repr__(self):
        return (f"Scheme({self.name}, family={self.family!r}, action={self.action!r}, "
                f"M={self.M}, measurements={self.measurement_count})")


def build_scheme(family, action, functionals, M, spectral_map=None, name="custom",
                 proven=False, rng=None, probes=3):
    """Describe every raw measurement behind ``(F_k(phi(A)**l f))``.

    Parameters
    ----------
    family : EigenFamily
    action : IterationAction
        Realization of ``phi(A)`` on samples.
    functionals : list of M functionals
    M : int
    spectral_map : SpectralMap, optional
        Defaults to ``action.spectral_map``.
    proven : bool
        Skip the randomized admissibility probe (for schemes whose
        admissibility is known).

    Raises
    ------
    DomainEscape
        If a sample point or kernel support leaves the family domain.
    AdmissibilityFailure
        If ``(F_k(v_lam_j))`` is singular for every probe draw of ``M``
        region parameters.
    """
    if len(functionals) != M:
        raise SchemeError(f"expected {M} functionals, got {len(functionals)}")
    if M < 1:
        raise SchemeError("M must be positive")
    scheme = Scheme(family, action, functionals, M, spectral_map, name)
    if not proven:
        _admissibility_probe(scheme, rng or np.random.default_rng(0), probes)
    return scheme


def _admissibility_probe(scheme, rng, probes):
    best = 0.0
    for _ in range(probes):
        lams = scheme.family.sample_region(rng, scheme.M)
        mat = np.column_stack([scheme.functional_values(lam) for lam in lams])
        s = numkit.singular_values(mat)
        best = max(best, s[-1] / s[0] if s[0] else 0.0)
    if best < 1e-12:
        raise AdmissibilityFailure(
            f"(F_k(v_lam)) was numerically singular on {probes} random draws "
            f"(best sigma_min/sigma_max = {best:.2e})"
        )


def assemble_matrix(scheme, measurements):
    return scheme.assemble(measurements)


# ---------------------------------------------------------------------------
# CSV


def write_measurements(path, measurements):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["measurement_id", "real", "imag"])
        for key, v in measurements.items():
            w.writerow([key, repr(float(v.real)), repr(float(v.imag))])


def read_measurements(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and set(rows[0]) != {"measurement_id", "real", "imag"}:
        raise ValueError("measurement CSV needs columns measurement_id, real, imag")
    return {r["measurement_id"]: complex(float(r["real"]), float(r["imag"])) for r in rows}
