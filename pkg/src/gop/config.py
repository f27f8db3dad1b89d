"""Experiment configuration files.

An experiment is a TOML file::

    name = "expo_hankel"
    M = 2
    seed = 0

    [family]
    kind = "exponential"          # exponential, cosine, generalized_exp,
    band = 1.0                    # gaussian, chebyshev, legendre

    [truth]                       # optional, at most M terms; needs [data] otherwise
    parameters = [[0.1, 1.0], -0.5]     # complex as [re, im], number or "1+2j"
    coefficients = [2.0, [0.0, 1.0]]

    [scheme]
    kind = "hankel_shift"         # any key of gop.catalog.SCHEMES
    tau = 1.0
    x0 = 0.0

    [noise]
    sigma = 0.0                   # additive complex Gaussian on raw data

    [recovery]
    rank_tol = 1e-10
    snap = true

    [data]
    measurements = "samples.csv"  # used when [truth] is absent

    [output]
    kernel_curves = "curves.csv"  # optional, kernel schemes only

Family keys: ``band`` for every kind; ``G``, ``G_params`` and ``H`` for
``generalized_exp``; ``alpha`` for ``gaussian``. Scheme keys are the
keyword arguments of the chosen catalog builder.
"""

import inspect
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import catalog
from . import families as fam
from .errors import ConfigError, GOPError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SECTIONS = {"name", "M", "seed", "family", "truth", "scheme", "noise", "recovery", "data", "output"}


def parse_complex(value, where):
    """``1.5``, ``[1.5, -2]`` or ``"1.5-2j"`` as a complex number."""
    if isinstance(value, bool):
        raise ConfigError(where, f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            pass
    raise ConfigError(where, f"cannot read {value!r} as a complex number")


@dataclass
class ExperimentConfig:
    """A validated experiment description."""

    name: str
    M: int
    family: fam.EigenFamily
    scheme_kind: str
    scheme_args: dict
    truth: tuple = None
    measurements_path: Path = None
    noise_sigma: float = 0.0
    seed: int = 0
    rank_tol: float = 1e-10
    snap: bool = True
    kernel_curves: Path = None
    raw: dict = field(default_factory=dict, repr=False)

    def build_scheme(self):
        return catalog.SCHEMES[self.scheme_kind](self.family, self.M, **self.scheme_args)

    def expansion(self):
        if self.truth is None:
            return None
        return fam.SparseExpansion(self.family, *self.truth)


def _family(spec):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("family.kind", "missing")
    spec = dict(spec)
    kind = spec.pop("kind")
    if kind not in fam.FAMILIES:
        raise ConfigError("family.kind", f"unknown family {kind!r}; choose from {sorted(fam.FAMILIES)}")
    try:
        if kind == "generalized_exp":
            name = spec.pop("G", None)
            if name is None:
                raise ConfigError("family.G", "generalized_exp needs a generator name")
            params = spec.pop("G_params", {})
            try:
                gen = fam.generator(name, **params)
            except KeyError as exc:
                raise ConfigError("family.G", str(exc)) from None
            return fam.GeneralizedExp(gen, **spec)
        if kind == "cosine" or kind == "chebyshev":
            if "band" not in spec:
                raise ConfigError("family.band", f"{kind} needs the band constant")
        return fam.FAMILIES[kind](**spec)
    except TypeError as exc:
        raise ConfigError("family", str(exc)) from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("family", str(exc)) from None


def _scheme_args(kind, spec):
    builder = catalog.SCHEMES[kind]
    allowed = set(list(inspect.signature(builder).parameters)[2:])
    unknown = set(spec) - allowed
    if unknown:
        raise ConfigError(f"scheme.{sorted(unknown)[0]}",
                          f"not a parameter of {kind}; allowed: {sorted(allowed)}")
    out = {}
    for k, v in spec.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"scheme.{k}", f"expected a number, got {v!r}")
        out[k] = float(v)
    return out


def load_config(source, base_dir=None):
    """Validate a config given as a path, TOML text or parsed dict.

    Raises
    ------
    ConfigError
        With the dotted name of the offending field.
    """
    if isinstance(source, dict):
        raw = source
    else:
        path = Path(source)
        base_dir = base_dir or path.parent
        try:
            raw = tomllib.loads(path.read_text())
        except FileNotFoundError:
            raise ConfigError("path", f"no such file {path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError("syntax", str(exc)) from None
    base_dir = Path(base_dir or ".")

    unknown = set(raw) - SECTIONS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    M = raw.get("M")
    if not isinstance(M, int) or isinstance(M, bool) or M < 1:
        raise ConfigError("M", f"expected a positive integer, got {M!r}")
    family = _family(raw.get("family"))

    scheme = dict(raw.get("scheme", {}))
    kind = scheme.pop("kind", None)
    if kind not in catalog.SCHEMES:
        raise ConfigError("scheme.kind", f"unknown scheme {kind!r}; choose from {sorted(catalog.SCHEMES)}")
    args = _scheme_args(kind, scheme)
    tau = args.get("tau")
    if tau is not None and abs(tau) > family.max_step() * (1 + 1e-12):
        raise ConfigError("scheme.tau", f"|tau| = {abs(tau):g} exceeds {family.max_step():g} "
                          f"for band constant C = {family.band:g}")

    truth = None
    if "truth" in raw:
        t = raw["truth"]
        lam = [parse_complex(v, f"truth.parameters[{i}]") for i, v in enumerate(t.get("parameters", []))]
        c = [parse_complex(v, f"truth.coefficients[{i}]") for i, v in enumerate(t.get("coefficients", []))]
        # fewer planted terms than M is allowed; it probes order overestimation
        if len(lam) != len(c) or not 1 <= len(lam) <= M:
            raise ConfigError("truth", f"need 1..M={M} parameters and as many coefficients")
        try:
            fam.SparseExpansion(family, lam, c)
        except (GOPError, ValueError) as exc:
            raise ConfigError("truth", str(exc)) from None
        truth = (np.array(lam), np.array(c))

    data = raw.get("data", {})
    mpath = data.get("measurements")
    if mpath is not None:
        mpath = base_dir / mpath
    if truth is None and mpath is None:
        raise ConfigError("data.measurements", "needed when no [truth] is given")

    sigma = raw.get("noise", {}).get("sigma", 0.0)
    if not isinstance(sigma, (int, float)) or sigma < 0:
        raise ConfigError("noise.sigma", "expected a nonnegative number")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("seed", "expected an integer")
    rec = raw.get("recovery", {})
    rank_tol = float(rec.get("rank_tol", 1e-10))
    if not 0 < rank_tol < 1:
        raise ConfigError("recovery.rank_tol", "expected a value in (0, 1)")
    curves = raw.get("output", {}).get("kernel_curves")

    return ExperimentConfig(
        name=str(raw.get("name", "experiment")), M=M, family=family,
        scheme_kind=kind, scheme_args=args, truth=truth, measurements_path=mpath,
        noise_sigma=float(sigma), seed=seed, rank_tol=rank_tol,
        snap=bool(rec.get("snap", True)),
        kernel_curves=None if curves is None else Path(curves), raw=raw,
    )


def bundled_configs():
    """Names of the configs shipped in ``gop/configs``."""
    root = resources.files("gop") / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def bundled_path(name):
    """Path of a bundled config by name."""
    p = resources.files("gop") / "configs" / f"{name}.toml"
    if not p.is_file():
        raise ConfigError("path", f"no bundled config {name!r}; have {bundled_configs()}")
    return Path(str(p))
