"""The recovery pipeline.

kernel vector of the sampling matrix -> roots of the Prony polynomial ->
parameters through the inverse spectral map -> coefficients by least
squares -> diagnostics.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from . import numkit
from .errors import BranchViolation, RankDeficient

ROOT_SEPARATION = 1e-10


@dataclass
class RecoveryResult:
    """Recovered expansion with diagnostics.

    ``parameters`` are family parameters (``T`` for exponentials, the
    frequency for cosines, the degree for Legendre sums) sorted by real
    then imaginary part. ``unrounded_parameters`` holds the values before
    projection onto a parameter lattice and equals ``parameters`` otherwise.
    """

    parameters: np.ndarray
    coefficients: np.ndarray
    mapped_roots: np.ndarray
    prony_coeffs: np.ndarray
    unrounded_parameters: np.ndarray
    residual_norm: float
    prony_residual: float
    singular_values: np.ndarray
    min_separation: float
    warnings: list = field(default_factory=list)

    @property
    def M(self):
        return len(self.parameters)

    @property
    def condition(self):
        """``sigma_M / sigma_1`` of the row-equilibrated sampling matrix."""
        s = self.singular_values
        return float(s[-1] / s[0]) if len(s) and s[0] else 0.0

    def to_dict(self):
        """JSON-ready dict; complex numbers become ``[re, im]`` pairs."""
        def enc(v):
            if isinstance(v, np.ndarray):
                v = v.tolist()
            if isinstance(v, list):
                return [enc(u) for u in v]
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, (np.floating, float)):
                return float(v)
            return v

        d = {k: enc(v) for k, v in asdict(self).items()}
        d["sigma_ratio"] = self.condition
        return d


def _sorted(values):
    return sorted(range(len(values)), key=lambda i: (round(values[i].real, 12), values[i].imag))


def _labels(scheme, roots):
    """Family parameters from mapped roots; roots off the branch are dropped."""
    smap, family = scheme.spectral_map, scheme.family
    labels, kept, warnings = [], [], []
    for r in roots:
        try:
            v = smap.inverse(r)
            labels.append(v if smap.acts_on_frequency else family.label_from_eigenvalue(v))
            kept.append(r)
        except BranchViolation as exc:
            warnings.append(f"root {complex(r):.6g} dropped: {exc}")
    return np.array(labels, dtype=complex), np.array(kept, dtype=complex), warnings


def mapped_value(scheme, lam):
    """``phi(mu(lam))``, or ``phi(lam)`` for maps acting on the frequency."""
    smap = scheme.spectral_map
    if smap.acts_on_frequency:
        return smap.forward(lam)
    return smap.forward(scheme.family.eigenvalue_of(lam))


def _check_distinct(mus):
    mus = np.asarray(mus, dtype=complex)
    if len(mus) > 1:
        d = np.abs(mus[:, None] - mus[None, :]) + np.diag(np.full(len(mus), np.inf))
        if d.min() < ROOT_SEPARATION:
            raise RankDeficient(f"roots coincide to within {d.min():.1e}")


def solve_coefficients(parameters, scheme, measurements, mapped=None, rank_tol=numkit.RANK_TOL):
    """Least-squares coefficients for known parameters.

    Hankel schemes solve the ``2M x M`` Vandermonde system in
    ``h_n = F(phi(A)**n f)``; other schemes stack all ``M (M + 1)`` entry
    equations ``F_k(phi(A)**l f) = sum_j c_j mu_j**l F_k(v_j)``.

    Parameters
    ----------
    parameters : sequence of complex
    scheme : Scheme
    measurements : dict
    mapped : sequence of complex, optional
        The values ``mu_j = phi(...)`` if already known (e.g. the Prony
        roots); computed from ``parameters`` otherwise.

    Raises
    ------
    RankDeficient
        If two ``mu_j`` coincide to within ``1e-10``.
    """
    parameters = np.asarray(parameters, dtype=complex)
    mus = (np.array([mapped_value(scheme, lam) for lam in parameters])
           if mapped is None else np.asarray(mapped, dtype=complex))
    _check_distinct(mus)
    if len(parameters) == 0:
        return np.empty(0, dtype=complex)
    fv = np.column_stack([scheme.functional_values(lam) for lam in parameters])
    if scheme.hankel:
        seq = scheme.hankel_sequence()
        h = np.array([sum(w * measurements[key] for key, w in e.items()) for e in seq])
        V = mus[None, :] ** np.arange(len(h))[:, None]
        return numkit.lstsq(V, h, rank_tol) / fv[0]
    mat = scheme.assemble(measurements).matrix
    M = scheme.M
    rows, rhs = [], []
    for k in range(M):
        for l in range(M + 1):
            rows.append(mus**l * fv[k])
            rhs.append(mat[k, l])
    return numkit.lstsq(np.array(rows), np.array(rhs), rank_tol)


def _model_matrix(scheme, parameters, mus, coefficients):
    fv = np.column_stack([scheme.functional_values(lam) for lam in parameters])
    M = scheme.M
    out = np.zeros((M, M + 1), dtype=complex)
    for l in range(M + 1):
        out[:, l] = fv @ (coefficients * mus**l)
    return out


def recover(scheme, measurements, M=None, rank_tol=numkit.RANK_TOL, snap=True):
    """Recover a sparse expansion from the raw measurements of ``scheme``.

    Parameters
    ----------
    scheme : Scheme
    measurements : dict
        Raw measurement id -> value.
    M : int, optional
        Must equal ``scheme.M`` when given.
    rank_tol : float
        Relative tolerance for the kernel vector and the coefficient solve.
    snap : bool
        Project parameters onto the family lattice (Legendre degrees)
        before solving for the coefficients.

    Returns
    -------
    RecoveryResult

    Raises
    ------
    RankDeficient
        If the sampling matrix has a kernel of dimension above one; usually
        ``M`` is too large for the data.
    BranchViolation
        If no root has a preimage under the spectral map.
    """
    if M is not None and M != scheme.M:
        raise ValueError(f"scheme was built for M={scheme.M}, got M={M}")
    sm = scheme.assemble(measurements)
    H = sm.matrix
    He = numkit.equilibrate_rows(H)
    sv = numkit.singular_values(He)
    try:
        p = numkit.null_vector(He, rank_tol)
    except RankDeficient as exc:
        raise RankDeficient(f"{exc}; the expansion probably has fewer than M={scheme.M} terms") from None
    roots = numkit.poly_roots(p)
    labels, roots, warnings = _labels(scheme, roots)
    if len(labels) == 0:
        raise BranchViolation("no root of the Prony polynomial lies in the image of the spectral map",
                              numkit.poly_roots(p))
    order = _sorted(labels)
    labels, roots = labels[order], roots[order]
    raw = labels.copy()
    mus = roots
    snapped = np.array([scheme.family.snap(v) for v in labels], dtype=complex)
    if snap and np.any(snapped != labels):
        labels = snapped
        mus = np.array([mapped_value(scheme, v) for v in labels])
        if len(set(np.round(labels, 12))) < len(labels):
            warnings.append("rounding merged two parameters")
    coeffs = solve_coefficients(labels, scheme, measurements, mapped=mus, rank_tol=rank_tol)
    model = _model_matrix(scheme, labels, mus, coeffs)
    residual = float(np.linalg.norm(model - H) / max(np.linalg.norm(H), np.finfo(float).tiny))
    prony_res = float(np.linalg.norm(He @ p) / np.linalg.norm(He))
    sep = (float(np.min(np.abs(labels[:, None] - labels[None, :]) + np.diag([np.inf] * len(labels))))
           if len(labels) > 1 else float("inf"))
    return RecoveryResult(
        parameters=labels, coefficients=coeffs, mapped_roots=roots, prony_coeffs=p,
        unrounded_parameters=raw, residual_norm=residual, prony_residual=prony_res,
        singular_values=sv, min_separation=sep, warnings=warnings,
    )


def estimate_order(matrix, tol=1e-10):
    """Numerical rank: the number of singular values above ``tol * sigma_1``."""
    s = numkit.singular_values(matrix)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))
