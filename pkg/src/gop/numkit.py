"""Dense complex linear algebra and polynomial helpers.

Everything here works on plain :class:`numpy.ndarray` objects with complex
dtype. Rank decisions are made relative to the largest singular value.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateNormalization, RankDeficient, ZeroPolynomial

RANK_TOL = 1e-10


def as_matrix(m):
    """Return ``m`` as a finite 2-D complex array.

    Raises
    ------
    ValueError
        If ``m`` is not two-dimensional, is empty, or contains NaN/Inf.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if a.size == 0:
        raise ValueError("matrix is empty")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


@dataclass(frozen=True, eq=False)
class ComplexPoly:
    """Polynomial with complex coefficients stored in ascending degree.

    Trailing zero coefficients are stripped so the leading coefficient is
    nonzero unless the polynomial vanishes identically.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not np.any(self.coeffs)

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    @classmethod
    def from_roots(cls, roots):
        return cls(np.polynomial.polynomial.polyfromroots(np.asarray(roots, dtype=complex)))

    def roots(self):
        return poly_roots(self)


def poly_from_roots(roots):
    """Monic polynomial with the given roots."""
    return ComplexPoly.from_roots(roots)


def singular_values(m):
    """Singular values of ``m`` in descending order."""
    return np.linalg.svd(as_matrix(m), compute_uv=False)


def equilibrate_rows(m):
    """Scale every nonzero row of ``m`` to unit 2-norm.

    Rescaling a row rescales one sampling functional, which leaves the
    kernel unchanged but can remove a large spread in row magnitudes
    (e.g. moments of ``(A*)^k phi`` grow like ``lambda_max^k``).
    """
    a = as_matrix(m)
    norms = np.linalg.norm(a, axis=1, keepdims=True)
    return a / np.where(norms > 0, norms, 1.0)


def null_vector(m, tol=RANK_TOL):
    """Kernel vector of an ``M x (M+1)`` matrix, normalized to last entry 1.

    The vector is the right singular vector belonging to the zero singular
    value. It is first taken with unit 2-norm and then divided by its last
    entry.

    Parameters
    ----------
    m : array_like, shape (M, M+1)
    tol : float
        Relative rank tolerance. The smallest of the ``M`` singular values
        must exceed ``tol * sigma_max``, otherwise the kernel is not
        one-dimensional.

    Returns
    -------
    ndarray, shape (M+1,)

    Raises
    ------
    RankDeficient
        If the kernel has dimension larger than one.
    DegenerateNormalization
        If the last entry of the unit kernel vector is below ``1e-12``.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    if cols != rows + 1:
        raise ValueError(f"expected shape (M, M+1), got {a.shape}")
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    if s[0] == 0 or s[-1] < tol * s[0]:
        ratio = 0.0 if s[0] == 0 else s[-1] / s[0]
        raise RankDeficient(
            f"kernel is not one-dimensional: sigma_min/sigma_max = {ratio:.3e} < {tol:.1e}"
        )
    p = vh[-1].conj()
    if abs(p[-1]) < 1e-12:
        raise DegenerateNormalization(f"|p_M| = {abs(p[-1]):.3e} before rescaling")
    return p / p[-1]


def poly_roots(p):
    """All roots of ``p`` as eigenvalues of its companion matrix.

    LAPACK's nonsymmetric eigensolver balances the companion matrix before
    the QR iteration.
    """
    if not isinstance(p, ComplexPoly):
        p = ComplexPoly(p)
    if p.is_zero():
        raise ZeroPolynomial("all coefficients vanish")
    n = p.degree
    if n < 1:
        return np.empty(0, dtype=complex)
    c = p.coeffs / p.coeffs[-1]
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1]
    return np.linalg.eigvals(comp)


def lstsq(a, b, tol=RANK_TOL):
    """Least-squares solution of ``a @ x = b`` through the SVD.

    Raises
    ------
    RankDeficient
        If ``a`` is wide or its smallest singular value is below
        ``tol * sigma_max``.
    """
    a = as_matrix(a)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] < a.shape[1]:
        raise RankDeficient(f"underdetermined system of shape {a.shape}")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if s[0] == 0 or s[-1] < tol * s[0]:
        raise RankDeficient("coefficient matrix is rank deficient")
    return vh.conj().T @ ((u.conj().T @ b) / s)
