"""
Sparse Legendre sums from six kernel moments
============================================

A sum of three Legendre polynomials of degrees 1, 4 and 9 is recovered
from the moments ``int f (A*)^k phi`` with ``A`` the Legendre operator.
No point value of ``f`` is ever used.
"""

import numpy as np

from gop import Legendre, SparseExpansion, catalog, recover

# the planted signal
L = Legendre()
f = SparseExpansion(L, [1, 4, 9], [1.703, 3.193, 3.710])
print("f(1) =", f(1.0))

# the kernel vanishes to order 12 at both ends of [-1/2, 3/4], so the
# operator can be moved onto it by partial integration
scheme = catalog.legendre_moments(L, 3, a=-0.5, b=0.75, alpha=0.1, beta0=-2.0, beta1=2.0)
print(scheme)
print("raw measurements:", scheme.measurement_ids)

moments = scheme.simulate(f)
for key, value in moments.items():
    print(f"  {key}  {value.real: .6e}")

# the Prony roots are eigenvalues n (n + 1); degrees follow by inversion
result = recover(scheme, moments)
np.set_printoptions(precision=10)
print("degrees before rounding:", result.unrounded_parameters.real)
print("degrees:", result.parameters.real.astype(int))
print("coefficients:", result.coefficients.real)
print("sigma_M / sigma_1 of the row-scaled matrix: %.2e" % result.condition)
