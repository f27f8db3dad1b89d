"""
Cosine sums with a symmetric shift
==================================

For ``f(x) = sum c_j cos(alpha_j x)`` the operator ``(S_tau + S_-tau) / 2``
has eigenvalues ``cos(alpha_j tau)``. Evenness of ``f`` folds every sample
onto ``x >= 0``.
"""

import numpy as np

from gop import Cosine, SparseExpansion, catalog, recover

C = 20.0
tau = np.pi / C
family = Cosine(C)
f = SparseExpansion(family, [2.0, 5.0], [1 + 1j, -3.0])

for build in (catalog.cosine_hankel, catalog.cosine_chebyshev):
    scheme = build(family, 2, tau)
    data = scheme.simulate(f)
    H = scheme.assemble(data).matrix
    r = recover(scheme, data)
    print(build.__name__)
    print("  samples at x =", sorted(float(k.split(":")[1][2:]) for k in data))
    print("  matrix:\n", np.array2string(H, precision=4, prefix="  "))
    print("  frequencies:", r.parameters.real, " coefficients:", r.coefficients)
