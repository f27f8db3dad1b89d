"""
Four ways to sample an exponential sum
======================================

The same signal ``f(x) = sum c_j exp(T_j x)`` is recovered from equispaced
values, from a strided grid, from derivatives at one point and from
derivatives on a short grid. Each scheme asks for different raw data.
"""

import numpy as np

from gop import Exponential, SparseExpansion, catalog, recover

E = Exponential()
T = [0.3 + 1.0j, -0.2 - 2.0j, 0.1 + 0.5j]
f = SparseExpansion(E, T, [1.0, 2.0 - 1.0j, 0.5])

schemes = {
    "f(n tau), n < 2M": catalog.hankel_shift(E, 3, tau=1.0),
    "f(2k tau + l tau)": catalog.strided(E, 3, tau=1.0),
    "f^(n)(0), n < 2M": catalog.derivative(E, 3),
    "f^(l)(k tau)": catalog.mixed(E, 3, tau=1.0),
}

for label, scheme in schemes.items():
    r = recover(scheme, scheme.simulate(f))
    err = np.max(np.abs(np.sort_complex(r.parameters) - np.sort_complex(np.array(T))))
    print(f"{label:20s} {scheme.measurement_count:2d} samples  "
          f"hankel={scheme.hankel!s:5s}  max|dT| = {err:.1e}")

# too large an order leaves a two-dimensional kernel
try:
    over = catalog.hankel_shift(E, 4)
    recover(over, over.simulate(f))
except Exception as exc:
    print(type(exc).__name__ + ":", exc)
