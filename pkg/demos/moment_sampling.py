"""
Exponential sums from moments
=============================

Two schemes use only moments ``int_0^1 f(x + k) x^s dx``. Both rely on
the kernel ``x^m (1 - x)^m`` vanishing at the ends. The moments enter the
matrix through signed sums, so accuracy falls as ``M`` grows.
"""

import numpy as np

from gop import Exponential, SparseExpansion, catalog, recover

E = Exponential()
rng = np.random.default_rng(3)

for build in (catalog.moments_shift, catalog.moments_derivative):
    print(build.__name__)
    for M in range(1, 6):
        T = rng.uniform(-1, 1, M) + 1j * np.linspace(-2.5, 2.5, M)
        f = SparseExpansion(E, T, rng.uniform(0.5, 2, M))
        scheme = build(E, M)
        try:
            r = recover(scheme, scheme.simulate(f))
            err = max(np.min(np.abs(r.parameters - t)) for t in T)
            print(f"  M={M}: {scheme.measurement_count:2d} moments, max|dT| = {err:.1e}")
        except Exception as exc:
            print(f"  M={M}: {type(exc).__name__}")
