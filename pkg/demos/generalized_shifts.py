"""
Generalized shifts
==================

A first order operator ``A f = f' / G' + H' / G' f`` has eigenfunctions
``exp(H + lambda G)``. Its exponential acts as a weighted change of
variable, so powers of it need only point values.
"""

import numpy as np

from gop import GeneralizedExp, SparseExpansion, catalog, recover
from gop.operators import GeneralizedShift

# the semigroup law in the variable G(x) = log(x)
S = GeneralizedShift("log", 0.25, lambda x: 0.1 * np.asarray(x) ** 2)
print("S^3 at x=1:", S.grid_points(1.0, 3))
print("S_{3 tau} at x=1:", GeneralizedShift("log", 0.75, lambda x: 0.1 * np.asarray(x) ** 2).grid_points(1.0, 1))

# recovery of a generalized exponential sum with G = sinh
family = GeneralizedExp("sinh", "0.1*x", band=np.pi / 0.4)
lam = [0.3, -0.8 + 1.0j, 1.5 - 2.0j]
f = SparseExpansion(family, lam, [1.0, 0.5j, -2.0])
scheme = catalog.generalized_shift(family, 3, 0.4, 0.2)
r = recover(scheme, scheme.simulate(f))
print("sample points:", [round(float(k.split(":")[1][2:]), 4) for k in scheme.measurement_ids])
print("lambda:", r.parameters)

# cos-exponential sums with the grid arccos(1 - k / M)
fam_cos = GeneralizedExp("cos", "0", band=np.pi)
g = SparseExpansion(fam_cos, [0.5, -1.0 + 2.0j], [1.0, 2.0])
scheme = catalog.cos_exp(fam_cos, 2)
print("cos-exp grid:", scheme.measurement_ids)
print("lambda:", recover(scheme, scheme.simulate(g)).parameters)
