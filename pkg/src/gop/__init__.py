"""Recovery of sparse eigenfunction expansions with the generalized operator based Prony method."""

from .catalog import SCHEMES
from .errors import (AdmissibilityFailure, BoundaryViolation, BranchViolation, ConfigError,
                     DegenerateNormalization, DomainEscape, DomainViolation, GOPError,
                     MissingMeasurement, QuadratureFailure, RankDeficient, RegionViolation,
                     SchemeError, ZeroPolynomial)
from .families import (ChebyshevLike, Cosine, EigenFamily, Exponential, GeneralizedExp,
                       Legendre, ShiftedGaussian, SparseExpansion, eigenvalue_of, generator,
                       legendre_eval)
from .kernels import KernelExpr, adjoint_apply, phi_P
from .numkit import ComplexPoly, lstsq, null_vector, poly_roots, singular_values
from .operators import (Dilation, GeneralizedShift, HalfSumShift, PlainPower, Shift,
                        SpectralMap, SymmetricShift, apply_spectral_map, grid_points,
                        invert_spectral_map)
from .recovery import RecoveryResult, estimate_order, recover, solve_coefficients
from .sampling import (ComposedWithAction, DeltaDerivative, MomentKernel, PointEval,
                       WeightedPoints, apply_functional, assemble_matrix, build_scheme)

__version__ = "0.1.0"
