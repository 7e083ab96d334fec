"""Entropy of linear subshifts over Z^d with GF(2) coefficients, entropy Betti
numbers of periodic complexes, and the supporting exact GF(2) linear algebra."""

from .errors import ArgumentError, EntroBettiError, ResourceError, VerificationError
from .gf2 import BitMatrix, kernel_basis, projection_dim, rank
from .lattice import (
    FiniteQuotient,
    LatticeWindow,
    ball,
    boundary,
    box,
    finite_quotient,
    folner_box,
    verify_quasi_tiling,
)
from .laurent import LaurentMatrix, LaurentPoly, adjoint, fold, stack, support_radius, window_matrix
from .subshift import (
    EntropyEstimate,
    SubshiftPresentation,
    direct_sum,
    entropy,
    enumerate_oracle,
    fixed_point_log_count,
    image_dim,
    ledrappier,
    local_kernel_dim,
    quotient_entropy,
    restriction_dim,
    separated_count_oracle,
)
from .duality import (
    ModulePresentation,
    dual_subshift,
    grothendieck_additivity_check,
    module_rank,
    perp,
    perp_entropy_check,
)
from .betti import (
    PeriodicComplex,
    betti,
    cover_cohomology,
    euler_check,
    example_complex,
    folner_cohomology,
    validate_complex,
)

__version__ = "0.1.0"
