"""Radial momentum as total minus geometric momentum: operator matrices, identities and distributions."""

from .angular import AngularQuadrature, BasisIndex, BasisTruncation, build_quadrature, eval_ylm, inner_product
from .errors import AccuracyError, DomainError, InvalidArgumentError, UnsupportedStateError
from .hydrogen import HydrogenState, expectation_inverse_r, marginal_pz, momentum_amplitude, psi_value
from .operators import (
    OperatorMatrix,
    build_angular_momentum,
    build_direction_cosine,
    build_geometric_momentum,
    build_geometric_momentum_direct,
    commutator,
    rotation_conjugate,
)
from .transforms import (
    DistributionCurve,
    GammaGrid,
    combined_z_distribution,
    expand_state_in_gamma,
    pi_z_density,
    q00_analytic,
    q_coeff,
)

__version__ = "0.1.0"
