"""Exact mixed volumes of rational polytopes and mixed multiplicities of
monomial ideals and their graded families."""

from mixedvol.errors import InputError, NotMPrimaryError, StabilizationError
from mixedvol.graded_families import (
    GradedFamily,
    HomogenizedBody,
    approximation_polytope,
    body_family,
    family_product_ideal,
    homogenize,
    maximal_power_family,
    power_family,
    truncated_family,
)
from mixedvol.kernels import BACKEND as KERNEL_BACKEND
from mixedvol.lattice_geometry import (
    RationalPolytope,
    VolumePolynomial,
    contains_point,
    convex_hull,
    minkowski_sum,
    mixed_volume,
    volume,
    volume_polynomial,
)
from mixedvol.monomial_algebra import MonomialIdeal, contains_monomial, max_gen_degree, power, product, quotient_dim, smallest_mpower_inside
from mixedvol.multiplicities import (
    MixedMultiplicityTable,
    hilbert_T_dim,
    m_primary_family_multiplicities,
    mixed_multiplicities_family,
    mixed_multiplicities_ideals,
    scaling_identity_check,
)
from mixedvol.okounkov import (
    GammaSpec,
    Variant,
    F_estimate,
    compute_c,
    estimate_okounkov_volume,
    level_count,
    levelwise_decomposition_check,
)
from mixedvol.verification import verify_theorem_c

__version__ = "0.1.0"
