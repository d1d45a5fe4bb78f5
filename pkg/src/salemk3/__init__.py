"""Exact lattice computations deciding when powers of a Salem number arise
as dynamical degrees of automorphisms of 2-tori, K3 and Enriques surfaces.

The library is organized around six pieces: integer polynomials with Salem
certification (`polynomials`), lattices with discriminant-form calculus and
gluing (`lattices`), lattice isometries with twists and integral powering
(`isometries`), chamber-preservation analysis (`positivity`), realizability
decisions and certificates (`realize`), and a command-line front end (`cli`).
"""

from .polynomials import (
    IntPolynomial,
    NotSalemError,
    RootIsolation,
    SalemCertificate,
    discriminant,
    is_cyclotomic_product,
    is_salem,
    isolate_real_roots,
    power_min_poly,
    resultant,
    square_class_test,
    trace_polynomial,
)
from .lattices import (
    FiniteQuadraticForm,
    GlueMap,
    Lattice,
    LatticeError,
    discriminant_form,
    enumerate_vectors_of_norm,
    glue,
    named_lattice,
    orthogonal_complement,
    overlattice_from_isotropic,
    p_primary_part,
)
from .numbertheory import hasse_invariant, hilbert, legendre
from .isometries import (
    Isometry,
    IsometryError,
    TwistElement,
    invariant_symmetric_forms,
    is_isometry,
    kernel_sublattice,
    power_to_integral,
    twist,
    twist_split_certificate,
)
from .positivity import (
    GeodesicPlane,
    ObstructionReport,
    PositivityError,
    cyclic_roots,
    determinant_bound_test,
    geodesic_plane,
    is_positive,
    obstructing_root_search,
)
from .realize import (
    RealizationCertificate,
    RealizeError,
    build_k3_certificate,
    certificate_from_json,
    certificate_to_json,
    find_norm_element,
    find_split_prime,
    mod2_trivial,
    power_certificate,
    rational_isometry_criterion,
    seed_for,
    stable_realizable,
    verify_certificate,
)

__all__ = [
    "IntPolynomial",
    "NotSalemError",
    "RootIsolation",
    "SalemCertificate",
    "discriminant",
    "is_cyclotomic_product",
    "is_salem",
    "isolate_real_roots",
    "power_min_poly",
    "resultant",
    "square_class_test",
    "trace_polynomial",
    "FiniteQuadraticForm",
    "GlueMap",
    "Lattice",
    "LatticeError",
    "discriminant_form",
    "enumerate_vectors_of_norm",
    "glue",
    "named_lattice",
    "orthogonal_complement",
    "overlattice_from_isotropic",
    "p_primary_part",
    "hasse_invariant",
    "hilbert",
    "legendre",
    "Isometry",
    "IsometryError",
    "TwistElement",
    "invariant_symmetric_forms",
    "is_isometry",
    "kernel_sublattice",
    "power_to_integral",
    "twist",
    "twist_split_certificate",
    "GeodesicPlane",
    "ObstructionReport",
    "PositivityError",
    "cyclic_roots",
    "determinant_bound_test",
    "geodesic_plane",
    "is_positive",
    "obstructing_root_search",
    "RealizationCertificate",
    "RealizeError",
    "build_k3_certificate",
    "certificate_from_json",
    "certificate_to_json",
    "find_norm_element",
    "find_split_prime",
    "mod2_trivial",
    "power_certificate",
    "rational_isometry_criterion",
    "seed_for",
    "stable_realizable",
    "verify_certificate",
]

__version__ = "0.1.0"
