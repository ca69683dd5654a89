"""Exact Chow ring, K-theory and divisor positivity computations for matroids."""
__version__ = "0.1.0"

from .chow import ChowElement, ChowRing, DivisorClass, alpha_beta_degree, build_ring, degree_recursive
from .errors import (
    CapacityError,
    ChowForgeError,
    LoopError,
    NotAFlatError,
    ParseError,
    PreconditionError,
    RankError,
)
from .ktheory import (
    ChernData,
    KClass,
    adams,
    alpha_coordinates,
    canonical_class,
    chern_QM,
    chern_TM,
    chern_TM_recursive,
    chern_to_ch,
    chi_hrr,
    chi_zeta,
    chow_polynomial,
    dual,
    exterior_power,
    serre_check,
    tangent_polynomial,
    todd,
    todd_product,
    zeta_line,
)
from .maps import Tensor, deletion_theta, pullback_phi, pushforward_psi
from .matroid import FlatLattice, Matroid
from .parse import parse_divisor, render_divisor
from .positivity import (
    NefCertificate,
    SubmodularLift,
    check_ample,
    check_P1,
    check_P2,
    check_P3,
    is_big_and_nef,
    is_nef,
)
