"""Numerical geometry of Schatten p-classes on small matrices.

Schatten norms, orthogonality tests, distance profiles over minimal partial
isometries, reconstruction of a matrix from its profile, and recovery of the
canonical form behind a unit-sphere isometry.
"""

from . import _backend
from ._backend import available as available_backends, set_backend
from .errors import (
    BudgetExceeded,
    DegenerateInput,
    FrameDegenerate,
    InconsistentOracle,
    InvalidInput,
    NotAnIsometry,
    SchattenError,
    UnsupportedExponent,
)
from .geometry import (
    ProfileSummary,
    dilate,
    invert_min_value,
    lemma_h,
    lemma_k,
    min_value_formula,
    minimizer_membership,
    profile_summary,
    profile_value,
    sampled_minimum,
    wielandt,
)
from .isometry import (
    CanonicalIsometry,
    Form,
    Phase,
    SphereMap,
    apply_canonical,
    detect_dichotomy,
    recover_wigner,
    transition_probability,
    verify_extension,
)
from .matcore import (
    PartialIsometry,
    SVDResult,
    adjoint,
    certify_partial_isometry,
    is_minimal_pi,
    rank_one,
    singular_values,
    support,
    svd,
)
from .reconstruct import ProfileOracle, profile_distance, reconstruct
from .schatten import (
    PeirceDecomposition,
    are_orthogonal,
    clarkson_mccarthy_gaps,
    orthogonality_by_norm,
    peirce,
    schatten_norm,
    schatten_pp,
    varphi,
)

__version__ = "0.1.0"


def backend() -> str:
    """Name of the active kernel backend."""
    return _backend.NAME
