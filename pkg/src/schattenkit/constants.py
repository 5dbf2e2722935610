"""Default tolerances, in one place.

Every function that uses one of these takes a keyword override.

=====================  ========  ===============================================
name                   value     used by
=====================  ========  ===============================================
PI_CERT_TOL            1e-9      ||e e* e - e|| bound for partial isometries
PI_CLUSTER_TOL         1e-7      singular values must sit this close to {0, 1}
SUPPORT_REL_TOL        1e-10     support(): singular values <= tol * s1 dropped
UNIT_VECTOR_TOL        1e-12     rank_one(): allowed | ||v|| - 1 |
UNIT_NORM_TOL          1e-8      allowed | ||a||_p - 1 | for sphere inputs
P2_EXCLUSION           1e-6      orthogonality_by_norm refuses |p - 2| below this
NORM_ORTH_TOL          1e-8      | ||a +- b||_p^p - 2 | bound in orthogonality_by_norm
CLUSTER_TOL            1e-8      relative gap below which singular values are "equal"
BISECTION_TOL          1e-12     |dt| for invert_min_value
ISOMETRY_TOL           1e-8      isometry/phase checks on black-box sphere maps
=====================  ========  ===============================================
"""

PI_CERT_TOL = 1e-9
PI_CLUSTER_TOL = 1e-7
SUPPORT_REL_TOL = 1e-10
UNIT_VECTOR_TOL = 1e-12
UNIT_NORM_TOL = 1e-8
P2_EXCLUSION = 1e-6
NORM_ORTH_TOL = 1e-8
CLUSTER_TOL = 1e-8
BISECTION_TOL = 1e-12
ISOMETRY_TOL = 1e-8

DEFAULT_P = 3.0
DEFAULT_GAMMA = 1.0
