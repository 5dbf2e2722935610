"""Schatten p-norms and the norm-side characterization of orthogonality.

Norms are always evaluated through singular values, never through matrix
powers. ``p`` is a float in ``[1, inf)`` or ``math.inf`` (the operator norm).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .constants import NORM_ORTH_TOL, P2_EXCLUSION, UNIT_NORM_TOL
from .errors import InvalidInput, UnsupportedExponent
from .matcore import PartialIsometry, as_matrix, certify_partial_isometry, opnorm

INF = math.inf


def as_exponent(p) -> float:
    """Validate a Schatten exponent: a real ``p >= 1`` or infinity."""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise InvalidInput(f"exponent {p!r} is not a number") from None
    if math.isnan(p) or p < 1.0:
        raise InvalidInput(f"exponent must satisfy p >= 1, got {p}")
    return p


def _open_exponent(p) -> float:
    p = as_exponent(p)
    if not (1.0 < p < INF):
        raise InvalidInput(f"exponent must lie in (1, inf), got {p}")
    return p


def schatten_pp(a, p) -> float:
    """``||a||_p^p = sum_n sigma_n(a)^p`` for finite ``p``."""
    p = as_exponent(p)
    if p == INF:
        raise InvalidInput("p-th power of the operator norm is not defined here")
    return _backend.schatten_pp(as_matrix(a), p)


def schatten_norm(a, p) -> float:
    """``(sum_n sigma_n(a)^p)^(1/p)``; the largest singular value for ``p = inf``."""
    p = as_exponent(p)
    a = as_matrix(a)
    if p == INF:
        return float(_backend.singular_values(a)[0])
    return _backend.schatten_pp(a, p) ** (1.0 / p)


def clarkson_mccarthy_gaps(a, b, p):
    """Slack in both Clarkson-McCarthy inequalities.

    With ``S = ||a+b||^p + ||a-b||^p`` and ``N = ||a||^p + ||b||^p`` the bounds
    are ``2^(p-1) N <= S <= 2 N`` for ``p <= 2`` and ``2 N <= S <= 2^(p-1) N``
    for ``p >= 2``. Returns ``(S - lower, upper - S)``; both are non-negative up
    to rounding.
    """
    p = _open_exponent(p)
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise InvalidInput("shape mismatch")
    s = _backend.schatten_pp(a + b, p) + _backend.schatten_pp(a - b, p)
    n = _backend.schatten_pp(a, p) + _backend.schatten_pp(b, p)
    small, large = 2.0 * n, 2.0 ** (p - 1.0) * n
    if p <= 2.0:
        small, large = large, small
    return s - small, large - s


def are_orthogonal(a, b, tol: float = 1e-10) -> bool:
    """Algebraic orthogonality ``a b* = 0 = b* a``, relative to ``max(1, ||a|| ||b||)``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise InvalidInput("shape mismatch")
    scale = max(1.0, opnorm(a) * opnorm(b))
    worst = max(opnorm(a @ b.conj().T), opnorm(b.conj().T @ a))
    return worst <= tol * scale


def orthogonality_by_norm(a, b, p, tol: float = NORM_ORTH_TOL) -> bool:
    """Norm test ``||a + b||_p^p = 2 = ||a - b||_p^p`` for unit-norm ``a`` and ``b``.

    For ``p != 2`` this is equivalent to ``a`` and ``b`` being orthogonal. At
    ``p = 2`` every pair with ``Re tr(a* b) = 0`` passes, so the test is refused.
    """
    p = _open_exponent(p)
    if abs(p - 2.0) <= P2_EXCLUSION:
        raise UnsupportedExponent("the norm characterization of orthogonality fails at p = 2")
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise InvalidInput("shape mismatch")
    for name, x in (("a", a), ("b", b)):
        if abs(schatten_norm(x, p) - 1.0) > UNIT_NORM_TOL:
            raise InvalidInput(f"{name} is not on the unit sphere of C_p")
    plus = _backend.schatten_pp(a + b, p)
    minus = _backend.schatten_pp(a - b, p)
    return abs(plus - 2.0) <= tol and abs(minus - 2.0) <= tol


# -- Peirce decomposition ------------------------------------------------------


def _as_pi(e) -> PartialIsometry:
    if isinstance(e, PartialIsometry):
        return e
    return certify_partial_isometry(e)


@dataclass(frozen=True)
class PeirceDecomposition:
    """``x = p2 + p1 + p0`` relative to the partial isometry ``anchor``."""

    p2: np.ndarray
    p1: np.ndarray
    p0: np.ndarray
    anchor: PartialIsometry

    def recombine(self) -> np.ndarray:
        return self.p2 + self.p1 + self.p0


def peirce(x, e) -> PeirceDecomposition:
    """Split ``x`` into ``ee* x e*e``, the two mixed blocks, and ``(1-ee*) x (1-e*e)``."""
    e = _as_pi(e)
    x = as_matrix(x)
    if x.shape != e.shape:
        raise InvalidInput(f"dimension mismatch: x is {x.shape}, e is {e.shape}")
    m = e.matrix
    left = m @ m.conj().T
    right = m.conj().T @ m
    p2 = left @ x @ right
    p0 = (x - left @ x) - (x - left @ x) @ right
    p1 = x - p2 - p0
    return PeirceDecomposition(p2, p1, p0, e)


def varphi(e, x) -> complex:
    """The scalar ``phi_e(x)`` with ``P_2(e) x = phi_e(x) e``, for minimal ``e``.

    For ``e = eta (x) xi`` this equals ``<x xi | eta>``, evaluated as
    ``tr(e* x e* e)``.
    """
    e = _as_pi(e)
    if e.rank != 1:
        raise InvalidInput("phi_e needs a minimal partial isometry")
    x = as_matrix(x)
    if x.shape != e.shape:
        raise InvalidInput("dimension mismatch")
    m = e.matrix
    return complex(np.trace(m.conj().T @ x @ m.conj().T @ m))
