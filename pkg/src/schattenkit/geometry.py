"""Distance profiles over minimal partial isometries.

For a unit-norm ``a`` in ``C_p`` and ``gamma >= 1`` the profile is
``f_a(e) = ||a - gamma e||_p^p`` on rank-one partial isometries ``e``. Its
minimum has the closed form ``(gamma - s1)^p + 1 - s1^p`` (``s1`` the top
singular value) and is attained exactly at the ``v <= e_m``, where ``e_m`` sums
the spectral terms of the top singular-value cluster. Because the closed form
is strictly decreasing in ``s1`` it can be inverted to read ``s1`` off the
minimum.

The module also carries the commutative model of the same statement on
``l_p^n`` (:func:`lemma_k`, :func:`lemma_h`) and the Hermitian dilation used
to transfer it (:func:`wielandt`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend, sampling, search
from .constants import BISECTION_TOL, CLUSTER_TOL, P2_EXCLUSION, UNIT_NORM_TOL
from .errors import DegenerateInput, InvalidInput
from .matcore import (
    PartialIsometry,
    as_matrix,
    certify_partial_isometry,
    matrix_from_dict,
    matrix_to_dict,
    opnorm,
    svd,
)


def _check_p(p):
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise InvalidInput(f"exponent {p!r} is not a number") from None
    if not (1.0 < p < math.inf):
        raise InvalidInput(f"p must lie in (1, inf), got {p}")
    if abs(p - 2.0) <= P2_EXCLUSION:
        raise InvalidInput("p = 2 is excluded: every vector of a Hilbert space is a minimizer")
    return p


def _check_gamma(gamma):
    gamma = float(gamma)
    if not gamma >= 1.0 or not math.isfinite(gamma):
        raise InvalidInput(f"gamma must be a finite real >= 1, got {gamma}")
    return gamma


def _check_unit(a, p):
    a = as_matrix(a)
    nrm = _backend.schatten_pp(a, p) ** (1.0 / p)
    if abs(nrm - 1.0) > UNIT_NORM_TOL:
        raise InvalidInput(f"||a||_p = {nrm!r} is not 1")
    return a


def _check_minimal(e):
    if isinstance(e, PartialIsometry):
        pi = e
    else:
        try:
            pi = certify_partial_isometry(e)
        except InvalidInput:
            raise InvalidInput("e is not a partial isometry") from None
    if pi.rank != 1:
        raise InvalidInput("e is not a minimal (rank-one) partial isometry")
    return pi


def min_value_formula(sigma1, gamma, p):
    """``(gamma - t)^p + 1 - t^p`` at ``t = sigma1``."""
    return (gamma - sigma1) ** p + 1.0 - sigma1 ** p


# -- the profile itself ----------------------------------------------------------


def profile_value(a, e, gamma, p) -> float:
    """``||a - gamma e||_p^p`` for unit-norm ``a`` and minimal ``e``."""
    p = _check_p(p)
    gamma = _check_gamma(gamma)
    a = _check_unit(a, p)
    e = _check_minimal(e)
    if e.shape != a.shape:
        raise InvalidInput("dimension mismatch")
    return _backend.schatten_pp(np.ascontiguousarray(a - gamma * e.matrix), p)


def profile_values(a, etas, xis, gamma, p) -> np.ndarray:
    """Vectorized profile at ``eta_k (x) xi_k`` for the rows of ``etas`` and ``xis``.

    No sphere or unit-vector checks; this is the fast path for searches.
    """
    return _backend.profile_pp_batch(
        as_matrix(a),
        float(gamma),
        np.ascontiguousarray(etas, dtype=np.complex128),
        np.ascontiguousarray(xis, dtype=np.complex128),
        float(p),
    )


@dataclass(frozen=True)
class ProfileSummary:
    """Closed-form description of the profile minimum."""

    min_value: float
    sigma1: float
    e_m: PartialIsometry
    cluster_size: int
    gamma: float = 1.0
    p: float = 3.0

    def to_dict(self) -> dict:
        return {
            "min_value": float(self.min_value),
            "sigma1": float(self.sigma1),
            "cluster_size": int(self.cluster_size),
            "e_m": matrix_to_dict(self.e_m.matrix),
        }

    @classmethod
    def from_dict(cls, obj, gamma=1.0, p=3.0) -> "ProfileSummary":
        try:
            e_m = matrix_from_dict(obj["e_m"])
            return cls(float(obj["min_value"]), float(obj["sigma1"]),
                       PartialIsometry(e_m, int(obj["cluster_size"])),
                       int(obj["cluster_size"]), gamma, p)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad profile summary: {exc}") from None


def profile_summary(a, gamma, p, cluster_tol: float = CLUSTER_TOL) -> ProfileSummary:
    """Read the minimum of ``f_a`` and its minimizer locus off the SVD of ``a``.

    Singular values with ``sigma_j >= sigma_1 (1 - cluster_tol)`` count as the
    top cluster.
    """
    p = _check_p(p)
    gamma = _check_gamma(gamma)
    a = _check_unit(a, p)
    res = svd(a)
    s1 = float(res.sigmas[0])
    if s1 <= 0.0:  # pragma: no cover - excluded by the unit-norm check
        raise DegenerateInput("zero matrix")
    top = res.sigmas >= s1 * (1.0 - cluster_tol)
    j0 = int(np.count_nonzero(top))
    e_m = res.left[:, top] @ res.right[:, top].conj().T
    return ProfileSummary(
        min_value=min_value_formula(s1, gamma, p),
        sigma1=s1,
        e_m=PartialIsometry(np.ascontiguousarray(e_m), j0),
        cluster_size=j0,
        gamma=gamma,
        p=p,
    )


def minimizer_membership(v, summary: ProfileSummary, tol: float = 1e-8) -> bool:
    """Whether the minimal ``v`` satisfies ``v <= e_m`` (i.e. minimizes the profile).

    Tested as ``e_m v* v = v`` and ``v v* e_m = v`` up to ``tol`` in operator norm.
    """
    v = _check_minimal(v).matrix
    em = summary.e_m.matrix
    if v.shape != em.shape:
        raise InvalidInput("dimension mismatch")
    r1 = opnorm(em @ v.conj().T @ v - v)
    r2 = opnorm(v @ v.conj().T @ em - v)
    return max(r1, r2) <= tol


def minimizer_from_coefficients(summary_or_em, c) -> np.ndarray:
    """The minimal ``v = (sum c_j eta_j) (x) (sum c_j xi_j)`` below a given ``e_m``.

    ``c`` is a unit vector with one entry per spectral term of ``e_m``.
    """
    em = summary_or_em.e_m.matrix if isinstance(summary_or_em, ProfileSummary) else summary_or_em
    res = svd(em)
    k = int(np.count_nonzero(res.sigmas > 0.5))
    c = np.asarray(c, dtype=np.complex128)
    if c.size != k:
        raise InvalidInput(f"need {k} coefficients, got {c.size}")
    c = c / np.linalg.norm(c)
    eta = res.left[:, :k] @ c
    xi = res.right[:, :k] @ c
    return np.outer(eta, xi.conj())


def sampled_minimum(a, gamma, p, *, samples=512, starts=3, seed=0, max_sweeps=200,
                    improve_tol=1e-13):
    """Search-based minimum of ``f_a``: random sampling plus coordinate descent.

    Minimal isometries are drawn with ``eta``, ``xi`` normalized complex
    Gaussians. This is an independent numerical upper estimate of the closed
    form, never a replacement for it. Near-ties ``s1 ~ s2`` make the valley
    flat, so the sweep cap is generous; well-separated spectra stop far
    earlier on the improvement test. Returns ``(value, eta, xi)``.
    """
    p = _check_p(p)
    gamma = _check_gamma(gamma)
    a = as_matrix(a)
    rng = sampling.rng_for(seed, 0)

    def f(points):
        return _backend.profile_pp_packed(a, gamma, points, p)

    return search.multistart(f, a.shape[0], a.shape[1], rng, samples=samples,
                             starts=starts, max_sweeps=max_sweeps, improve_tol=improve_tol)


# -- Hermitian dilation ----------------------------------------------------------


def wielandt(a, p) -> np.ndarray:
    """``2^(-1/p) [[0, a], [a*, 0]]``, Hermitian with eigenvalues ``+-2^(-1/p) sigma_j(a)``."""
    p = float(p)
    if not p >= 1.0:
        raise InvalidInput("p must be >= 1")
    a = as_matrix(a)
    n, m = a.shape
    if n != m:
        raise InvalidInput("the dilation is built for square matrices")
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    out[:n, n:] = a
    out[n:, :n] = a.conj().T
    return out * 2.0 ** (-1.0 / p)


# -- commutative model on l_p --------------------------------------------------


def lp_pp(x, p) -> float:
    """``||x||_p^p`` for a real or complex sequence."""
    return float(np.sum(np.abs(np.asarray(x)) ** p))


def _check_lp(lam, p, tol=1e-10):
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if lam.size == 0 or not np.all(np.isfinite(lam)):
        raise InvalidInput("vector must be finite and non-empty")
    if np.any(lam < 0) or np.any(np.diff(lam) > 0):
        raise InvalidInput("entries must be non-negative and non-increasing")
    if abs(lp_pp(lam, p) - 1.0) > tol:
        raise InvalidInput("vector is not normalized in l_p")
    return lam


def dilate(lam, p) -> np.ndarray:
    """``2^(-1/p) (l_1, ..., l_n, -l_n, ..., -l_1)``."""
    lam = np.asarray(lam, dtype=float)
    return 2.0 ** (-1.0 / p) * np.concatenate([lam, -lam[::-1]])


def lemma_k(lam, gamma, p, cluster_tol: float = CLUSTER_TOL):
    """Minimum of ``k(z) = ||lam - gamma z||_p^p`` over the signed basis ``{+-e_j}``.

    Returns ``(min_value, argmin)`` where ``argmin`` is a frozenset of
    ``(index, sign)`` pairs (0-based indices). The minimizers are ``+e_i`` for
    every ``i`` in the top cluster of ``lam``.
    """
    p = _check_p(p)
    gamma = _check_gamma(gamma)
    lam = _check_lp(lam, p)
    top = lam[0]
    argmin = frozenset((i, 1) for i in range(lam.size) if lam[i] >= top * (1.0 - cluster_tol))
    return min_value_formula(top, gamma, p), argmin


def lemma_h(lam, gamma, p, cluster_tol: float = CLUSTER_TOL):
    """Minimum of ``h(s_ij) = ||lam_hat - gamma s_ij||_p^p`` with ``s_ij = 2^(-1/p)(e_i - e_j)``.

    ``lam_hat`` is :func:`dilate` of ``lam``, coordinates in the order
    ``(l_1, ..., l_n, -l_n, ..., -l_1)``. Slot ``j >= n`` carries ``-l_(2n-1-j)``
    (0-based), so the minimizing ordered pairs are ``(i, j)`` with ``i < n <= j``
    and both ``l_i`` and ``l_(2n-1-j)`` in the top cluster. Returns
    ``(min_value, argmin)`` with ``argmin`` a frozenset of 0-based pairs.
    """
    p = _check_p(p)
    gamma = _check_gamma(gamma)
    lam = _check_lp(lam, p)
    n = lam.size
    cut = lam[0] * (1.0 - cluster_tol)
    top = [i for i in range(n) if lam[i] >= cut]
    argmin = frozenset((i, 2 * n - 1 - k) for i in top for k in top)
    return min_value_formula(lam[0], gamma, p), argmin


def k_value(lam, index, sign, gamma, p) -> float:
    z = np.zeros(len(lam))
    z[index] = sign
    return lp_pp(np.asarray(lam, dtype=float) - gamma * z, p)


def h_value(lam, i, j, gamma, p) -> float:
    hat = dilate(lam, p)
    s = np.zeros(hat.size)
    s[i] = 2.0 ** (-1.0 / p)
    s[j] = -(2.0 ** (-1.0 / p))
    return lp_pp(hat - gamma * s, p)


# -- recovering sigma_1 from the minimum ---------------------------------------


def invert_min_value(m, gamma, p, tol: float = BISECTION_TOL) -> float:
    """The unique ``t`` in ``(0, 1]`` with ``(gamma - t)^p + 1 - t^p = m``.

    The left side is strictly decreasing in ``t``, from ``gamma^p + 1`` near 0
    down to ``(gamma - 1)^p`` at 1; bisection runs until the bracket is
    narrower than ``tol``.
    """
    gamma = _check_gamma(gamma)
    p = float(p)
    if not (1.0 < p < math.inf):
        raise InvalidInput("p must lie in (1, inf)")
    m = float(m)
    lo_val = min_value_formula(1.0, gamma, p)
    hi_val = gamma ** p + 1.0
    slack = 1e-12 * max(1.0, abs(m))
    if not math.isfinite(m) or m < lo_val - slack or m >= hi_val:
        raise InvalidInput(f"value {m!r} is not attained on (0, 1]")
    if m <= lo_val:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if min_value_formula(mid, gamma, p) > m:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
