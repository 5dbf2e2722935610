"""Dense complex matrix core.

Matrices are plain ``numpy`` ``complex128`` 2-D arrays; :func:`as_matrix`
validates and normalizes anything array-like. This module adds the spectral
resolution (:func:`svd`), partial-isometry certification and the shared
matrix JSON format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _backend
from .constants import PI_CERT_TOL, PI_CLUSTER_TOL, SUPPORT_REL_TOL, UNIT_VECTOR_TOL
from .errors import DegenerateInput, InvalidInput


def as_matrix(x) -> np.ndarray:
    """Return ``x`` as a C-contiguous complex128 matrix, rejecting non-finite entries."""
    try:
        arr = np.ascontiguousarray(x, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"not a complex matrix: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInput(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("matrix has non-finite entries")
    return arr


def adjoint(a) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(a).conj().T)


def opnorm(a) -> float:
    """Operator (spectral) norm, i.e. the largest singular value."""
    return float(_backend.singular_values(as_matrix(a))[0])


# -- spectral resolution -------------------------------------------------------


@dataclass(frozen=True)
class SVDResult:
    """Spectral resolution ``a = sum_n sigmas[n] * outer(left[:, n], conj(right[:, n]))``.

    ``left`` and ``right`` hold the orthonormal systems as columns.
    """

    sigmas: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def left_vectors(self):
        return [self.left[:, k] for k in range(self.left.shape[1])]

    @property
    def right_vectors(self):
        return [self.right[:, k] for k in range(self.right.shape[1])]

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.sigmas) @ self.right.conj().T

    def term(self, k: int) -> np.ndarray:
        """The rank-one piece ``left_k (x) right_k`` (without its singular value)."""
        return np.outer(self.left[:, k], self.right[:, k].conj())


def _complete_columns(q: np.ndarray, keep: np.ndarray) -> np.ndarray:
    # Replace the columns not in ``keep`` by an orthonormal completion.
    rows, cols = q.shape
    basis = [q[:, k] for k in range(cols) if keep[k]]
    fill = []
    for k in range(rows):
        if len(basis) + len(fill) == cols:
            break
        cand = np.zeros(rows, dtype=np.complex128)
        cand[k] = 1.0
        for _ in range(2):
            for b in basis + fill:
                cand = cand - np.vdot(b, cand) * b
        nrm = np.linalg.norm(cand)
        if nrm > 1e-6:
            fill.append(cand / nrm)
    out = q.copy()
    it = iter(fill)
    for k in range(cols):
        if not keep[k]:
            out[:, k] = next(it)
    return out


def svd(a) -> SVDResult:
    """Thin singular value decomposition by one-sided Jacobi rotations.

    Singular values come out sorted non-increasing. Columns whose singular
    value is negligible (below ``1e-13 * sigma_1``, or all of them for the zero
    matrix) get an arbitrary orthonormal completion, so both systems are always
    orthonormal. Within a cluster of equal singular values the basis is
    whatever the rotations produced.
    """
    a = as_matrix(a)
    w, v, flipped, _ = _backend.jacobi_svd(a)
    sig = np.sqrt(np.einsum("ij,ij->j", w.real, w.real) + np.einsum("ij,ij->j", w.imag, w.imag))
    order = np.argsort(-sig, kind="stable")
    sig = sig[order]
    w = w[:, order]
    v = v[:, order]
    keep = sig > 1e-13 * sig[0] if sig[0] > 0 else np.zeros(sig.shape, dtype=bool)
    q = np.zeros_like(w)
    q[:, keep] = w[:, keep] / sig[keep]
    q = _complete_columns(q, keep)
    if flipped:
        left, right = v, q
    else:
        left, right = q, v
    return SVDResult(sig, np.ascontiguousarray(left), np.ascontiguousarray(right))


def singular_values(a) -> np.ndarray:
    return _backend.singular_values(as_matrix(a))


# -- partial isometries --------------------------------------------------------


@dataclass(frozen=True)
class PartialIsometry:
    """A matrix certified to satisfy ``e e* e = e`` within tolerance."""

    matrix: np.ndarray
    rank: int

    @property
    def is_minimal(self) -> bool:
        return self.rank == 1

    @property
    def shape(self):
        return self.matrix.shape


def certify_partial_isometry(e, tol: float = PI_CERT_TOL,
                             cluster_tol: float = PI_CLUSTER_TOL) -> PartialIsometry:
    """Certify ``e`` as a partial isometry or raise :class:`InvalidInput`."""
    e = as_matrix(e)
    resid = opnorm(e @ e.conj().T @ e - e)
    if resid > tol:
        raise InvalidInput(f"not a partial isometry: ||e e* e - e|| = {resid:.3e}")
    sig = singular_values(e)
    near_one = np.abs(sig - 1.0) <= cluster_tol
    near_zero = sig <= cluster_tol
    if not np.all(near_one | near_zero):
        raise InvalidInput("singular values are not clustered at {0, 1}")
    rank = int(np.count_nonzero(near_one))
    if rank == 0:
        raise InvalidInput("the zero matrix is not a certified partial isometry")
    return PartialIsometry(e, rank)


def is_minimal_pi(e, tol: float = PI_CERT_TOL) -> bool:
    try:
        return certify_partial_isometry(e, tol).rank == 1
    except InvalidInput:
        return False


def _unit_vector(v, name):
    try:
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
    except (TypeError, ValueError):
        raise InvalidInput(f"{name} is not a complex vector") from None
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise InvalidInput(f"{name} must be a finite non-empty vector")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_VECTOR_TOL:
        raise InvalidInput(f"{name} is not a unit vector")
    return v


def rank_one(eta, xi) -> PartialIsometry:
    """The minimal partial isometry ``eta (x) xi``: ``zeta -> <zeta|xi> eta``.

    As a matrix its entries are ``eta_i * conj(xi_j)``.
    """
    eta = _unit_vector(eta, "eta")
    xi = _unit_vector(xi, "xi")
    e = certify_partial_isometry(np.outer(eta, xi.conj()))
    if e.rank != 1:  # pragma: no cover - unit vectors always give rank one
        raise InvalidInput("rank-one construction failed certification")
    return e


def support(a, zero_tol: float | None = None) -> PartialIsometry:
    """Support partial isometry ``s(a) = sum over sigma_n > zero_tol of eta_n (x) xi_n``.

    ``zero_tol`` defaults to ``1e-10 * sigma_1``.
    """
    res = svd(a)
    if res.sigmas[0] <= 0.0 or (zero_tol is not None and res.sigmas[0] <= zero_tol):
        raise DegenerateInput("support of a (numerically) zero matrix")
    if zero_tol is None:
        zero_tol = SUPPORT_REL_TOL * res.sigmas[0]
    keep = res.sigmas > zero_tol
    s = res.left[:, keep] @ res.right[:, keep].conj().T
    return PartialIsometry(np.ascontiguousarray(s), int(np.count_nonzero(keep)))


# -- JSON ----------------------------------------------------------------------


def matrix_to_dict(a) -> dict:
    a = as_matrix(a)
    flat = a.reshape(-1)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_dict(obj) -> np.ndarray:
    try:
        rows = obj["rows"]
        cols = obj["cols"]
        data = obj["data"]
    except (KeyError, TypeError):
        raise InvalidInput("matrix JSON needs 'rows', 'cols' and 'data'") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise InvalidInput("'rows' and 'cols' must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise InvalidInput(f"'data' must hold rows*cols = {rows * cols} entries")
    out = np.empty(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(data):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise InvalidInput(f"entry {k} is not a [re, im] pair")
        re_, im_ = pair
        if isinstance(re_, bool) or isinstance(im_, bool) or not all(
            isinstance(x, (int, float)) for x in (re_, im_)
        ):
            raise InvalidInput(f"entry {k} is not numeric")
        out[k] = complex(float(re_), float(im_))
    return as_matrix(out.reshape(rows, cols))


def dumps_matrix(a, **kwargs) -> str:
    try:
        return json.dumps(matrix_to_dict(a), allow_nan=False, **kwargs)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None


def loads_matrix(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed JSON: {exc}") from None
    return matrix_from_dict(obj)
