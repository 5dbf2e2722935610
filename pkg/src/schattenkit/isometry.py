"""Surjective isometries of the unit sphere of C_p and their linear extensions.

Every such map on n x n matrices (p != 2) is the restriction of one of four
canonical forms, stored ``(u, v)`` with unitary ``u`` and ``v``:

==================  =================  =================================
form                map                inverse
==================  =================  =================================
``LINEAR_UXV``      ``u x v``          ``LINEAR_UXV(u*, v*)``
``LINEAR_TRANSPOSE`` ``u x^t v``       ``LINEAR_TRANSPOSE(conj v, conj u)``
``CONJ_ENTRYWISE``  ``u conj(x) v``    ``CONJ_ENTRYWISE(u^t, v^t)``
``CONJ_ADJOINT``    ``u x* v``         ``CONJ_ADJOINT(v, u)``
==================  =================  =================================

The two conjugate-linear forms are (entrywise conjugation) composed with a
linear one: ``conj(u conj(x) v) = conj(u) x conj(v)`` and
``conj(u x* v) = conj(u) x^t conj(v)``. :func:`recover_wigner` uses exactly
this to reduce the conjugate branch to the linear one.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from . import sampling
from .constants import DEFAULT_P, ISOMETRY_TOL
from .errors import FrameDegenerate, InvalidInput, NotAnIsometry
from .matcore import PartialIsometry, as_matrix, matrix_from_dict, matrix_to_dict, svd
from .schatten import as_exponent, schatten_norm

UNITARY_TOL = 1e-10


class Form(str, enum.Enum):
    LINEAR_UXV = "LINEAR_UXV"
    LINEAR_TRANSPOSE = "LINEAR_TRANSPOSE"
    CONJ_ENTRYWISE = "CONJ_ENTRYWISE"
    CONJ_ADJOINT = "CONJ_ADJOINT"

    @property
    def is_linear(self) -> bool:
        return self in (Form.LINEAR_UXV, Form.LINEAR_TRANSPOSE)


class Phase(str, enum.Enum):
    PHASE_LINEAR = "PHASE_LINEAR"
    PHASE_CONJUGATE = "PHASE_CONJUGATE"


def _check_unitary(u, name):
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        raise InvalidInput(f"{name} must be square")
    err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if err > UNITARY_TOL:
        raise InvalidInput(f"{name} is not unitary (||{name}* {name} - I||_max = {err:.2e})")
    return u


@dataclass(frozen=True)
class CanonicalIsometry:
    """One of the four canonical isometries, ``x -> u op(x) v``."""

    form: Form
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "form", Form(self.form))
        u = _check_unitary(self.u, "u")
        v = _check_unitary(self.v, "v")
        if u.shape != v.shape:
            raise InvalidInput("u and v must have the same size")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def dim(self) -> int:
        return self.u.shape[0]

    @property
    def is_linear(self) -> bool:
        return self.form.is_linear

    def __call__(self, x):
        return apply_canonical(self, x)

    def inverse(self) -> "CanonicalIsometry":
        u, v = self.u, self.v
        if self.form is Form.LINEAR_UXV:
            return CanonicalIsometry(self.form, u.conj().T, v.conj().T)
        if self.form is Form.LINEAR_TRANSPOSE:
            return CanonicalIsometry(self.form, v.conj(), u.conj())
        if self.form is Form.CONJ_ENTRYWISE:
            return CanonicalIsometry(self.form, u.T, v.T)
        return CanonicalIsometry(self.form, v, u)

    def to_dict(self) -> dict:
        return {"form": self.form.value, "u": matrix_to_dict(self.u), "v": matrix_to_dict(self.v)}

    @classmethod
    def from_dict(cls, obj) -> "CanonicalIsometry":
        if not isinstance(obj, dict) or set(obj) != {"form", "u", "v"}:
            raise InvalidInput('isometry JSON needs exactly the keys "form", "u", "v"')
        try:
            form = Form(obj["form"])
        except ValueError:
            raise InvalidInput(f"unknown form {obj['form']!r}") from None
        return cls(form, matrix_from_dict(obj["u"]), matrix_from_dict(obj["v"]))

    def dumps(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), allow_nan=False, **kwargs)

    @classmethod
    def loads(cls, text: str) -> "CanonicalIsometry":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"malformed JSON: {exc}") from None
        return cls.from_dict(obj)

    @classmethod
    def identity(cls, n: int) -> "CanonicalIsometry":
        eye = np.eye(n, dtype=np.complex128)
        return cls(Form.LINEAR_UXV, eye, eye)


def apply_canonical(T: CanonicalIsometry, x) -> np.ndarray:
    """Evaluate ``T`` at ``x``; conjugation is entrywise in the standard basis."""
    x = as_matrix(x)
    if x.shape != T.u.shape:
        raise InvalidInput(f"dimension mismatch: x is {x.shape}, T acts on {T.u.shape}")
    if T.form is Form.LINEAR_UXV:
        y = x
    elif T.form is Form.LINEAR_TRANSPOSE:
        y = x.T
    elif T.form is Form.CONJ_ENTRYWISE:
        y = x.conj()
    else:
        y = x.conj().T
    return T.u @ y @ T.v


def random_canonical(rng, n: int, form) -> CanonicalIsometry:
    return CanonicalIsometry(Form(form), sampling.unitary(rng, n), sampling.unitary(rng, n))


def transition_probability(e, v) -> complex:
    """``tr(e* v)`` for minimal partial isometries of the same size."""
    e = e.matrix if isinstance(e, PartialIsometry) else as_matrix(e)
    v = v.matrix if isinstance(v, PartialIsometry) else as_matrix(v)
    if e.shape != v.shape:
        raise InvalidInput("dimension mismatch")
    return complex(np.vdot(e, v))


class SphereMap:
    """A black-box map on the unit sphere of C_p over n x n matrices.

    Nothing about ``fn`` is assumed; :meth:`check_contract` samples the
    isometry property.
    """

    def __init__(self, fn, dim: int, p: float = DEFAULT_P):
        self._fn = fn
        self.dim = int(dim)
        self.p = as_exponent(p)

    @classmethod
    def from_canonical(cls, T: CanonicalIsometry, p: float = DEFAULT_P) -> "SphereMap":
        return cls(lambda x: apply_canonical(T, x), T.dim, p)

    def apply(self, x) -> np.ndarray:
        out = as_matrix(self._fn(as_matrix(x)))
        if out.shape != (self.dim, self.dim):
            raise NotAnIsometry(f"map returned shape {out.shape}")
        return out

    __call__ = apply

    def check_contract(self, trials: int = 8, seed: int = 0, tol: float = ISOMETRY_TOL) -> float:
        """Worst ``| ||D x - D y||_p - ||x - y||_p |`` over sampled sphere pairs.

        Raises :class:`NotAnIsometry` above ``tol``.
        """
        worst = 0.0
        for t in range(trials):
            rng = sampling.rng_for(seed, 1, t)
            x = sampling.sphere_point(rng, self.dim, self.p)
            y = sampling.sphere_point(rng, self.dim, self.p)
            gap = abs(schatten_norm(self.apply(x) - self.apply(y), self.p)
                      - schatten_norm(x - y, self.p))
            worst = max(worst, gap)
        if worst > tol:
            raise NotAnIsometry(f"distance distortion {worst:.3e} exceeds {tol:.1e}")
        return worst


def detect_dichotomy(delta: SphereMap, trials: int = 8, seed: int = 0,
                     tol: float = ISOMETRY_TOL) -> Phase:
    """Decide whether ``D(i v) = i D(v)`` or ``D(i v) = -i D(v)`` on minimal ``v``.

    The isometry contract is spot-checked on the same budget. Inconsistent or
    neither-branch answers raise :class:`NotAnIsometry`.
    """
    if trials < 1:
        raise InvalidInput("trials must be positive")
    delta.check_contract(trials, seed, tol)
    seen = set()
    for t in range(trials):
        rng = sampling.rng_for(seed, 2, t)
        v = sampling.minimal_pi(rng, delta.dim)
        dv = delta.apply(v)
        div = delta.apply(1j * v)
        lin = schatten_norm(div - 1j * dv, delta.p)
        conj = schatten_norm(div + 1j * dv, delta.p)
        if lin <= tol:
            seen.add(Phase.PHASE_LINEAR)
        elif conj <= tol:
            seen.add(Phase.PHASE_CONJUGATE)
        else:
            raise NotAnIsometry("D(i v) is neither i D(v) nor -i D(v)")
    if len(seen) != 1:
        raise NotAnIsometry("phase behaviour differs across samples")
    return seen.pop()


def _basis(n, j, k):
    e = np.zeros((n, n), dtype=np.complex128)
    e[j, k] = 1.0
    return e


def _rank_one_factors(y, tol):
    # y ~ a b* with unit a, b; anything else means D broke minimality
    res = svd(y)
    s = res.sigmas
    if abs(s[0] - 1.0) > tol or (s.size > 1 and s[1] > tol):
        raise NotAnIsometry("a minimal partial isometry was not mapped to a minimal one")
    return res.left[:, 0], res.right[:, 0]


def _check_frame(q, name, tol):
    err = np.max(np.abs(q.conj().T @ q - np.eye(q.shape[1])))
    if err > tol:
        raise FrameDegenerate(f"recovered {name} frame is not orthonormal ({err:.2e})")


def _recover_linear(fn, n, tol):
    """``(form, u, v)`` for a map of the form ``u x v`` or ``u x^t v``."""
    lefts, rights = [], []
    for j in range(n):
        a, b = _rank_one_factors(fn(_basis(n, j, j)), tol)
        lefts.append(a)
        rights.append(b)
    A = np.column_stack(lefts)
    B = np.column_stack(rights)
    _check_frame(A, "left", tol)
    _check_frame(B, "right", tol)
    if n == 1:
        return Form.LINEAR_UXV, A, B.conj().T

    # The fixed non-symmetric probe E_12: u E_12 v pairs frame vectors (1, 2),
    # u E_21 v pairs (2, 1).
    probe = fn(_basis(n, 0, 1))
    plain = abs(np.vdot(A[:, 0], probe @ B[:, 1]))
    swapped = abs(np.vdot(A[:, 1], probe @ B[:, 0]))
    if abs(plain - 1.0) <= tol and swapped <= tol:
        form, g = Form.LINEAR_UXV, fn
    elif abs(swapped - 1.0) <= tol and plain <= tol:
        form, g = Form.LINEAR_TRANSPOSE, (lambda x: fn(x.T))
    else:
        raise NotAnIsometry("E_12 probe matches neither the plain nor the transposed form")

    # Relative phases from the superpositions ((eta_1 + eta_j)/sqrt2) (x) xi_1,
    # cross-checked against eta_1 (x) ((xi_1 + xi_j)/sqrt2).
    r = np.ones(n, dtype=np.complex128)
    for j in range(1, n):
        col = (_basis(n, 0, 0) + _basis(n, j, 0)) / math.sqrt(2.0)
        row = (_basis(n, 0, 0) + _basis(n, 0, j)) / math.sqrt(2.0)
        rj = math.sqrt(2.0) * np.vdot(A[:, j], g(col) @ B[:, 0])
        tj = math.sqrt(2.0) * np.vdot(A[:, 0], g(row) @ B[:, j])
        if abs(abs(rj) - 1.0) > tol or abs(tj - np.conj(rj)) > 10 * tol:
            raise NotAnIsometry("superposition phases are inconsistent")
        r[j] = rj / abs(rj)
    u = A * r
    v = (B * r).conj().T
    return form, u, v


def _fix_gauge(u, v):
    col = u[:, 0]
    k = int(np.argmax(np.abs(col) > 1e-12))
    lam = np.conj(col[k]) / abs(col[k])
    return u * lam, v * np.conj(lam)


def _polar(u):
    # nearest unitary; removes the ~1e-15 drift of the recovered frames
    res = svd(u)
    return res.left @ res.right.conj().T


def recover_wigner(delta: SphereMap, seed: int = 0, trials: int = 8,
                   tol: float = ISOMETRY_TOL) -> CanonicalIsometry:
    """Rebuild the canonical form implementing ``delta`` from its values alone.

    The output is gauge-fixed: the first nonzero entry of ``u``'s first column
    is real and positive.
    """
    n = delta.dim
    phase = detect_dichotomy(delta, trials, seed, tol)
    if phase is Phase.PHASE_LINEAR:
        form, u, v = _recover_linear(delta.apply, n, tol)
    else:
        form, u, v = _recover_linear(lambda x: delta.apply(x).conj(), n, tol)
        form = Form.CONJ_ENTRYWISE if form is Form.LINEAR_UXV else Form.CONJ_ADJOINT
        u, v = u.conj(), v.conj()
    u, v = _fix_gauge(_polar(u), _polar(v))
    return CanonicalIsometry(form, u, v)


def verify_extension(delta: SphereMap, T: CanonicalIsometry, samples: int = 500,
                     seed: int = 0) -> float:
    """``max ||delta(x) - T(x)||_p`` over ``samples`` random sphere points."""
    if T.dim != delta.dim:
        raise InvalidInput("dimension mismatch")
    worst = 0.0
    for k in range(samples):
        x = sampling.sphere_point(sampling.rng_for(seed, 3, k), delta.dim, delta.p)
        worst = max(worst, schatten_norm(delta.apply(x) - apply_canonical(T, x), delta.p))
    return worst


def perturbed_map(T: CanonicalIsometry, p: float, size: float = 1e-3, seed: int = 0) -> SphereMap:
    """``T`` followed by a fixed additive perturbation and renormalization.

    Maps the sphere to itself, but is not the restriction of any isometry.
    """
    rng = sampling.rng_for(seed, 4)
    n = T.dim
    noise = sampling.ginibre(rng, n)
    noise *= size / schatten_norm(noise, p)

    def fn(x):
        y = apply_canonical(T, x)
        y = y + noise * schatten_norm(x, p)
        return y * (schatten_norm(x, p) / schatten_norm(y, p))

    return SphereMap(fn, n, p)
