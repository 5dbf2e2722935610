"""Recover a unit-norm matrix from its distance profile.

An oracle answers ``e -> ||a - gamma e||_p^p`` for minimal partial isometries
``e``; :func:`reconstruct` rebuilds ``a`` from such answers alone. It peels
``a`` one spectral term at a time:

1. minimize the (restricted, renormalized) profile over minimal ``e`` by
   multistart coordinate descent;
2. read the top singular value of the current remainder off the minimum via
   :func:`geometry.invert_min_value`;
3. the minimizer ``eta (x) xi`` is the top spectral term (any ``v <= e_m`` when
   the top value is repeated);
4. record ``sigma * eta (x) xi`` as the next block;
5. restrict to minimal isometries orthogonal to everything found so far. For
   such ``e`` the blocks split off in norm,
   ``||a - gamma e||^p = sum sigma_i^p + ||r - gamma e||^p``, so dividing the
   remainder by ``c = ||r||_p = (1 - sum sigma_i^p)^(1/p)`` gives a unit-norm
   problem of lower dimension with ``gamma / c`` in place of ``gamma``;
6. when the remainder is exhausted, sum the blocks.

A short Gauss-Newton refinement against a few fresh oracle answers then
removes the ``sqrt(eps)`` error that any minimizer location carries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend, sampling, search
from .constants import CLUSTER_TOL
from .errors import BudgetExceeded, InconsistentOracle, InvalidInput
from .geometry import _check_gamma, _check_p, _check_unit, invert_min_value, min_value_formula
from .matcore import PartialIsometry, as_matrix, matrix_to_dict, svd

FLOOR_SLACK = 1e-6
EXHAUSTED = 1e-13


class ProfileOracle:
    """Deterministic access to ``e -> ||a - gamma e||_p^p`` on minimal ``e``.

    ``query_fn`` receives unit vectors ``(eta, xi)`` and returns the profile at
    ``eta (x) xi``. Every answer is counted; with ``trace`` set to a writable
    text stream each ``(query, value)`` pair is written as one JSON line.
    """

    def __init__(self, query_fn, gamma, p, dim, trace=None):
        self._fn = query_fn
        self.gamma = _check_gamma(gamma)
        self.p = _check_p(p)
        self.dim = int(dim)
        self.trace = trace
        self.count = 0

    @classmethod
    def from_matrix(cls, a, gamma, p, trace=None):
        """Oracle backed by a known (hidden) unit-norm square matrix."""
        p = _check_p(p)
        gamma = _check_gamma(gamma)
        a = _check_unit(a, p)
        if a.shape[0] != a.shape[1]:
            raise InvalidInput("the oracle is defined for square matrices")

        def fn(eta, xi):
            return _backend.profile_pp(a, gamma, eta, xi, p)

        return cls(fn, gamma, p, a.shape[0], trace=trace)

    def query_pair(self, eta, xi) -> float:
        eta = np.ascontiguousarray(eta, dtype=np.complex128)
        xi = np.ascontiguousarray(xi, dtype=np.complex128)
        value = float(self._fn(eta, xi))
        self.count += 1
        if self.trace is not None:
            record = {"query": matrix_to_dict(np.outer(eta, xi.conj())), "value": value}
            self.trace.write(json.dumps(record) + "\n")
        return value

    def query(self, e) -> float:
        """Profile at a minimal partial isometry given as a matrix or PartialIsometry."""
        m = e.matrix if isinstance(e, PartialIsometry) else as_matrix(e)
        res = svd(m)
        if abs(res.sigmas[0] - 1.0) > 1e-9 or (res.sigmas.size > 1 and res.sigmas[1] > 1e-9):
            raise InvalidInput("oracle queries must be minimal partial isometries")
        return self.query_pair(res.left[:, 0], res.right[:, 0])


class _OutOfBudget(Exception):
    pass


class _Counter:
    # Enforces the budget before any answer is requested.
    def __init__(self, oracle, budget):
        self.oracle = oracle
        self.budget = budget
        self.used = 0

    def __call__(self, eta, xi):
        if self.used >= self.budget:
            raise _OutOfBudget
        self.used += 1
        return self.oracle.query_pair(eta, xi)


@dataclass
class Block:
    """One recovered spectral block ``sigma * e`` (``e`` of rank ``rank``)."""

    sigma: float
    matrix: np.ndarray
    rank: int


@dataclass
class ReconstructionResult:
    matrix: np.ndarray
    blocks: list = field(default_factory=list)
    terms: list = field(default_factory=list)
    queries: int = 0
    residual: float = math.nan
    levels: list = field(default_factory=list)


def _complement(q, unit):
    # orthonormal basis of the part of span(q) orthogonal to q @ unit
    k = q.shape[1]
    basis, _ = np.linalg.qr(np.column_stack([unit, np.eye(k, dtype=np.complex128)]))
    return q @ basis[:, 1:k]


def _terms_to_blocks(terms, cluster_tol):
    blocks = []
    for sigma, eta, xi in terms:
        piece = np.outer(eta, xi.conj())
        if blocks and abs(blocks[-1].sigma - sigma) <= cluster_tol * max(sigma, 1e-300):
            last = blocks[-1]
            last.matrix = last.matrix + piece
            last.rank += 1
        else:
            blocks.append(Block(float(sigma), piece, 1))
    return blocks


def _assemble(terms, n):
    out = np.zeros((n, n), dtype=np.complex128)
    for sigma, eta, xi in terms:
        out += sigma * np.outer(eta, xi.conj())
    return out


def _gradients(b, gamma, etas, xis, p):
    # value and Wirtinger-free real gradient of ||b - gamma e_k||_p^p per probe
    vals = np.empty(len(etas))
    grads = np.empty((len(etas), 2 * b.size))
    for k, (eta, xi) in enumerate(zip(etas, xis)):
        res = svd(b - gamma * np.outer(eta, xi.conj()))
        s = res.sigmas
        vals[k] = float(np.sum(s ** p))
        g = p * (res.left * s ** (p - 1.0)) @ res.right.conj().T
        grads[k, : b.size] = g.real.reshape(-1)
        grads[k, b.size:] = g.imag.reshape(-1)
    return vals, grads


def _polish(b, gamma, p, etas, xis, target, iterations=30):
    """Gauss-Newton on ``F_k(b) = ||b - gamma e_k||_p^p = target_k``; best iterate wins."""
    n = b.shape[0]
    vals, grads = _gradients(b, gamma, etas, xis, p)
    best_b, best_r = b, float(np.linalg.norm(vals - target))
    for _ in range(iterations):
        step, *_ = np.linalg.lstsq(grads, target - vals, rcond=None)
        cand = b + (step[: n * n] + 1j * step[n * n:]).reshape(n, n)
        vals, grads = _gradients(cand, gamma, etas, xis, p)
        r = float(np.linalg.norm(vals - target))
        if not r < best_r:
            break
        b, best_b, best_r = cand, cand, r
        if np.linalg.norm(step) <= 1e-15:
            break
    return best_b, best_r


def reconstruct_detailed(oracle: ProfileOracle, budget: int, *, seed: int = 0, starts: int = 64,
                         refine: int = 4, max_sweeps: int = 200, improve_tol: float = 1e-12,
                         polish: bool = True, polish_probes: int | None = None,
                         cluster_tol: float = CLUSTER_TOL) -> ReconstructionResult:
    """:func:`reconstruct` with the recovered blocks and bookkeeping attached.

    Each level screens ``starts`` random minimal isometries and runs coordinate
    descent from the ``refine`` best of them.
    """
    budget = int(budget)
    if budget < 1:
        raise InvalidInput("budget must be positive")
    n = oracle.dim
    gamma, p = oracle.gamma, oracle.p
    ask = _Counter(oracle, budget)
    terms = []
    levels = []
    state = {"best": None, "residual": math.nan}

    def best_so_far():
        if state["best"] is not None:
            return state["best"]
        return _assemble(terms, n)

    try:
        ql = np.eye(n, dtype=np.complex128)
        qr = np.eye(n, dtype=np.complex128)
        removed = 0.0
        for level in range(n):
            k = ql.shape[1]
            rest = 1.0 - removed
            if rest <= EXHAUSTED:
                break
            scale = rest ** (1.0 / p)
            g = gamma / scale

            def f(points, ql=ql, qr=qr, removed=removed, rest=rest, k=k):
                etas, xis = _kernel_unpack(points, k)
                out = np.empty(len(points))
                for i in range(len(points)):
                    out[i] = (ask(ql @ etas[i], qr @ xis[i]) - removed) / rest
                return out

            rng = sampling.rng_for(seed, level)
            m, eta_s, xi_s = search.multistart(
                f, k, k, rng, samples=starts, starts=refine,
                max_sweeps=max_sweeps, improve_tol=improve_tol,
            )
            floor = min_value_formula(1.0, g, p)
            if m < floor - FLOOR_SLACK:
                raise InconsistentOracle(
                    f"profile minimum {m:.6g} lies below the attainable floor {floor:.6g}"
                )
            t = invert_min_value(min(max(m, floor), g ** p + 1.0 - 1e-15), g, p, tol=1e-15)
            sigma = scale * t
            eta, xi = ql @ eta_s, qr @ xi_s
            terms.append((sigma, eta, xi))
            levels.append({"level": level, "dim": k, "gamma": g, "min_value": m,
                           "sigma": sigma, "queries": ask.used})
            removed += sigma ** p
            if k == 1:
                break
            ql = _complement(ql, eta_s)
            qr = _complement(qr, xi_s)
        state["best"] = _assemble(terms, n)
        if polish:
            count = polish_probes or max(16, 4 * n * n)
            rng = sampling.rng_for(seed, n + 1)
            etas = sampling.unit_vectors(rng, count, n)
            xis = sampling.unit_vectors(rng, count, n)
            target = np.array([ask(e, x) for e, x in zip(etas, xis)])
            polished, resid = _polish(state["best"], gamma, p, etas, xis, target)
            state["best"], state["residual"] = polished, resid
    except _OutOfBudget:
        best = best_so_far()
        raise BudgetExceeded(
            f"query budget of {budget} exhausted",
            best=_normalize(best, p) if np.any(best) else best,
            diagnostics={"levels": levels, "terms": len(terms), "queries": ask.used},
        ) from None
    out = _normalize(state["best"], p)
    return ReconstructionResult(
        matrix=out,
        blocks=_terms_to_blocks(terms, cluster_tol),
        terms=terms,
        queries=ask.used,
        residual=state["residual"],
        levels=levels,
    )


def _kernel_unpack(points, k):
    points = np.atleast_2d(points)
    etas = points[:, :k] + 1j * points[:, k:2 * k]
    xis = points[:, 2 * k:3 * k] + 1j * points[:, 3 * k:]
    etas = etas / np.linalg.norm(etas, axis=1, keepdims=True)
    xis = xis / np.linalg.norm(xis, axis=1, keepdims=True)
    return etas, xis


def _normalize(b, p):
    nrm = _backend.schatten_pp(np.ascontiguousarray(b), p) ** (1.0 / p)
    return b / nrm if nrm > 0 else b


def reconstruct(oracle: ProfileOracle, budget: int, **kwargs) -> np.ndarray:
    """Rebuild the unit-norm matrix behind ``oracle`` using at most ``budget`` queries.

    Raises :class:`BudgetExceeded` (carrying the best iterate) when the budget
    runs out and :class:`InconsistentOracle` when the answers fall below what
    any unit-norm matrix can produce.
    """
    return reconstruct_detailed(oracle, budget, **kwargs).matrix


# -- profile separation ----------------------------------------------------------


def profile_distance(a, b, gamma, p, samples: int = 256, seed: int = 0, refine: int = 4,
                     max_sweeps: int = 30) -> float:
    """A lower estimate of ``sup_e |f_a(e) - f_b(e)|`` over minimal ``e``.

    Random sampling followed by coordinate ascent from the ``refine`` best
    samples. Distinct unit-norm ``a``, ``b`` have distinct profiles, so a
    strictly positive value is a witness that ``a != b``.
    """
    p = _check_p(p)
    gamma = _check_gamma(gamma)
    a = _check_unit(a, p)
    b = _check_unit(b, p)
    if a.shape != b.shape:
        raise InvalidInput("shape mismatch")

    def f(points):
        return np.abs(_backend.profile_pp_packed(a, gamma, points, p)
                      - _backend.profile_pp_packed(b, gamma, points, p))

    rng = sampling.rng_for(seed, 0)
    val, _, _ = search.multistart(f, a.shape[0], a.shape[1], rng, samples=samples,
                                  starts=refine, sign=-1.0, max_sweeps=max_sweeps,
                                  improve_tol=1e-9)
    return float(val)
