"""Derivative-free local search over pairs of unit vectors ``(eta, xi)``.

Minimal partial isometries are parametrized by ``eta (x) xi`` with ``eta`` and
``xi`` unit vectors, packed into one real vector
``(Re eta, Im eta, Re xi, Im xi)``. The search moves one real coordinate at a
time, renormalizes, and fits a parabola through three samples along the
coordinate. A Hooke-Jeeves pattern move along each sweep's net displacement
speeds up progress along curved valleys.

Objectives take a stack of packed points (rows need not be normalized) and
return one value per row; :func:`packed` adapts an ``(etas, xis)`` callable.
"""

from __future__ import annotations

import math

import numpy as np

from . import sampling


def pack(eta, xi):
    eta = np.asarray(eta, dtype=np.complex128)
    xi = np.asarray(xi, dtype=np.complex128)
    return np.concatenate([eta.real, eta.imag, xi.real, xi.imag])


def unpack(x, n, m):
    eta = x[:n] + 1j * x[n:2 * n]
    xi = x[2 * n:2 * n + m] + 1j * x[2 * n + m:]
    return eta / np.linalg.norm(eta), xi / np.linalg.norm(xi)


def packed(fbatch, n, m):
    """Wrap ``fbatch(etas, xis)`` as an objective on packed points."""

    def f(points):
        points = np.atleast_2d(points)
        etas = points[:, :n] + 1j * points[:, n:2 * n]
        xis = points[:, 2 * n:2 * n + m] + 1j * points[:, 2 * n + m:]
        etas = etas / np.linalg.norm(etas, axis=1, keepdims=True)
        xis = xis / np.linalg.norm(xis, axis=1, keepdims=True)
        return fbatch(etas, xis)

    return f


def _normalize(x, n):
    # in place; the eta block is x[:2n], the xi block the rest
    head = x[:2 * n]
    tail = x[2 * n:]
    head /= math.sqrt(float(head @ head))
    tail /= math.sqrt(float(tail @ tail))
    return x


def coordinate_descent(f, x0, n, *, max_sweeps=200, improve_tol=1e-12, step=0.05,
                       min_step=1e-11, sign=1.0):
    """Locally minimize ``sign * f`` starting from the packed point ``x0``.

    ``n`` is the length of ``eta``. Stops when a sweep improves the objective
    by less than ``improve_tol``, when every step size has dropped below
    ``min_step``, or after ``max_sweeps`` sweeps. Returns
    ``(value, x, sweeps)`` with ``value`` in the caller's sign.
    """
    x = _normalize(np.array(x0, dtype=np.float64), n)
    dim = x.size
    fx = sign * float(f(x[None, :])[0])
    h = np.full(dim, step)
    trial = np.empty((2, dim))
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        start_x, start_f = x.copy(), fx
        for c in range(dim):
            hc = h[c]
            trial[0] = x
            trial[1] = x
            trial[0, c] += hc
            trial[1, c] -= hc
            fp, fm = f(trial)
            fp *= sign
            fm *= sign
            best_f, best_k = fx, -1
            if fp < best_f:
                best_f, best_k = fp, 0
            if fm < best_f:
                best_f, best_k = fm, 1
            best_x = trial[best_k].copy() if best_k >= 0 else None
            curv = fp + fm - 2.0 * fx
            if curv > 0.0:
                t = 0.5 * hc * (fm - fp) / curv
                if 0.0 < abs(t) <= 4.0 * hc and abs(abs(t) - hc) > 1e-3 * hc:
                    cand = x.copy()
                    cand[c] += t
                    ft = sign * float(f(cand[None, :])[0])
                    if ft < best_f:
                        best_f, best_x = ft, cand
            if best_x is None:
                h[c] = 0.5 * hc
            else:
                moved = abs(best_x[c] - x[c])
                h[c] = min(max(2.0 * moved, 0.5 * hc), 0.5)
                x = _normalize(best_x, n)
                fx = best_f
        d = x - start_x
        if np.any(d):
            cand = _normalize(x + d, n)
            fc = sign * float(f(cand[None, :])[0])
            if fc < fx:
                x, fx = cand, fc
        if start_f - fx < improve_tol or np.all(h < min_step):
            break
    return sign * fx, x, sweeps


def multistart(f, n, m, rng, *, samples=256, starts=4, sign=1.0, **kwargs):
    """Sample ``samples`` random pairs, refine the best ``starts`` of them.

    Returns ``(value, eta, xi)`` of the best refined point.
    """
    etas = sampling.unit_vectors(rng, samples, n)
    xis = sampling.unit_vectors(rng, samples, m)
    pts = np.concatenate([etas.real, etas.imag, xis.real, xis.imag], axis=1)
    vals = sign * np.asarray(f(pts), dtype=float)
    order = np.argsort(vals, kind="stable")[:starts]
    best = None
    for k in order:
        val, x, _ = coordinate_descent(f, pts[k], n, sign=sign, **kwargs)
        if best is None or sign * val < sign * best[0]:
            best = (val, x)
    eta, xi = unpack(best[1], n, m)
    return best[0], eta, xi
