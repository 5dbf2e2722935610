"""Reference computations that share no code with the package."""

import itertools
import math

import numpy as np


def hermitian3_eigenvalues(h):
    """Eigenvalues (descending) of a 3x3 Hermitian matrix from its characteristic polynomial.

    Trigonometric solution of the depressed cubic for ``det(h - q I - s B)``.
    """
    h = np.asarray(h, dtype=complex)
    q = h[0, 0].real + h[1, 1].real + h[2, 2].real
    q /= 3.0
    off = abs(h[0, 1]) ** 2 + abs(h[0, 2]) ** 2 + abs(h[1, 2]) ** 2
    diag = (h[0, 0].real - q) ** 2 + (h[1, 1].real - q) ** 2 + (h[2, 2].real - q) ** 2
    pp = math.sqrt((diag + 2.0 * off) / 6.0)
    if pp == 0.0:
        return np.array([q, q, q])
    b = (h - q * np.eye(3)) / pp
    det = (b[0, 0] * (b[1, 1] * b[2, 2] - b[1, 2] * b[2, 1])
           - b[0, 1] * (b[1, 0] * b[2, 2] - b[1, 2] * b[2, 0])
           + b[0, 2] * (b[1, 0] * b[2, 1] - b[1, 1] * b[2, 0])).real
    r = min(1.0, max(-1.0, det / 2.0))
    phi = math.acos(r) / 3.0
    e1 = q + 2.0 * pp * math.cos(phi)
    e3 = q + 2.0 * pp * math.cos(phi + 2.0 * math.pi / 3.0)
    e2 = 3.0 * q - e1 - e3
    return np.array(sorted([e1, e2, e3], reverse=True))


def hermitian2_eigenvalues(h):
    h = np.asarray(h, dtype=complex)
    mean = 0.5 * (h[0, 0].real + h[1, 1].real)
    rad = math.hypot(0.5 * (h[0, 0].real - h[1, 1].real), abs(h[0, 1]))
    return np.array([mean + rad, mean - rad])


def singular_values_small(a):
    """Singular values of a 1x1, 2x2 or 3x3 matrix via eigenvalues of ``a* a``."""
    a = np.asarray(a, dtype=complex)
    g = a.conj().T @ a
    n = g.shape[0]
    if n == 1:
        ev = np.array([g[0, 0].real])
    elif n == 2:
        ev = hermitian2_eigenvalues(g)
    elif n == 3:
        ev = hermitian3_eigenvalues(g)
    else:
        raise ValueError("oracle covers n <= 3")
    return np.sqrt(np.clip(ev, 0.0, None))


def schatten_pp_small(a, p):
    return float(np.sum(singular_values_small(a) ** p))


def lapack_singular_values(a):
    return np.linalg.svd(np.asarray(a, dtype=complex), compute_uv=False)


def lp_pp(x, p):
    return float(np.sum(np.abs(x) ** p))


def brute_k(lam, gamma, p, tol=1e-12):
    """Exhaustive minimum of ``||lam - gamma z||_p^p`` over ``z = +-e_j``."""
    vals = {}
    for i, s in itertools.product(range(len(lam)), (1, -1)):
        z = np.zeros(len(lam))
        z[i] = s
        vals[(i, s)] = lp_pp(np.asarray(lam) - gamma * z, p)
    best = min(vals.values())
    return best, frozenset(k for k, v in vals.items() if v <= best + tol)


def brute_h(lam, gamma, p, tol=1e-12):
    """Exhaustive minimum of ``||lam_hat - gamma s_ij||_p^p`` over ordered pairs ``i != j``."""
    lam = np.asarray(lam, dtype=float)
    c = 2.0 ** (-1.0 / p)
    hat = c * np.concatenate([lam, -lam[::-1]])
    m = hat.size
    vals = {}
    for i, j in itertools.permutations(range(m), 2):
        s = np.zeros(m)
        s[i], s[j] = c, -c
        vals[(i, j)] = lp_pp(hat - gamma * s, p)
    best = min(vals.values())
    return best, frozenset(k for k, v in vals.items() if v <= best + tol)


def row_space_projector(a, tol=1e-10):
    """Orthogonal projection onto the row space of ``a`` (co-range), via LAPACK."""
    _, s, vh = np.linalg.svd(np.asarray(a, dtype=complex))
    k = int(np.count_nonzero(s > tol * s[0]))
    v = vh[:k].conj().T
    return v @ v.conj().T


def random_complex(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
