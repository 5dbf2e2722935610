"""Seeded generators for test instances.

All randomness is derived from an integer seed plus a tuple of counters via
``numpy.random.SeedSequence``, so trial ``k`` of a run draws the same numbers
whether it is evaluated first, last or in another process.
"""

import numpy as np

from . import _backend


def rng_for(seed: int, *counters: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), *counters]))


def unit_vector(rng, n):
    """Rotation-invariant unit vector in C^n (normalized complex Gaussian)."""
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def unit_vectors(rng, count, n):
    v = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def minimal_pair(rng, n, m=None):
    """Unit vectors ``(eta, xi)`` of a random minimal partial isometry ``eta (x) xi``."""
    return unit_vector(rng, n), unit_vector(rng, n if m is None else m)


def minimal_pi(rng, n):
    eta, xi = minimal_pair(rng, n)
    return np.outer(eta, xi.conj())


def unitary(rng, n):
    """Haar-distributed unitary (QR of a Ginibre matrix with the phase correction)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def ginibre(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def sphere_point(rng, n, p):
    """Random element of the unit sphere of C_p on C^n."""
    a = ginibre(rng, n)
    return a / schatten_p(a, p)


def with_singular_values(rng, sigmas):
    """``u diag(sigmas) v*`` for Haar unitaries ``u, v``."""
    sigmas = np.asarray(sigmas, dtype=float)
    n = sigmas.size
    return (unitary(rng, n) * sigmas) @ unitary(rng, n).conj().T


def schatten_p(a, p):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if np.isinf(p):
        return float(_backend.singular_values(a)[0])
    return _backend.schatten_pp(a, float(p)) ** (1.0 / p)
