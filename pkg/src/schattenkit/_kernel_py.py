"""Pure-Python (numpy) twin of the compiled ``_kernel`` module.

Same algorithm, same rotation order and stopping rule; only slower. Used when
the extension is not built, and as the reference side of the kernel benchmark.
"""

import numpy as np

ROT_TOL = 1e-14
MAX_SWEEPS = 60
# columns below NEGLIGIBLE * ||W||_F are never rotated: their phases are noise
NEGLIGIBLE = 1e-30


def _jacobi(w, v=None):
    rows, cols = w.shape
    floor = NEGLIGIBLE ** 2 * float(np.vdot(w, w).real)
    for sweep in range(MAX_SWEEPS):
        rotated = False
        for i in range(cols - 1):
            for j in range(i + 1, cols):
                wi = w[:, i]
                wj = w[:, j]
                alpha = np.vdot(wi, wi).real
                beta = np.vdot(wj, wj).real
                g = np.vdot(wi, wj)
                absg = abs(g)
                if absg == 0.0 or alpha <= floor or beta <= floor:
                    continue
                if absg <= ROT_TOL * np.sqrt(alpha) * np.sqrt(beta):
                    continue
                rotated = True
                phase = g / absg
                zeta = (beta - alpha) / (2.0 * absg)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                a = wi.copy()
                b = phase.conjugate() * wj
                w[:, i] = c * a - s * b
                w[:, j] = s * a + c * b
                if v is not None:
                    a = v[:, i].copy()
                    b = phase.conjugate() * v[:, j]
                    v[:, i] = c * a - s * b
                    v[:, j] = s * a + c * b
        if not rotated:
            return sweep + 1
    return MAX_SWEEPS + 1


def _load(a):
    a = np.asarray(a, dtype=np.complex128)
    if a.shape[0] >= a.shape[1]:
        return a.copy()
    return a.conj().T.copy()


def _power_sum(w, p):
    nrm2 = np.einsum("ij,ij->j", w.real, w.real) + np.einsum("ij,ij->j", w.imag, w.imag)
    nrm2 = nrm2[nrm2 > 0.0]
    return float(np.sum(nrm2 ** (0.5 * p)))


def jacobi_svd(a):
    m, n = a.shape
    w = _load(a)
    v = np.eye(w.shape[1], dtype=np.complex128)
    sweeps = _jacobi(w, v)
    return w, v, m < n, sweeps


def singular_values(a):
    w = _load(a)
    _jacobi(w)
    s = np.sqrt(np.einsum("ij,ij->j", w.real, w.real) + np.einsum("ij,ij->j", w.imag, w.imag))
    s[::-1].sort()
    return s


def schatten_pp(a, p):
    w = _load(a)
    _jacobi(w)
    return _power_sum(w, p)


def schatten_pp_batch(stack, p):
    return np.array([schatten_pp(x, p) for x in stack], dtype=np.float64)


def profile_pp(a, gamma, eta, xi, p):
    return schatten_pp(a - gamma * np.outer(eta, xi.conj()), p)


def profile_pp_batch(a, gamma, etas, xis, p):
    return np.array(
        [profile_pp(a, gamma, eta, xi, p) for eta, xi in zip(etas, xis)], dtype=np.float64
    )


def unpack(pts, m, n):
    pts = np.asarray(pts, dtype=np.float64)
    etas = pts[:, :m] + 1j * pts[:, m:2 * m]
    xis = pts[:, 2 * m:2 * m + n] + 1j * pts[:, 2 * m + n:]
    etas = etas / np.linalg.norm(etas, axis=1, keepdims=True)
    xis = xis / np.linalg.norm(xis, axis=1, keepdims=True)
    return etas, xis


def profile_pp_packed(a, gamma, pts, p):
    etas, xis = unpack(pts, a.shape[0], a.shape[1])
    return profile_pp_batch(a, gamma, etas, xis, p)
