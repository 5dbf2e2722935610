import numpy as np
import pytest

from schattenkit import _backend, _kernel_py

from oracles import lapack_singular_values, random_complex, singular_values_small


@pytest.mark.parametrize("shape", [(1, 1), (2, 2), (3, 3), (4, 2), (2, 5), (6, 6)])
def test_jacobi_factorization(backend, rng, shape):
    a = random_complex(rng, *shape)
    w, v, flipped, sweeps = _backend.jacobi_svd(a)
    src = a.conj().T if flipped else a
    assert flipped == (shape[0] < shape[1])
    assert np.allclose(src @ v, w, atol=1e-12)
    assert np.allclose(v.conj().T @ v, np.eye(v.shape[0]), atol=1e-12)
    gram = w.conj().T @ w
    assert np.max(np.abs(gram - np.diag(np.diag(gram)))) < 1e-12
    assert 1 <= sweeps <= 60


def test_singular_values_match_charpoly_oracle(backend, rng):
    for n in (1, 2, 3):
        for _ in range(20):
            a = random_complex(rng, n)
            assert np.allclose(_backend.singular_values(a), singular_values_small(a), atol=1e-8)


def test_singular_values_match_lapack(backend, rng):
    a = random_complex(rng, 5, 4)
    assert np.allclose(_backend.singular_values(a), lapack_singular_values(a), atol=1e-12)


def test_batched_entry_points_agree(backend, rng):
    a = random_complex(rng, 3)
    stack = np.stack([random_complex(rng, 3) for _ in range(5)])
    p = 1.7
    batch = _backend.schatten_pp_batch(stack, p)
    assert np.allclose(batch, [_backend.schatten_pp(x, p) for x in stack], rtol=1e-13)

    etas = random_complex(rng, 6, 3)
    xis = random_complex(rng, 6, 3)
    etas /= np.linalg.norm(etas, axis=1, keepdims=True)
    xis /= np.linalg.norm(xis, axis=1, keepdims=True)
    direct = [np.sum(lapack_singular_values(a - 2.0 * np.outer(e, x.conj())) ** p)
              for e, x in zip(etas, xis)]
    assert np.allclose(_backend.profile_pp_batch(a, 2.0, etas, xis, p), direct, rtol=1e-12)
    assert np.allclose(_backend.profile_pp(a, 2.0, etas[0], xis[0], p), direct[0], rtol=1e-12)

    # packed rows need not be normalized
    pts = np.concatenate([etas.real, etas.imag, xis.real, xis.imag], axis=1) * 3.0
    assert np.allclose(_backend.profile_pp_packed(a, 2.0, pts, p), direct, rtol=1e-12)


def test_zero_matrix(backend):
    assert np.all(_backend.singular_values(np.zeros((3, 3), dtype=complex)) == 0.0)
    assert _backend.schatten_pp(np.zeros((2, 2), dtype=complex), 3.0) == 0.0


def test_backends_agree(rng):
    if "compiled" not in _backend.available():
        pytest.skip("compiled kernel not built")
    from schattenkit import _kernel

    for n in (2, 3, 5):
        a = random_complex(rng, n)
        assert np.allclose(_kernel.singular_values(a), _kernel_py.singular_values(a), atol=1e-13)


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        _backend.set_backend("fortran")
