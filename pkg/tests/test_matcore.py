import json

import numpy as np
import pytest

from schattenkit import matcore, sampling
from schattenkit.errors import DegenerateInput, InvalidInput

from oracles import random_complex, row_space_projector, singular_values_small


def test_svd_diagonal_sorted(backend):
    res = matcore.svd(np.diag([3.0, 4.0]))
    assert np.allclose(res.sigmas, [4.0, 3.0])
    assert np.allclose(res.reconstruct(), np.diag([3.0, 4.0]))


def test_svd_zero_matrix(backend):
    res = matcore.svd(np.zeros((2, 2)))
    assert np.all(res.sigmas == 0.0)
    assert np.allclose(res.left.conj().T @ res.left, np.eye(2))
    assert np.allclose(res.right.conj().T @ res.right, np.eye(2))


def test_svd_against_charpoly_oracle(backend):
    rng = sampling.rng_for(11)
    for _ in range(25):
        a = random_complex(rng, 3)
        assert np.allclose(matcore.svd(a).sigmas, singular_values_small(a), atol=1e-8)


@pytest.mark.parametrize("shape", [(3, 3), (4, 2), (2, 4), (5, 5)])
def test_svd_invariants(backend, rng, shape):
    a = random_complex(rng, *shape)
    res = matcore.svd(a)
    k = min(shape)
    assert res.sigmas.shape == (k,)
    assert np.all(np.diff(res.sigmas) <= 0) and np.all(res.sigmas >= 0)
    assert np.allclose(res.left.conj().T @ res.left, np.eye(k), atol=1e-12)
    assert np.allclose(res.right.conj().T @ res.right, np.eye(k), atol=1e-12)
    scale = max(1.0, res.sigmas[0])
    assert np.max(np.abs(res.reconstruct() - a)) <= 1e-10 * scale
    spectral = sum(res.sigmas[j] * res.term(j) for j in range(k))
    assert np.allclose(spectral, a, atol=1e-10)


def test_svd_rank_deficient_completion(backend, rng):
    a = random_complex(rng, 4, 2) @ random_complex(rng, 2, 4)
    res = matcore.svd(a)
    assert res.sigmas[2] < 1e-12 * res.sigmas[0]
    assert np.allclose(res.left.conj().T @ res.left, np.eye(4), atol=1e-12)
    assert np.allclose(res.reconstruct(), a, atol=1e-10)


def test_svd_rejects_non_finite():
    with pytest.raises(InvalidInput):
        matcore.svd(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(InvalidInput):
        matcore.svd(np.ones(3))


def test_rank_one_examples():
    e1, e2 = np.eye(2)
    assert np.array_equal(matcore.rank_one(e1, e1).matrix, np.array([[1, 0], [0, 0]]))
    assert np.array_equal(matcore.rank_one(e1, e2).matrix, np.array([[0, 1], [0, 0]]))
    rng = sampling.rng_for(3)
    eta, xi = sampling.minimal_pair(rng, 4)
    e = matcore.rank_one(eta, xi).matrix
    assert np.max(np.abs(e @ e.conj().T @ e - e)) <= 1e-12
    # zeta -> <zeta|xi> eta
    zeta = sampling.unit_vector(rng, 4)
    assert np.allclose(e @ zeta, np.vdot(xi, zeta) * eta)


def test_rank_one_rejects_non_unit():
    with pytest.raises(InvalidInput):
        matcore.rank_one([1.0, 1.0], [1.0, 0.0])


def test_support_examples(backend, rng):
    s = matcore.support(np.diag([2.0, 0.0]))
    assert s.rank == 1
    assert np.allclose(s.matrix, np.diag([1.0, 0.0]))
    u = sampling.unitary(rng, 3)
    assert np.allclose(matcore.support(u).matrix, u, atol=1e-12)


def test_support_projector_oracle(backend, rng):
    a = random_complex(rng, 3, 2) @ random_complex(rng, 2, 3)
    s = matcore.support(a)
    assert s.rank == 2
    assert np.allclose(s.matrix.conj().T @ s.matrix, row_space_projector(a), atol=1e-10)


def test_support_of_zero():
    with pytest.raises(DegenerateInput):
        matcore.support(np.zeros((2, 2)))


def test_support_idempotent_on_rank_one(rng):
    eta, xi = sampling.minimal_pair(rng, 3)
    e = matcore.rank_one(eta, xi)
    assert np.allclose(matcore.support(e.matrix).matrix, e.matrix, atol=1e-10)


def test_is_minimal_pi_examples():
    assert matcore.is_minimal_pi(np.diag([1.0, 0.0]))
    assert not matcore.is_minimal_pi(np.eye(2))
    assert not matcore.is_minimal_pi(0.5 * np.diag([1.0, 0.0]))
    assert not matcore.is_minimal_pi(np.array([[np.inf, 0], [0, 0]]))


def test_certify_partial_isometry_rank():
    e = matcore.certify_partial_isometry(np.diag([1.0, 1.0, 0.0]))
    assert e.rank == 2 and not e.is_minimal
    with pytest.raises(InvalidInput):
        matcore.certify_partial_isometry(np.zeros((2, 2)))


def test_json_round_trip_bit_exact(rng):
    a = random_complex(rng, 3, 2) * 1e-7 + np.pi
    text = matcore.dumps_matrix(a)
    b = matcore.loads_matrix(text)
    assert b.shape == (3, 2)
    assert np.array_equal(a, b)
    obj = json.loads(text)
    assert obj["rows"] == 3 and obj["cols"] == 2 and len(obj["data"]) == 6
    # row-major
    assert obj["data"][1] == [a[0, 1].real, a[0, 1].imag]


@pytest.mark.parametrize("text", [
    "{bad json",
    '{"rows": 1, "cols": 1}',
    '{"rows": 2, "cols": 1, "data": [[1, 0]]}',
    '{"rows": 1, "cols": 1, "data": [[1]]}',
    '{"rows": 1, "cols": 1, "data": [["x", 0]]}',
    '{"rows": 1, "cols": 1, "data": [[true, 0]]}',
    '{"rows": 0, "cols": 1, "data": []}',
    '{"rows": 1, "cols": 1, "data": [[NaN, 0]]}',
    '{"rows": 1, "cols": 1, "data": [[Infinity, 0]]}',
])
def test_json_rejects(text):
    with pytest.raises(InvalidInput):
        matcore.loads_matrix(text)


def test_dumps_rejects_non_finite():
    with pytest.raises(InvalidInput):
        matcore.dumps_matrix(np.array([[np.nan]]))
