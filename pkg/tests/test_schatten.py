import math

import numpy as np
import pytest

from schattenkit import sampling, schatten
from schattenkit.errors import InvalidInput, UnsupportedExponent
from schattenkit.matcore import rank_one
from schattenkit.suites import one_sided_pair, orthogonal_pair

from oracles import hermitian3_eigenvalues, random_complex

E11 = np.diag([1.0, 0.0]).astype(complex)
E22 = np.diag([0.0, 1.0]).astype(complex)
E12 = np.array([[0, 1], [0, 0]], dtype=complex)
E21 = E12.T.copy()


def test_norm_examples(backend):
    assert schatten.schatten_norm(np.diag([3.0, 4.0]), 1) == pytest.approx(7.0, abs=1e-14)
    assert schatten.schatten_norm(np.diag([3.0, 4.0]), schatten.INF) == pytest.approx(4.0)
    for p in (1.0, 1.5, 3.0, 7.0):
        assert schatten.schatten_norm(2.0 ** (-1.0 / p) * np.eye(2), p) == pytest.approx(1.0, abs=1e-14)


def test_norm_against_eigenvalue_oracle(backend):
    rng = sampling.rng_for(5)
    for _ in range(20):
        a = random_complex(rng, 3)
        ev = np.clip(hermitian3_eigenvalues(a.conj().T @ a), 0, None)
        # tr((a* a)^{3/2})^{1/3}
        ref = np.sum(ev ** 1.5) ** (1.0 / 3.0)
        assert schatten.schatten_norm(a, 3) == pytest.approx(ref, rel=1e-8)


def test_exponent_validation():
    for bad in (0.5, -1, float("nan"), "x"):
        with pytest.raises(InvalidInput):
            schatten.schatten_norm(np.eye(2), bad)
    with pytest.raises(InvalidInput):
        schatten.schatten_pp(np.eye(2), schatten.INF)


def test_adjoint_and_unitary_invariance(rng):
    a = random_complex(rng, 4)
    u, v = sampling.unitary(rng, 4), sampling.unitary(rng, 4)
    for p in (1.0, 1.3, 3.0, schatten.INF):
        n = schatten.schatten_norm(a, p)
        assert schatten.schatten_norm(a.conj().T, p) == pytest.approx(n, rel=1e-10)
        assert schatten.schatten_norm(u @ a @ v, p) == pytest.approx(n, rel=1e-10)


def test_cm_examples(backend):
    lo, _ = schatten.clarkson_mccarthy_gaps(E11, E22, 3)
    assert lo == pytest.approx(0.0, abs=1e-14)
    _, hi = schatten.clarkson_mccarthy_gaps(E11, E11, 3)
    assert hi == pytest.approx(0.0, abs=1e-14)


def test_cm_random_pair_direct(rng):
    p = 1.5
    a, b = random_complex(rng, 3), random_complex(rng, 3)
    lo, hi = schatten.clarkson_mccarthy_gaps(a, b, p)
    nrm = lambda x: np.sum(np.linalg.svd(x, compute_uv=False) ** p)
    s = nrm(a + b) + nrm(a - b)
    n = nrm(a) + nrm(b)
    # p <= 2: 2^{p-1} N <= S <= 2 N
    assert lo == pytest.approx(s - 2 ** (p - 1) * n, abs=1e-12)
    assert hi == pytest.approx(2 * n - s, abs=1e-12)
    assert lo >= 0 and hi >= 0


def test_cm_rejects_endpoints():
    for p in (1.0, schatten.INF):
        with pytest.raises(InvalidInput):
            schatten.clarkson_mccarthy_gaps(E11, E22, p)


def test_are_orthogonal_examples(rng):
    assert schatten.are_orthogonal(E11, E22)
    assert not schatten.are_orthogonal(E11, E12)
    a, b = orthogonal_pair(rng, 4)
    assert schatten.are_orthogonal(a, b)
    a, b = one_sided_pair(rng, 3)
    assert np.allclose(a @ b.conj().T, 0) and not schatten.are_orthogonal(a, b)


def test_orthogonality_by_norm_examples(rng):
    assert schatten.orthogonality_by_norm(E11, E22, 3)
    a = sampling.sphere_point(rng, 3, 3)
    assert not schatten.orthogonality_by_norm(a, -a, 3)


def test_orthogonality_by_norm_gates(rng):
    with pytest.raises(UnsupportedExponent):
        schatten.orthogonality_by_norm(E11, E22, 2.0)
    with pytest.raises(UnsupportedExponent):
        schatten.orthogonality_by_norm(E11, E22, 2.0 + 1e-7)
    with pytest.raises(InvalidInput):
        schatten.orthogonality_by_norm(2 * E11, E22, 3)
    with pytest.raises(InvalidInput):
        schatten.orthogonality_by_norm(E11, E22, 1.0)


@pytest.mark.parametrize("p", [1.2, 1.5, 3.0, 4.0])
def test_orthogonal_additivity(rng, p):
    a, b = orthogonal_pair(rng, 4)
    a /= sampling.schatten_p(a, p)
    b /= sampling.schatten_p(b, p)
    assert schatten.schatten_pp(a + b, p) == pytest.approx(2.0, abs=1e-10)
    assert schatten.schatten_pp(a - b, p) == pytest.approx(2.0, abs=1e-10)
    c = 0.3 * b
    assert schatten.schatten_pp(a + c, p) == pytest.approx(
        schatten.schatten_pp(a, p) + schatten.schatten_pp(c, p), abs=1e-10)


def test_peirce_examples(rng):
    e = rank_one(*sampling.minimal_pair(rng, 3))
    d = schatten.peirce(e.matrix, e)
    assert np.allclose(d.p2, e.matrix) and np.allclose(d.p1, 0) and np.allclose(d.p0, 0)

    al, be, de, ga = 0.5, 0.3j, -0.2, 0.1 + 0.1j
    x = al * E11 + be * E12 + de * E22 + ga * E21
    d = schatten.peirce(x, E11)
    assert np.allclose(d.p2, al * E11)
    assert np.allclose(d.p0, de * E22)
    assert np.allclose(d.p1, be * E12 + ga * E21)
    assert schatten.varphi(E11, x) == pytest.approx(al)


def test_peirce_blocks_by_definition(rng):
    x = random_complex(rng, 4)
    eta, xi = sampling.minimal_pair(rng, 4)
    e = np.outer(eta, xi.conj())
    d = schatten.peirce(x, e)
    assert np.allclose(d.recombine(), x, atol=1e-12)
    left, right = e @ e.conj().T, e.conj().T @ e
    eye = np.eye(4)
    assert np.allclose(d.p2, left @ x @ right, atol=1e-12)
    assert np.allclose(d.p0, (eye - left) @ x @ (eye - right), atol=1e-12)


def test_peirce_rank_two_anchor(rng):
    x = random_complex(rng, 3)
    e = np.diag([1.0, 1.0, 0.0])
    d = schatten.peirce(x, e)
    assert np.allclose(d.p0[2, 2], x[2, 2]) and np.allclose(d.p2[:2, :2], x[:2, :2])


def test_peirce_dimension_mismatch():
    with pytest.raises(InvalidInput):
        schatten.peirce(np.eye(3), E11)


def test_varphi(rng):
    eta, xi = sampling.minimal_pair(rng, 4)
    e = np.outer(eta, xi.conj())
    assert schatten.varphi(e, e) == pytest.approx(1.0)
    x = random_complex(rng, 4)
    phi = schatten.varphi(e, x)
    assert phi == pytest.approx(np.vdot(eta, x @ xi))
    p2 = schatten.peirce(x, e).p2
    assert np.max(np.abs(p2 - phi * e)) <= 1e-12
    with pytest.raises(InvalidInput):
        schatten.varphi(np.eye(2), E11)


def test_p2_norms_still_compute():
    assert schatten.schatten_norm(np.eye(2), 2) == pytest.approx(math.sqrt(2))
