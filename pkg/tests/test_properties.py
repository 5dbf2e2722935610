import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from schattenkit import geometry as G, isometry as I, matcore, sampling, schatten
from schattenkit.suites import orthogonal_pair

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 5)
exponents = st.floats(1.05, 6.0).filter(lambda p: abs(p - 2.0) > 1e-3)
gammas = st.floats(1.0, 4.0)
entries = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def complex_matrices(draw, max_dim=5):
    n = draw(st.integers(1, max_dim))
    m = draw(st.integers(1, max_dim))
    re = draw(arrays(np.float64, (n, m), elements=entries))
    im = draw(arrays(np.float64, (n, m), elements=entries))
    return re + 1j * im


@given(complex_matrices())
def test_adjoint_has_same_singular_values(a):
    s = matcore.singular_values(a)
    t = matcore.singular_values(a.conj().T)
    assert np.allclose(s, t, atol=1e-10 * max(1.0, s[0]))


@given(complex_matrices())
def test_svd_reconstructs(a):
    res = matcore.svd(a)
    scale = max(1.0, res.sigmas[0])
    assert np.max(np.abs(res.reconstruct() - a)) <= 1e-10 * scale
    assert np.all(np.diff(res.sigmas) <= 0)


@given(complex_matrices())
def test_json_round_trip(a):
    assert np.array_equal(matcore.loads_matrix(matcore.dumps_matrix(a)), a)


@given(seeds, dims)
def test_unitary_invariance(seed, n):
    rng = sampling.rng_for(seed)
    a = sampling.ginibre(rng, n)
    u, v = sampling.unitary(rng, n), sampling.unitary(rng, n)
    assert np.allclose(matcore.singular_values(u @ a @ v), matcore.singular_values(a), atol=1e-10)


@given(seeds, dims)
def test_support_of_rank_one_is_itself(seed, n):
    e = matcore.rank_one(*sampling.minimal_pair(sampling.rng_for(seed), n))
    assert np.allclose(matcore.support(e.matrix).matrix, e.matrix, atol=1e-10)


@given(seeds, st.integers(2, 5), exponents)
def test_clarkson_mccarthy(seed, n, p):
    rng = sampling.rng_for(seed)
    a, b = sampling.sphere_point(rng, n, p), sampling.sphere_point(rng, n, p) * rng.uniform(0, 2)
    lo, hi = schatten.clarkson_mccarthy_gaps(a, b, p)
    assert lo >= -1e-10 and hi >= -1e-10


@given(seeds, st.integers(2, 5), exponents)
def test_orthogonal_pairs(seed, n, p):
    a, b = orthogonal_pair(sampling.rng_for(seed), n)
    a /= sampling.schatten_p(a, p)
    b /= sampling.schatten_p(b, p)
    assert abs(schatten.schatten_pp(a + b, p) - 2.0) <= 1e-10
    assert schatten.orthogonality_by_norm(a, b, p)
    assert schatten.are_orthogonal(a, b)


@given(seeds, dims)
def test_peirce_recombines(seed, n):
    rng = sampling.rng_for(seed)
    x = sampling.ginibre(rng, n)
    d = schatten.peirce(x, sampling.minimal_pi(rng, n))
    assert np.allclose(d.recombine(), x, atol=1e-12)


@given(seeds, st.integers(1, 4), exponents, gammas)
def test_profile_lower_bound(seed, n, p, gamma):
    rng = sampling.rng_for(seed)
    a = sampling.sphere_point(rng, n, p)
    s = G.profile_summary(a, gamma, p)
    etas = sampling.unit_vectors(rng, 64, n)
    xis = sampling.unit_vectors(rng, 64, n)
    assert np.all(G.profile_values(a, etas, xis, gamma, p) >= s.min_value - 1e-9)
    v = G.minimizer_from_coefficients(s, sampling.unit_vector(rng, s.cluster_size))
    assert abs(G.profile_value(a, v, gamma, p) - s.min_value) <= 1e-9


@given(st.floats(1e-6, 1.0), gammas, exponents)
def test_invert_round_trip(t, gamma, p):
    m = G.min_value_formula(t, gamma, p)
    assert abs(G.invert_min_value(m, gamma, p) - t) <= 1e-9


@given(seeds, st.integers(1, 4), st.sampled_from(list(I.Form)), exponents)
def test_canonical_isometry_properties(seed, n, form, p):
    rng = sampling.rng_for(seed)
    T = I.random_canonical(rng, n, form)
    x, y = sampling.sphere_point(rng, n, p), sampling.sphere_point(rng, n, p)
    assert abs(sampling.schatten_p(T(x), p) - 1.0) <= 1e-10
    assert abs(sampling.schatten_p(T(x) - T(y), p) - sampling.schatten_p(x - y, p)) <= 1e-10
    assert sampling.schatten_p(T(-x) + T(x), p) <= 1e-10
    assert np.allclose(T.inverse()(T(x)), x, atol=1e-12)
