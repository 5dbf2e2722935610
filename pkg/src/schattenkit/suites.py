"""Seeded property suites driven by ``schattenkit check``.

Every trial draws from its own counter-derived generator, and reports only use
max and count reductions, so a report does not depend on trial order.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import geometry, isometry, sampling
from .constants import DEFAULT_GAMMA, DEFAULT_P
from .errors import BudgetExceeded, InvalidInput, SchattenError
from .reconstruct import ProfileOracle, reconstruct
from .schatten import are_orthogonal, clarkson_mccarthy_gaps, orthogonality_by_norm

SUITES = ("cm", "orth", "minval", "lemma", "reconstruct", "wigner")


@dataclass
class SuiteReport:
    suite: str
    trials: int
    failures: int
    worst_violation: float
    seed: int
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class _Tally:
    def __init__(self):
        self.failures = 0
        self.worst = 0.0

    def add(self, violation, ok):
        self.worst = max(self.worst, float(violation))
        self.failures += 0 if ok else 1


def orthogonal_pair(rng, n, k=None):
    """Unit-sphere ``a``, ``b`` with ``a b* = 0 = b* a`` in every ``p``-norm up to scaling.

    ``a`` lives on the first ``k`` singular directions of random unitaries,
    ``b`` on the rest. Returned unnormalized.
    """
    k = max(1, n // 2) if k is None else k
    u = sampling.unitary(rng, n)
    v = sampling.unitary(rng, n)
    mid_a = np.zeros((n, n), dtype=np.complex128)
    mid_b = np.zeros((n, n), dtype=np.complex128)
    mid_a[:k, :k] = sampling.ginibre(rng, k)
    mid_b[k:, k:] = sampling.ginibre(rng, n - k)
    return u @ mid_a @ v.conj().T, u @ mid_b @ v.conj().T


def one_sided_pair(rng, n):
    """Rank-one ``a``, ``b`` with ``a b* = 0`` but ``b* a != 0``."""
    u = sampling.unitary(rng, n)
    v = sampling.unitary(rng, n)
    a = np.outer(u[:, 0], v[:, 0].conj())
    b = np.outer(u[:, 0], v[:, 1].conj())
    return a, b


def suite_cm(trials, seed, p, n, tol=1e-10):
    t = _Tally()
    for k in range(trials):
        rng = sampling.rng_for(seed, 0, k)
        a = sampling.sphere_point(rng, n, p)
        b = sampling.sphere_point(rng, n, p) * rng.uniform(0.1, 1.0)
        lo, hi = clarkson_mccarthy_gaps(a, b, p)
        x, y = orthogonal_pair(rng, n)
        glo, ghi = clarkson_mccarthy_gaps(x / sampling.schatten_p(x, p), y / sampling.schatten_p(y, p), p)
        eq = abs(glo if p >= 2 else ghi)
        viol = max(-lo, -hi, -glo, -ghi, eq, 0.0)
        t.add(viol, viol <= tol)
    return t


def suite_orth(trials, seed, p, n):
    t = _Tally()
    for k in range(trials):
        rng = sampling.rng_for(seed, 1, k)
        kind = k % 3
        if kind == 0:
            a, b = orthogonal_pair(rng, n)
        elif kind == 1:
            a, b = one_sided_pair(rng, n)
        else:
            a, b = sampling.ginibre(rng, n), sampling.ginibre(rng, n)
        a = a / sampling.schatten_p(a, p)
        b = b / sampling.schatten_p(b, p)
        algebraic = are_orthogonal(a, b)
        normed = orthogonality_by_norm(a, b, p)
        t.add(0.0 if algebraic == normed else 1.0, algebraic == normed)
    return t


def suite_minval(trials, seed, p, n, samples=512):
    t = _Tally()
    for k in range(trials):
        rng = sampling.rng_for(seed, 2, k)
        gamma = 1.0 if k % 2 == 0 else 2.0
        a = sampling.sphere_point(rng, n, p)
        summary = geometry.profile_summary(a, gamma, p)
        found, _, _ = geometry.sampled_minimum(a, gamma, p, samples=samples, seed=k)
        excess = found - summary.min_value
        c = sampling.unit_vector(rng, summary.cluster_size)
        v = geometry.minimizer_from_coefficients(summary, c)
        attained = abs(geometry.profile_value(a, v, gamma, p) - summary.min_value)
        t.add(max(abs(excess), attained), -1e-9 <= excess <= 1e-6 and attained <= 1e-9)
    return t


def random_lp_vector(rng, n, p, ties=False):
    lam = np.sort(rng.uniform(0.0, 1.0, n))[::-1]
    if ties and n > 1:
        j = int(rng.integers(2, n + 1))
        lam[:j] = lam[0]
    return lam / geometry.lp_pp(lam, p) ** (1.0 / p)


def exhaustive_k(lam, gamma, p, tol=1e-12):
    vals = {(i, s): geometry.k_value(lam, i, s, gamma, p) for i in range(len(lam)) for s in (1, -1)}
    best = min(vals.values())
    return best, frozenset(z for z, v in vals.items() if v <= best + tol)


def exhaustive_h(lam, gamma, p, tol=1e-12):
    m = 2 * len(lam)
    vals = {(i, j): geometry.h_value(lam, i, j, gamma, p)
            for i, j in itertools.permutations(range(m), 2)}
    best = min(vals.values())
    return best, frozenset(z for z, v in vals.items() if v <= best + tol)


def suite_lemma(trials, seed, p, n, gamma=DEFAULT_GAMMA):
    t = _Tally()
    for k in range(trials):
        rng = sampling.rng_for(seed, 3, k)
        lam = random_lp_vector(rng, n, p, ties=(k % 4 == 0))
        g = gamma if k % 2 == 0 else 1.0 + rng.uniform(0.0, 2.0)
        kv, ks = geometry.lemma_k(lam, g, p)
        ko, kos = exhaustive_k(lam, g, p)
        hv, hs = geometry.lemma_h(lam, g, p)
        ho, hos = exhaustive_h(lam, g, p)
        viol = max(abs(kv - ko), abs(hv - ho))
        t.add(viol, viol <= 1e-12 and ks == kos and hs == hos)
    return t


def gapped_sphere_point(rng, n, p, gap=0.05):
    """Unit-norm matrix whose consecutive singular values differ by at least ``gap``."""
    while True:
        s = np.sort(rng.uniform(0.0, 1.0, n))[::-1]
        s = s / geometry.lp_pp(s, p) ** (1.0 / p)
        if np.all(-np.diff(s) >= gap) and s[-1] >= gap:
            return sampling.with_singular_values(rng, s)


def suite_reconstruct(trials, seed, p, n, gamma=DEFAULT_GAMMA, budget=500_000, tol=1e-6):
    t = _Tally()
    for k in range(trials):
        rng = sampling.rng_for(seed, 4, k)
        a = gapped_sphere_point(rng, n, p)
        oracle = ProfileOracle.from_matrix(a, gamma, p)
        try:
            b = reconstruct(oracle, budget, seed=k)
        except BudgetExceeded as exc:
            b = exc.best
        err = sampling.schatten_p(b - a, p)
        t.add(err, err <= tol and oracle.count <= budget)
    return t


def suite_wigner(trials, seed, p, n, samples=100, tol=1e-8):
    t = _Tally()
    forms = list(isometry.Form)
    for k in range(trials):
        rng = sampling.rng_for(seed, 5, k)
        form = forms[k % 4]
        T = isometry.random_canonical(rng, n, form)
        delta = isometry.SphereMap.from_canonical(T, p)
        try:
            R = isometry.recover_wigner(delta, seed=k)
        except SchattenError:
            t.add(1.0, False)
            continue
        err = isometry.verify_extension(delta, R, samples, seed=k)
        t.add(err, R.form is form and err <= tol)
    return t


_RUNNERS = {
    "cm": suite_cm,
    "orth": suite_orth,
    "minval": suite_minval,
    "lemma": suite_lemma,
    "reconstruct": suite_reconstruct,
    "wigner": suite_wigner,
}


def run_suite(name, trials, seed, p=DEFAULT_P, n=3, **kwargs) -> SuiteReport:
    if name not in _RUNNERS:
        raise InvalidInput(f"unknown suite {name!r}")
    if trials < 1 or n < 2:
        raise InvalidInput("need trials >= 1 and n >= 2")
    if name == "lemma" and n > 6:
        raise InvalidInput("the exhaustive lemma oracle is limited to n <= 6")
    start = time.perf_counter()
    tally = _RUNNERS[name](trials, seed, p, n, **kwargs)
    return SuiteReport(name, trials, tally.failures, tally.worst, seed,
                       time.perf_counter() - start)
