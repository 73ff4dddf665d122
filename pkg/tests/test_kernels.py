"""Every kernel, on every backend, against a slow reference and against the other backend."""

import itertools
import math

import numpy as np
import pytest
from scipy.linalg import hadamard

from adjmi import kernels
from adjmi.sampling import random_joint

BACKENDS = ["python", "cython"]


@pytest.fixture(params=BACKENDS)
def impl(request):
    found = kernels.available_backends()
    if request.param not in found:
        pytest.skip(f"{request.param} backend not built")
    return found[request.param]


def _strings(n):
    return ["".join(b) for b in itertools.product("01", repeat=n)]


def test_default_backend_is_listed():
    assert kernels.BACKEND in kernels.available_backends()


def test_is_subsequence(impl):
    for n in range(6):
        for x in _strings(n):
            subs = {"".join(x[i] for i in idx) for m in range(n + 1) for idx in itertools.combinations(range(n), m)}
            for m in range(n + 2):
                for y in _strings(m):
                    assert kernels.is_subsequence(y, x, impl=impl) == (y in subs)


def test_embedding_count(impl):
    for n in range(7):
        for x in _strings(n):
            for m in range(n + 2):
                for y in _strings(m):
                    expected = sum(
                        1 for idx in itertools.combinations(range(n), m) if "".join(x[i] for i in idx) == y
                    )
                    assert kernels.embedding_count(x, y, impl=impl) == expected


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_deletion_channel_matrix(impl, n):
    d = 0.3
    ch = kernels.deletion_channel_matrix(n, d, impl=impl)
    assert np.allclose(ch.sum(axis=1), 1.0, atol=1e-14)
    for xi, x in enumerate(_strings(n)):
        for m in range(n + 1):
            for yi, y in enumerate(_strings(m)):
                cnt = kernels.embedding_count(x, y)
                assert ch[xi, (1 << m) - 1 + yi] == pytest.approx(cnt * (1 - d) ** m * d ** (n - m), abs=1e-15)


@pytest.mark.parametrize("n", [0, 1, 4, 8])
def test_fwht(impl, n, rng):
    a = rng.normal(size=1 << n)
    assert np.allclose(kernels.fwht(a, impl=impl), hadamard(1 << n) @ a, atol=1e-12)
    assert np.allclose(kernels.fwht(kernels.fwht(a, impl=impl), impl=impl) / (1 << n), a)


def test_parse_phrases_backends_agree(rng):
    found = kernels.available_backends()
    for _ in range(200):
        x = "".join(rng.choice(["0", "1"], size=int(rng.integers(0, 60))))
        results = {name: kernels.parse_phrases(x, impl=m) for name, m in found.items()}
        ref = results.pop("python")
        for other in results.values():
            assert [tuple(p) for p in other[0]] == [tuple(p) for p in ref[0]]
            assert other[1] == ref[1]


def _dual_inputs(rng):
    j = random_joint(rng, int(rng.integers(1, 7)), int(rng.integers(1, 7)), density=0.5)
    px, py = j.matrix.sum(axis=1), j.matrix.sum(axis=0)
    return np.log(px), np.log(py), j.matrix > 0


def test_dual_iterate_monotone(impl, rng):
    for _ in range(20):
        lpx, lpy, mask = _dual_inputs(rng)
        lam, mu, k, conv, trace = kernels.dual_iterate(lpx, lpy, mask, np.zeros(lpx.shape[0]), 200, 1e-13, impl=impl)
        assert trace.shape == (2 * k + 1,)
        assert np.all(np.diff(trace) >= -1e-12)
        assert np.all(np.isfinite(lam)) and np.all(np.isfinite(mu))


def test_dual_iterate_backends_agree(rng):
    found = kernels.available_backends()
    if len(found) < 2:
        pytest.skip("only one backend built")
    for _ in range(30):
        lpx, lpy, mask = _dual_inputs(rng)
        lam0 = np.zeros(lpx.shape[0])
        a = kernels.dual_iterate(lpx, lpy, mask, lam0, 500, 1e-12, impl=found["python"])
        b = kernels.dual_iterate(lpx, lpy, mask, lam0, 500, 1e-12, impl=found["cython"])
        assert np.allclose(a[4], b[4], atol=1e-12, rtol=0) and a[2] == b[2]
        assert np.allclose(a[0], b[0], atol=1e-9)


def test_ipf_fit(impl, rng):
    for _ in range(20):
        j = random_joint(rng, 4, 5, density=0.5)
        px, py = j.matrix.sum(axis=1), j.matrix.sum(axis=0)
        kernel = px[:, None] * py[None, :] * (j.matrix > 0)
        p, it, row_err, col_err, ok = kernels.ipf_fit(px, py, kernel, 10**6, 1e-13, impl=impl)
        assert ok and row_err <= 1e-13 and col_err <= 1e-13
        assert np.allclose(p.sum(axis=1), px, atol=1e-13)
        assert np.all(p[j.matrix == 0] == 0)
        _, _, _, _, ok1 = kernels.ipf_fit(px, py, kernel, 1, 1e-300, impl=impl)
        assert not ok1


def test_ipf_backends_agree(rng):
    found = kernels.available_backends()
    if len(found) < 2:
        pytest.skip("only one backend built")
    for _ in range(20):
        j = random_joint(rng, 5, 4, density=0.5)
        px, py = j.matrix.sum(axis=1), j.matrix.sum(axis=0)
        kernel = px[:, None] * py[None, :] * (j.matrix > 0)
        a = kernels.ipf_fit(px, py, kernel, 10**5, 1e-12, impl=found["python"])
        b = kernels.ipf_fit(px, py, kernel, 10**5, 1e-12, impl=found["cython"])
        assert np.allclose(a[0], b[0], atol=1e-12)


def test_embedding_count_overflow_route():
    # long inputs go through the arbitrary-precision path on every backend
    x = "0" * 70
    assert kernels.embedding_count(x, "0" * 35) == math.comb(70, 35)
