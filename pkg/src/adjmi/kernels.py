"""Hot inner loops, backed by the Cython extension when it is importable.

Set ``ADJMI_PURE_PYTHON=1`` to force the NumPy/pure-Python fallback. Both
backends expose the same functions and must agree exactly; ``BACKEND``
names the one in use.
"""

import os

import numpy as np

from adjmi import _pykernels

if os.environ.get("ADJMI_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from adjmi import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND


def available_backends():
    """Return ``{name: module}`` for every importable backend."""
    out = {"python": _pykernels}
    try:
        from adjmi import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out


def _as_bytes(s):
    if isinstance(s, bytes):
        return s
    if isinstance(s, str):
        return s.encode("ascii")
    return bytes(bytearray(s))


def is_subsequence(y, x, impl=None):
    impl = impl or _impl
    return bool(impl.is_subsequence(_as_bytes(y), _as_bytes(x)))


def embedding_count(x, y, impl=None):
    impl = impl or _impl
    xb = _as_bytes(x)
    if len(xb) > 62:
        impl = _pykernels
    return int(impl.embedding_count(xb, _as_bytes(y)))


def deletion_channel_matrix(n, d, impl=None):
    """Dense P(y|x) of the i.i.d. deletion channel on length-n inputs."""
    impl = impl or _impl
    out = np.zeros((1 << n, (1 << (n + 1)) - 1))
    impl.fill_deletion_channel(int(n), float(d), out)
    return out


def fwht(a, impl=None):
    """Unnormalized Walsh-Hadamard transform; returns a new array."""
    impl = impl or _impl
    out = np.array(a, dtype=np.float64, copy=True)
    impl.fwht(out)
    return out


def parse_phrases(bits, impl=None):
    impl = impl or _impl
    return impl.parse_phrases(_as_bytes(bits))


def dual_iterate(lpx, lpy, mask, lam, k_max, rel_tol, impl=None):
    """Run the alternating dual recursion from ``lam``.

    Returns ``(lam, mu, k, converged, trace)`` with ``trace`` the 2k+1
    half-step objective values in bits.
    """
    impl = impl or _impl
    lpx = np.ascontiguousarray(lpx, dtype=np.float64)
    lpy = np.ascontiguousarray(lpy, dtype=np.float64)
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    lam = np.array(lam, dtype=np.float64, copy=True)
    mu = np.zeros(lpy.shape[0])
    trace = np.empty(2 * int(k_max) + 1)
    k, converged = impl.dual_iterate(lpx, lpy, mask, lam, mu, int(k_max), float(rel_tol), trace)
    return lam, mu, int(k), bool(converged), trace[: 2 * int(k) + 1].copy()


def ipf_fit(px, py, kernel, max_iters, tol, impl=None):
    """Iterative proportional fitting of ``kernel`` to the marginals.

    Returns ``(fitted, iterations, row_residual, column_residual, converged)``.
    """
    impl = impl or _impl
    px = np.ascontiguousarray(px, dtype=np.float64)
    py = np.ascontiguousarray(py, dtype=np.float64)
    p = np.array(kernel, dtype=np.float64, copy=True, order="C")
    it, row_err, col_err, ok = impl.ipf_fit(px, py, p, int(max_iters), float(tol))
    return p, int(it), float(row_err), float(col_err), bool(ok)
