"""Reference implementations of the compiled kernels (NumPy / pure Python)."""

import numpy as np

BACKEND = "python"


def is_subsequence(y, x):
    it = iter(x)
    return all(c in it for c in y)


def embedding_count(x, y):
    m = len(y)
    if m > len(x):
        return 0
    dp = [1] + [0] * m
    for i, c in enumerate(x):
        for j in range(min(m, i + 1), 0, -1):
            if c == y[j - 1]:
                dp[j] += dp[j - 1]
    return dp[m]


def fill_deletion_channel(n, d, out):
    size = 1 << n
    xs = np.arange(size, dtype=np.int64)
    rows = xs
    weight = np.array([d ** (n - k) * (1.0 - d) ** k for k in range(n + 1)])
    ncols = out.shape[1]
    flat = out.reshape(-1)
    for mask in range(size):
        y = np.zeros(size, dtype=np.int64)
        k = 0
        for j in range(n):
            if (mask >> j) & 1:
                y |= ((xs >> j) & 1) << k
                k += 1
        cols = (1 << k) - 1 + y
        # each (row, col) pair is distinct within one mask
        flat[rows * ncols + cols] += weight[k]


def fwht(a):
    n = a.shape[0]
    h = 1
    while h < n:
        v = a.reshape(-1, 2, h)
        lo = v[:, 0, :].copy()
        hi = v[:, 1, :]
        v[:, 0, :] += hi
        v[:, 1, :] = lo - hi
        h *= 2


def parse_phrases(bits):
    n = len(bits)
    start = 0
    phrases = []
    while start < n:
        flips = 0
        first_flip = 0
        i = start + 1
        while i < n:
            if bits[i] != bits[i - 1]:
                flips += 1
                if flips == 1:
                    first_flip = i - start + 1
                else:
                    break
            i += 1
        if flips < 2:
            break
        phrases.append((bits[start] - 48, first_flip, i - start + 1 - first_flip))
        start = i + 1
    return phrases, start


def _logsumexp_masked(v, mask, axis):
    m = np.max(np.where(mask, v, -np.inf), axis=axis, keepdims=True)
    s = np.sum(np.where(mask, np.exp(v - m), 0.0), axis=axis)
    return np.squeeze(m, axis=axis) + np.log(s)


def _g_bits(lpx, lpy, mask, px, py, lam, mu):
    expo = lpx[:, None] + lam[:, None] + lpy[None, :] + mu[None, :]
    mass = float(np.sum(np.exp(expo[mask])))
    return (1.0 - mass + float(np.dot(lam, px)) + float(np.dot(mu, py))) / np.log(2.0)


def dual_iterate(lpx, lpy, mask, lam, mu, k_max, rel_tol, trace):
    """Alternating dual updates, in place on ``lam``/``mu``.

    mu_y = -log sum_{x~y} P(x) e^{lam_x}, then lam_x = -log sum_{y~x} P(y) e^{mu_y},
    repeated ``k_max`` times or until a full step changes G by at most
    ``rel_tol * max(|G|, 1)``. ``trace[i]`` receives G after half-step i
    (in bits). Returns ``(k, converged)``.
    """
    mask = np.asarray(mask, dtype=bool)
    px = np.exp(lpx)
    py = np.exp(lpy)
    mu[:] = -_logsumexp_masked((lpx + lam)[:, None], mask, 0)
    trace[0] = _g_bits(lpx, lpy, mask, px, py, lam, mu)
    k = 0
    while k < k_max:
        lam[:] = -_logsumexp_masked((lpy + mu)[None, :], mask, 1)
        trace[2 * k + 1] = _g_bits(lpx, lpy, mask, px, py, lam, mu)
        mu[:] = -_logsumexp_masked((lpx + lam)[:, None], mask, 0)
        new = _g_bits(lpx, lpy, mask, px, py, lam, mu)
        trace[2 * k + 2] = new
        prev = trace[2 * k]
        k += 1
        if abs(new - prev) <= rel_tol * max(abs(new), 1.0):
            return k, True
    return k, False


def ipf_fit(px, py, p, max_iters, tol):
    """Rescale rows then columns of ``p`` in place until both marginals are within ``tol``.

    Returns ``(iterations, row_residual, column_residual, converged)``.
    """
    row_err = col_err = np.inf
    it = 0
    while it < max_iters:
        it += 1
        rs = p.sum(axis=1)
        p *= np.where(rs > 0, px / np.where(rs > 0, rs, 1.0), 1.0)[:, None]
        cs = p.sum(axis=0)
        p *= np.where(cs > 0, py / np.where(cs > 0, cs, 1.0), 1.0)[None, :]
        row_err = float(np.max(np.abs(p.sum(axis=1) - px)))
        if row_err <= tol:
            col_err = float(np.max(np.abs(p.sum(axis=0) - py)))
            if col_err <= tol:
                return it, row_err, col_err, True
    col_err = float(np.max(np.abs(p.sum(axis=0) - py)))
    return it, row_err, col_err, False
