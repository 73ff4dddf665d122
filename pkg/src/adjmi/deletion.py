"""The binary i.i.d. deletion channel.

Finite-n objects (exact joints, subsequence tests, embedding counts) are
totals in bits; the asymptotic lower and upper bounds are per channel use.
Bit strings are ``str`` of '0'/'1'; integer encodings are most-significant
bit first, so ``int(s, 2)`` is the index of ``s``.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from adjmi import kernels
from adjmi.core import (
    BoundReport,
    DomainError,
    JointDistribution,
    SizeCapError,
    ValidationError,
    binary_divergence,
    binary_entropy,
)

LN2 = math.log(2.0)
FINITE_N_CAP = 12
T_HI_MAX = 1024.0
MEAN_PHRASE_LENGTH = 5.0


@dataclass(frozen=True)
class DeletionConfig:
    d: float = 0.5
    q: float = 0.5
    k1_max: int = 60
    k2_max: int = 60
    t_grid: int = 4000
    theta_grid: int = 2001
    t_hi: float = 4.0

    def __post_init__(self):
        if not (0.0 <= self.d <= 1.0 and 0.0 <= self.q <= 1.0):
            raise DomainError(f"d={self.d} and q={self.q} must lie in [0, 1]")
        if self.k1_max < 2 or self.k2_max < 1:
            raise ValidationError("need k1_max >= 2 and k2_max >= 1")
        if self.t_grid < 2 or self.theta_grid < 2:
            raise ValidationError("grids need at least 2 points")
        if not self.t_hi > 0:
            raise ValidationError("t_hi must be positive")


DEFAULT_CONFIG = DeletionConfig()


@dataclass(frozen=True)
class PhraseHistogram:
    """Complete phrases of a parsed string, as (b, k1, k2) in order and as counts."""

    phrases: tuple
    counts: dict
    length: int
    trailing_start: int

    @property
    def n_phrases(self):
        return len(self.phrases)

    @property
    def trailing_length(self):
        return self.length - self.trailing_start


@dataclass(frozen=True)
class RateResult:
    value: float
    argmax_t: float
    tail_bound: float
    at_zero: bool


# ---------------------------------------------------------------- combinatorics


def _bits(s, what="bit string"):
    if not isinstance(s, str) or (s and set(s) - {"0", "1"}):
        raise ValidationError(f"{what} must be a str of '0'/'1' characters")
    return s


def greedy_is_subsequence(y, x):
    """Left-to-right earliest-match test: True iff y is a subsequence of x."""
    return kernels.is_subsequence(_bits(y), _bits(x))


def supersequence_count(m, n):
    """Number of length-n binary strings containing a fixed length-m string."""
    if not 0 <= m <= n:
        raise DomainError(f"need 0 <= m <= n, got m={m}, n={n}")
    return sum(math.comb(n, j) for j in range(m, n + 1))


def embedding_count(x, y):
    """Number of index sets that realize y as a subsequence of x."""
    return kernels.embedding_count(_bits(x), _bits(y))


def output_index(y):
    """Column of output string ``y`` in :func:`finite_n_joint`."""
    return (1 << len(y)) - 1 + (int(y, 2) if y else 0)


def output_string(col):
    length = (col + 1).bit_length() - 1
    val = col - ((1 << length) - 1)
    return format(val, f"0{length}b") if length else ""


def finite_n_joint(n, d, q):
    """Exact joint of a length-n Bern(q) i.i.d. input through the deletion channel.

    Rows are inputs ``int(x, 2)``; columns are all outputs of length 0..n in
    the order given by :func:`output_index`.
    """
    if not 1 <= n <= FINITE_N_CAP:
        raise SizeCapError(f"finite-n joint supports 1 <= n <= {FINITE_N_CAP}, got {n}")
    if not (0.0 <= d <= 1.0 and 0.0 <= q <= 1.0):
        raise DomainError(f"d={d} and q={q} must lie in [0, 1]")
    ch = kernels.deletion_channel_matrix(n, d)
    ones = np.array([bin(x).count("1") for x in range(1 << n)])
    px = q**ones * (1.0 - q) ** (n - ones)
    return JointDistribution.from_channel(px / px.sum(), ch)


def parse_phrases(x):
    """Split x into phrases with exactly two bit flips, each ending right after the second."""
    bits = _bits(x)
    phrases, trailing = kernels.parse_phrases(bits)
    phrases = tuple((int(b), int(k1), int(k2)) for b, k1, k2 in phrases)
    counts = {}
    for _, k1, k2 in phrases:
        counts[(k1, k2)] = counts.get((k1, k2), 0) + 1
    return PhraseHistogram(phrases, counts, len(bits), int(trailing))


def phrase_probability(k1, k2):
    """Probability that a random phrase of a uniform i.i.d. string has type (k1, k2)."""
    return 2.0 ** -(k1 + k2 - 1)


# ------------------------------------------------------------ phrase MGF


def _check_k(k1, k2):
    if int(k1) != k1 or int(k2) != k2 or k1 < 2 or k2 < 1:
        raise DomainError(f"phrase type needs integers k1 >= 2, k2 >= 1, got ({k1}, {k2})")


def _geometric_sum(r, k):
    """sum_{m=1}^{k} r^m."""
    if abs(r - 1.0) < 1e-4:
        return math.fsum(r**m for m in range(1, k + 1))
    return r * (1.0 - r**k) / (1.0 - r)


def phrase_mgf(k1, k2, t):
    """E[2^{tZ}] for the matched-bit count Z of a (k1, k2) phrase, closed form.

    Near t = 1 the ratio (1 - r^k)/(1 - r) with r = 2^{t-1} is replaced by
    its explicit finite sum to avoid the 0/0.
    """
    _check_k(k1, k2)
    r = 2.0 ** (t - 1.0)
    return r**k1 + _geometric_sum(r, k1) * (_geometric_sum(r, k2) + 2.0 ** (k2 * (t - 1.0) - t))


def log2_phrase_mgf(k1, k2, t):
    """log2 of :func:`phrase_mgf` evaluated entirely in the log domain (no overflow)."""
    _check_k(k1, k2)
    return float(_log_mgf_table(np.array([float(t)]), k1, k2)[0, k1 - 2, k2 - 1]) / LN2


def _log_mgf_table(ts, k1_max, k2_max):
    """Natural log of the MGF for every t in ``ts`` and every k1<=k1_max, k2<=k2_max."""
    ts = np.asarray(ts, dtype=np.float64)[:, None]
    u = (ts - 1.0) * LN2
    kmax = max(k1_max, k2_max)
    m = np.arange(1, kmax + 1, dtype=np.float64)[None, :]
    log_s = np.logaddexp.accumulate(u * m, axis=1)  # ln sum_{j<=k} 2^{(t-1) j}
    k1 = np.arange(2, k1_max + 1)
    k2 = np.arange(1, k2_max + 1)
    a = (u * k1[None, :])[:, :, None]
    s1 = log_s[:, k1 - 1][:, :, None]
    s2 = log_s[:, k2 - 1][:, None, :]
    tail = (u * k2[None, :] - ts * LN2)[:, None, :]
    return np.logaddexp(a, s1 + np.logaddexp(s2, tail))


@lru_cache(maxsize=8)
def _weights(k1_max, k2_max):
    k1 = np.arange(2, k1_max + 1)[:, None]
    k2 = np.arange(1, k2_max + 1)[None, :]
    return 2.0 ** -(k1 + k2 - 1).astype(np.float64)


@lru_cache(maxsize=8)
def _omitted_length_mass(k1_max, k2_max):
    """sum of w(k1,k2)(k1+k2) over the types dropped by truncation."""
    hi = max(k1_max, k2_max) + 120
    k1 = np.arange(2, hi + 1)[:, None]
    k2 = np.arange(1, hi + 1)[None, :]
    w = 2.0 ** -(k1 + k2 - 1).astype(np.float64) * (k1 + k2)
    keep = (k1 <= k1_max) & (k2 <= k2_max)
    return float(w[~keep].sum())


def weighted_log_mgf(t, cfg=DEFAULT_CONFIG):
    """(1/5) sum_{k1,k2} 2^{-(k1+k2-1)} log2 MGF(t), truncated per ``cfg``; vectorized in t."""
    ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
    w = _weights(cfg.k1_max, cfg.k2_max)
    out = np.empty(ts.shape[0])
    step = 256
    for i in range(0, ts.shape[0], step):
        tab = _log_mgf_table(ts[i : i + step], cfg.k1_max, cfg.k2_max)
        out[i : i + step] = np.einsum("tij,ij->t", tab, w) / LN2 / MEAN_PHRASE_LENGTH
    return out if np.ndim(t) else float(out[0])


def _tail_bound(t, cfg):
    return t / MEAN_PHRASE_LENGTH * _omitted_length_mass(cfg.k1_max, cfg.k2_max)


# ---------------------------------------------------------------- rate function


@lru_cache(maxsize=8)
def _t_table(cfg):
    """t-grid on (0, t_hi] plus a geometric extension up to T_HI_MAX, with F(t)."""
    base = np.linspace(cfg.t_hi / cfg.t_grid, cfg.t_hi, cfg.t_grid)
    ext = []
    hi = cfg.t_hi
    while hi < T_HI_MAX:
        ext.append(np.linspace(hi, 2 * hi, 65)[1:])
        hi *= 2
    ts = np.concatenate([base] + ext) if ext else base
    return ts, weighted_log_mgf(ts, cfg)


def _rate_refine(theta, ts, fs, i, cfg):
    lo = ts[i - 1] if i > 0 else 0.0
    hi = ts[i + 1] if i + 1 < ts.shape[0] else ts[i]
    best_t, best = float(ts[i]), float(theta * ts[i] - fs[i])
    if hi > lo:
        res = minimize_scalar(
            lambda t: -(theta * t - weighted_log_mgf(t, cfg)),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        if -res.fun > best:
            best_t, best = float(res.x), float(-res.fun)
    return best_t, best


def lambda_star(theta, cfg=DEFAULT_CONFIG, full=False):
    """Rate function sup_{t>0} theta*t - F(t) with F the weighted phrase log-MGF.

    Grid scan on (0, t_hi]; if the maximum sits at the right edge the scan
    continues over doubling intervals up to t = 1024 before a bounded
    scalar refinement between the neighbouring grid points.
    """
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta={theta} outside [0, 1]")
    ts, fs = _t_table(cfg)
    vals = theta * ts - fs
    i = int(np.argmax(vals))
    if vals[i] <= 0.0:
        res = RateResult(0.0, 0.0, 0.0, True)
    else:
        t_star, value = _rate_refine(theta, ts, fs, i, cfg)
        res = RateResult(max(value, 0.0), t_star, _tail_bound(t_star, cfg), False)
    return res if full else res.value


@lru_cache(maxsize=8)
def _rate_on_theta_grid(cfg):
    ts, fs = _t_table(cfg)
    thetas = np.linspace(0.0, 1.0, cfg.theta_grid)
    rates = np.empty_like(thetas)
    for lo in range(0, thetas.shape[0], 128):
        chunk = thetas[lo : lo + 128, None] * ts[None, :] - fs[None, :]
        rates[lo : lo + 128] = np.maximum(chunk.max(axis=1), 0.0)
    return thetas, rates


def _g_objective(theta, d, rate):
    return binary_divergence(theta, 1.0 - d) - (1.0 - binary_entropy(max(theta, 0.5))) + rate


def g_of_d(d, cfg=DEFAULT_CONFIG, full=False):
    """min over theta of D2(theta||1-d) - (1 - h(max(theta, 1/2))) + rate(theta)."""
    if not 0.0 < d < 1.0:
        raise DomainError(f"d={d} outside (0, 1)")
    thetas, rates = _rate_on_theta_grid(cfg)
    div = np.array([binary_divergence(th, 1.0 - d) for th in thetas])
    ent = np.array([binary_entropy(max(th, 0.5)) for th in thetas])
    obj = div - (1.0 - ent) + rates
    i = int(np.argmin(obj))

    def exact(th):
        return _g_objective(th, d, lambda_star(th, cfg))

    best_th = float(thetas[i])
    best = exact(best_th)
    lo = float(thetas[max(i - 1, 0)])
    hi = float(thetas[min(i + 1, thetas.shape[0] - 1)])
    res = minimize_scalar(exact, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    if res.fun < best:
        best_th, best = float(res.x), float(res.fun)
    if not full:
        return best
    rate = lambda_star(best_th, cfg, full=True)
    return best, {"argmin_theta": best_th, "argmax_t": rate.argmax_t, "tail_bound": rate.tail_bound}


def deletion_lower_bound(d, cfg=DEFAULT_CONFIG):
    """Per-symbol lower bound 1 - h(min(d, 1/2)) + g(d) for uniform i.i.d. input."""
    g, diag = g_of_d(d, cfg, full=True)
    base = 1.0 - binary_entropy(min(d, 0.5))
    diag = dict(diag, g=g, first_term=base, k1_max=float(cfg.k1_max), k2_max=float(cfg.k2_max))
    return BoundReport(base + g, "deletion_lower", 0, diag)


# ---------------------------------------------------------------- upper bound


def _check_dq(d, q):
    if not 0.0 < d < 1.0:
        raise DomainError(f"d={d} outside (0, 1)")
    if not 0.0 < q <= 0.5:
        raise DomainError(f"q={q} outside (0, 1/2]")


def rho_star(d, q):
    """Stationary point of gamma(., d, q), clamped to [0, min(1, d/(1-d))]."""
    _check_dq(d, q)
    r = (1.0 - q) / (2.0 * q * (1.0 - d)) * (math.sqrt(1.0 + 4.0 * d * (1.0 - d) * q / (1.0 - q)) - 1.0)
    return min(max(r, 0.0), min(1.0, d / (1.0 - d)))


def gamma(rho, d, q):
    _check_dq(d, q)
    hi = min(1.0, d / (1.0 - d))
    if not 0.0 <= rho <= hi + 1e-15:
        raise DomainError(f"rho={rho} outside [0, {hi}]")
    inner = min(rho * (1.0 - d) / d, 1.0)
    return (1.0 - d) * (binary_entropy(min(rho, 1.0)) + rho * math.log2(1.0 - q)) + d * binary_entropy(inner)


def deletion_upper_bound(d, q=0.5):
    """Per-symbol upper bound (1-d)h(q) - h(d) + gamma(rho*) for Bern(q) i.i.d. input."""
    r = rho_star(d, q)
    g = gamma(r, d, q)
    value = (1.0 - d) * binary_entropy(q) - binary_entropy(d) + g
    return BoundReport(value, "deletion_upper", 0, {"rho_star": r, "gamma": g})


def dsv_upper_bound(d, q=0.5):
    if not (0.0 <= d <= 1.0 and 0.0 <= q <= 1.0):
        raise DomainError(f"d={d} and q={q} must lie in [0, 1]")
    return (1.0 - d) * (binary_entropy(q) - 2.0 * d * q * (1.0 - q))


SWEEP_HEADER = (
    "d",
    "gallager_lower",
    "new_lower",
    "improvement_ratio",
    "new_upper",
    "dsv_upper",
    "trivial_upper",
)


def deletion_sweep(d_grid, cfg=DEFAULT_CONFIG, q=0.5):
    """Rows (d, 1-h(d), lower, lower/(1-h(d)), upper@q, dsv@q, 1-d) in ascending d."""
    rows = []
    for d in sorted(float(v) for v in d_grid):
        gal = 1.0 - binary_entropy(d)
        low = deletion_lower_bound(d, cfg).value_bits
        ratio = low / gal if gal > 0 else math.nan
        rows.append((d, gal, low, ratio, deletion_upper_bound(d, q).value_bits, dsv_upper_bound(d, q), 1.0 - d))
    return rows
