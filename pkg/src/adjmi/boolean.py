"""Fourier-analytic upper bounds on I(Y; f(X)) for X uniform on {0,1}^n and Y = X xor Z.

Truth tables are indexed little-endian: entry ``i`` is f at the input whose
bit j equals ``(i >> j) & 1``. Values use the +1/-1 encoding (bit 0 -> +1,
bit 1 -> -1). Shift vectors w are encoded the same way: bit j of the index
set means w_j = -1.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from adjmi import kernels
from adjmi.core import (
    BoundReport,
    DomainError,
    SizeCapError,
    ValidationError,
    _freeze,
    binary_entropy,
    mutual_information,
)

FOURIER_CAP = 24
EXACT_CAP = 12
SWEEP_CAP = 4


def _popcounts(n):
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        out += (idx >> j) & 1
    return out


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    n: int
    truth_table: np.ndarray

    def __post_init__(self):
        tt = np.array(self.truth_table, dtype=np.float64).reshape(-1)
        if self.n < 0 or tt.shape[0] != 1 << self.n:
            raise ValidationError(f"truth table has {tt.shape[0]} entries, expected 2^{self.n}")
        if not np.all(np.abs(tt) == 1.0):
            raise ValidationError("truth table entries must be +1 or -1")
        object.__setattr__(self, "truth_table", _freeze(tt))

    @classmethod
    def from_bits(cls, bits):
        """From a sequence (or '0'/'1' string) of 0/1 outputs in little-endian input order."""
        if isinstance(bits, str):
            if set(bits) - {"0", "1"}:
                raise ValidationError("truth-table string must contain only '0' and '1'")
            vals = [int(c) for c in bits]
        else:
            vals = [int(v) for v in bits]
            if set(vals) - {0, 1}:
                raise ValidationError("truth-table bits must be 0 or 1")
        size = len(vals)
        n = size.bit_length() - 1
        if size == 0 or size != 1 << n:
            raise ValidationError(f"truth table length {size} is not a power of two")
        return cls(n, 1.0 - 2.0 * np.array(vals, dtype=np.float64))

    @classmethod
    def dictator(cls, n, i):
        if not 0 <= i < n:
            raise ValidationError(f"coordinate {i} outside [0, {n})")
        idx = np.arange(1 << n)
        return cls(n, 1.0 - 2.0 * ((idx >> i) & 1))

    @classmethod
    def constant(cls, n, value=1):
        return cls(n, np.full(1 << n, float(value)))

    @classmethod
    def majority(cls, n):
        if n % 2 == 0:
            raise ValidationError("majority needs an odd number of inputs")
        return cls(n, np.where(_popcounts(n) > n // 2, -1.0, 1.0))

    def to_bits(self):
        return "".join("1" if v < 0 else "0" for v in self.truth_table)


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    n: int
    coefficients: np.ndarray

    def __getitem__(self, mask):
        return float(self.coefficients[mask])

    def parseval_sum(self):
        return float(np.sum(self.coefficients**2))


def _check_cap(f, cap):
    if f.n > cap:
        raise SizeCapError(f"n={f.n} exceeds the cap n <= {cap}")


def _check_alpha(alpha, open_zero):
    if open_zero and not 0.0 < alpha <= 0.5:
        raise DomainError(f"alpha={alpha} outside (0, 1/2]")
    if not 0.0 <= alpha <= 0.5:
        raise DomainError(f"alpha={alpha} outside [0, 1/2]")


def fourier_spectrum(f):
    _check_cap(f, FOURIER_CAP)
    coeffs = kernels.fwht(f.truth_table) / float(1 << f.n)
    return FourierSpectrum(f.n, _freeze(coeffs))


def agreement_all(f, alpha):
    """P(f(X xor w xor Z) = f(X)) for every shift w, via one inverse butterfly."""
    _check_alpha(alpha, open_zero=False)
    spec = fourier_spectrum(f)
    c = spec.coefficients**2 * (1.0 - 2.0 * alpha) ** _popcounts(f.n)
    return (1.0 + kernels.fwht(c)) / 2.0


def agreement_prob(f, alpha, w):
    """Agreement probability for one shift vector ``w`` in {-1, +1}^n."""
    w = np.asarray(w)
    if w.shape != (f.n,) or not np.all(np.abs(w) == 1):
        raise ValidationError(f"w must be a length-{f.n} vector of +1/-1")
    idx = int(sum(1 << j for j in range(f.n) if w[j] < 0))
    return float(agreement_all(f, alpha)[idx])


def _shift_weights(n, alpha):
    k = _popcounts(n)
    return alpha**k * (1.0 - alpha) ** (n - k)


def _output_entropy(spec):
    return binary_entropy(min(max((1.0 - spec.coefficients[0]) / 2.0, 0.0), 1.0))


def cor1_upper(f, alpha):
    """H(f) - 1 + E_W log2(1 + sum_S fhat(S)^2 (1-2a)^|S| prod_{i in S} W_i)."""
    _check_alpha(alpha, open_zero=True)
    _check_cap(f, FOURIER_CAP)
    spec = fourier_spectrum(f)
    corr = 2.0 * agreement_all(f, alpha)
    h_f = _output_entropy(spec)
    e_w = float(np.dot(_shift_weights(f.n, alpha), np.log2(corr)))
    return BoundReport(h_f - 1.0 + e_w, "cor1", 0, {"H_f": h_f, "expected_log_term": e_w})


def _bsc_smooth(v, n, alpha):
    """Apply the n-fold BSC(alpha) kernel: out[y] = sum_x P(x xor y) v[x]."""
    out = np.array(v, dtype=np.float64, copy=True)
    for j in range(n):
        view = out.reshape(-1, 2, 1 << j)
        a = view[:, 0, :].copy()
        b = view[:, 1, :].copy()
        view[:, 0, :] = (1.0 - alpha) * a + alpha * b
        view[:, 1, :] = alpha * a + (1.0 - alpha) * b
    return out


def _autocorrelation(f):
    """A(v) = P_X(f(X xor v) = f(X)), by direct enumeration (n <= 12) or XOR convolution."""
    tt = f.truth_table
    size = tt.shape[0]
    if f.n <= EXACT_CAP:
        idx = np.arange(size)
        return np.array([np.mean(tt[idx ^ v] == tt) for v in range(size)])
    spec = kernels.fwht(tt)
    return (1.0 + kernels.fwht(spec * spec) / float(size) ** 2) / 2.0


def thm7_upper(f, alpha):
    """H(f(X)) + E_W log2 P(f(X xor W xor Z) = f(X)) computed in the probability domain."""
    _check_alpha(alpha, open_zero=True)
    _check_cap(f, FOURIER_CAP)
    p_minus = float(np.mean(f.truth_table < 0))
    h_f = binary_entropy(p_minus)
    agree = _bsc_smooth(_autocorrelation(f), f.n, alpha)
    weights = _bsc_smooth(np.eye(1, 1 << f.n).reshape(-1), f.n, alpha)  # P(W = w)
    e_w = float(np.dot(weights, np.log2(agree)))
    return BoundReport(h_f + e_w, "thm7", 0, {"H_f": h_f, "expected_log_agreement": e_w})


def exact_mi_boolean(f, alpha):
    """Exact I(Y; f(X)) from the 2^n x 2 joint of (Y, f(X))."""
    _check_alpha(alpha, open_zero=False)
    _check_cap(f, EXACT_CAP)
    size = 1 << f.n
    cols = [_bsc_smooth((f.truth_table == s).astype(np.float64), f.n, alpha) / size for s in (1.0, -1.0)]
    return mutual_information(np.stack(cols, axis=1))


def exhaustive_sweep(n, alpha):
    """Every boolean function on n <= 4 inputs: rows (bits, H_f, cor1 bound, exact MI)."""
    if not 0 <= n <= SWEEP_CAP:
        raise SizeCapError(f"exhaustive sweep supports n <= {SWEEP_CAP}")
    _check_alpha(alpha, open_zero=True)
    rows = []
    for bits in itertools.product("01", repeat=1 << n):
        f = BooleanFunction.from_bits("".join(bits))
        rep = cor1_upper(f, alpha)
        rows.append(("".join(bits), rep.diagnostics["H_f"], rep.value_bits, exact_mi_boolean(f, alpha)))
    return rows
