"""Finite-alphabet probability primitives.

Everything public is reported in bits. Zero-probability terms are skipped
rather than evaluated, so ``0 * log 0`` never reaches floating point.
"""

import math
from dataclasses import dataclass, field

import numpy as np

SUM_TOL = 1e-12


class AdjmiError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(AdjmiError, ValueError):
    """An input violates a documented precondition."""


class InfeasibleSupportError(ValidationError):
    """A positive-mass symbol has no adjacent partner."""


class SizeCapError(ValidationError):
    """An enumeration would exceed its configured size cap."""


class DomainError(ValidationError):
    """A function argument lies outside the function's domain."""


class ConvergenceError(AdjmiError, RuntimeError):
    """An iterative routine stopped before meeting its tolerance."""


def _freeze(a):
    a.setflags(write=False)
    return a


def _check_probs(arr, what):
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} contains non-finite entries")
    if np.any(arr < 0):
        raise ValidationError(f"{what} has negative entries")
    total = arr.sum()
    if abs(total - 1.0) > SUM_TOL:
        raise ValidationError(f"{what} sums to {total!r}, not 1")
    return arr / total


@dataclass(frozen=True, eq=False)
class FiniteDistribution:
    """Probability vector over ``range(len(probs))``."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.probs, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise ValidationError("empty distribution")
        object.__setattr__(self, "probs", _freeze(_check_probs(arr, "distribution")))

    @classmethod
    def from_weights(cls, weights):
        w = np.asarray(weights, dtype=np.float64).reshape(-1)
        if np.any(w < 0) or not np.all(np.isfinite(w)) or w.sum() <= 0:
            raise ValidationError("weights must be finite, non-negative and not all zero")
        return cls(w / w.sum())

    @classmethod
    def uniform(cls, k):
        return cls(np.full(k, 1.0 / k))

    @classmethod
    def bernoulli(cls, p):
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"Bernoulli parameter {p} outside [0, 1]")
        return cls([1.0 - p, p])

    def __len__(self):
        return self.probs.shape[0]

    def __repr__(self):
        return f"FiniteDistribution({self.probs.tolist()})"


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """|X| x |Y| probability matrix P(x, y)."""

    matrix: np.ndarray

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise ValidationError("joint must be a non-empty 2-D matrix")
        object.__setattr__(self, "matrix", _freeze(_check_probs(arr, "joint")))

    @classmethod
    def from_channel(cls, px, channel):
        px = _probs(px)
        channel = np.asarray(channel, dtype=np.float64)
        if channel.ndim != 2 or channel.shape[0] != px.shape[0]:
            raise ValidationError(
                f"channel shape {channel.shape} does not match input alphabet {px.shape[0]}"
            )
        return cls(px[:, None] * channel)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def px(self):
        return FiniteDistribution(self.matrix.sum(axis=1))

    @property
    def py(self):
        return FiniteDistribution(self.matrix.sum(axis=0))

    def __repr__(self):
        return f"JointDistribution(shape={self.shape})"


@dataclass(frozen=True, eq=False)
class AdjacencyProblem:
    """Marginals plus the boolean support mask ``x ~ y``.

    Construction fails if some symbol with positive mass has no adjacent
    partner of positive mass, since no joint could then match the marginals.
    """

    px: FiniteDistribution
    py: FiniteDistribution
    support: np.ndarray

    def __post_init__(self):
        px = self.px if isinstance(self.px, FiniteDistribution) else FiniteDistribution(self.px)
        py = self.py if isinstance(self.py, FiniteDistribution) else FiniteDistribution(self.py)
        s = np.array(self.support)
        if s.dtype != bool:
            if not np.all(np.isin(s, (0, 1))):
                raise ValidationError("support mask entries must be 0 or 1")
            s = s.astype(bool)
        if s.shape != (len(px), len(py)):
            raise ValidationError(
                f"support shape {s.shape} does not match marginals ({len(px)}, {len(py)})"
            )
        xpos = px.probs > 0
        ypos = py.probs > 0
        bad_rows = np.flatnonzero(xpos & ~(s & ypos[None, :]).any(axis=1))
        if bad_rows.size:
            raise InfeasibleSupportError(
                f"row x={bad_rows[0]} has positive mass but no adjacent y"
            )
        bad_cols = np.flatnonzero(ypos & ~(s & xpos[:, None]).any(axis=0))
        if bad_cols.size:
            raise InfeasibleSupportError(
                f"column y={bad_cols[0]} has positive mass but no adjacent x"
            )
        object.__setattr__(self, "px", px)
        object.__setattr__(self, "py", py)
        object.__setattr__(self, "support", _freeze(s))

    @property
    def shape(self):
        return self.support.shape


@dataclass(frozen=True)
class BoundReport:
    value_bits: float
    method: str
    iterations: int = 0
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.value_bits):
            raise ValidationError(f"{self.method}: bound value {self.value_bits} is not finite")


def _probs(d):
    if isinstance(d, FiniteDistribution):
        return d.probs
    return np.asarray(d, dtype=np.float64)


def _plogp_bits(p):
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def entropy(d):
    """Shannon entropy in bits of a distribution (or raw probability vector)."""
    return _plogp_bits(np.asarray(_probs(d), dtype=np.float64).reshape(-1))


def binary_entropy(p):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binary_entropy argument {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def binary_divergence(p, q):
    """D2(p || q) in bits; ``math.inf`` when p is not absolutely continuous."""
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise DomainError(f"binary_divergence arguments ({p}, {q}) outside [0, 1]")
    total = 0.0
    if p > 0:
        if q == 0:
            return math.inf
        total += p * math.log2(p / q)
    if p < 1:
        if q == 1:
            return math.inf
        total += (1.0 - p) * math.log2((1.0 - p) / (1.0 - q))
    return total


def kl_divergence(p, q):
    p = _probs(p)
    q = _probs(q)
    m = p > 0
    if np.any(q[m] == 0):
        return math.inf
    return float(np.sum(p[m] * np.log2(p[m] / q[m])))


def mutual_information(j):
    """Exact I(X;Y) in bits, summing only over cells with P(x,y) > 0."""
    m = j.matrix if isinstance(j, JointDistribution) else np.asarray(j, dtype=np.float64)
    px = m.sum(axis=1)
    py = m.sum(axis=0)
    xi, yi = np.nonzero(m > 0)
    p = m[xi, yi]
    return max(0.0, float(np.sum(p * np.log2(p / (px[xi] * py[yi])))))


def adjacency_of(j, zero_tol=0.0):
    if zero_tol < 0:
        raise ValidationError("zero_tol must be non-negative")
    return AdjacencyProblem(j.px, j.py, j.matrix > zero_tol)


def dv_objective(p, f, q):
    """log2 E_Q f + D(P||Q), the right-hand side of the variational formula."""
    q = _probs(q)
    return math.log2(float(np.dot(q, np.asarray(f, dtype=np.float64)))) + kl_divergence(p, q)


def dv_identity_check(p, f):
    """Evaluate both sides of the Donsker-Varadhan identity.

    Returns ``(lhs, rhs_at_qstar, qstar)`` with lhs = E_P log2 f and qstar
    the unique minimizer P/f normalized. By convention 1/f = 0 where f = 0,
    which is only allowed off the support of p.
    """
    pv = _probs(p)
    fv = np.asarray(f, dtype=np.float64).reshape(-1)
    if fv.shape != pv.shape:
        raise ValidationError("f must have one entry per symbol")
    on = pv > 0
    offenders = np.flatnonzero(on & ~(np.isfinite(fv) & (fv > 0)))
    if offenders.size:
        raise DomainError(f"f must be positive and finite on the support of p (x={offenders[0]})")
    lhs = float(np.sum(pv[on] * np.log2(fv[on])))
    inv = np.zeros_like(pv)
    inv[on] = pv[on] / fv[on]
    qstar = FiniteDistribution(inv / inv.sum())
    return lhs, dv_objective(pv, fv, qstar), qstar
