"""Worked channels: BEC, BSC and the symmetric Z channel.

The Z-channel reference values are written out as closed forms and share
nothing with :mod:`adjmi.bounds` except :func:`binary_entropy`, so comparing
the two is a genuine cross-check.
"""

import math
from dataclasses import dataclass

import numpy as np

from adjmi.actions import ActionModel
from adjmi.core import (
    DomainError,
    FiniteDistribution,
    JointDistribution,
    ValidationError,
    _freeze,
    _probs,
    binary_entropy,
)

ERASURE = 2  # BEC output alphabet is (0, 1, erasure)


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    """Row-stochastic matrix of P(y|x)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.size == 0:
            raise ValidationError("channel must be a non-empty 2-D matrix")
        if np.any(m < 0) or np.any(m > 1) or not np.all(np.isfinite(m)):
            raise ValidationError("channel entries must lie in [0, 1]")
        bad = np.flatnonzero(np.abs(m.sum(axis=1) - 1.0) > 1e-12)
        if bad.size:
            raise ValidationError(f"channel row {bad[0]} does not sum to 1")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def shape(self):
        return self.matrix.shape


def _check_unit(name, v):
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"{name}={v} outside [0, 1]")


def bec(eps):
    _check_unit("eps", eps)
    return ChannelSpec([[1 - eps, 0.0, eps], [0.0, 1 - eps, eps]])


def bsc(p):
    _check_unit("p", p)
    return ChannelSpec([[1 - p, p], [p, 1 - p]])


def z_channel():
    return ChannelSpec([[1.0, 0.0], [0.5, 0.5]])


def joint_of(px, c):
    pxv = _probs(px)
    m = c.matrix if isinstance(c, ChannelSpec) else np.asarray(c, dtype=np.float64)
    if m.shape[0] != pxv.shape[0]:
        raise ValidationError(
            f"input distribution has {pxv.shape[0]} symbols but channel has {m.shape[0]} rows"
        )
    return JointDistribution(pxv[:, None] * m)


# natural action models; maps are output indices per input (x=0, x=1)

def bsc_xor_actions(p):
    """A(X) = X xor Z with Z ~ Bern(p)."""
    _check_unit("p", p)
    return ActionModel([[0, 1], [1, 0]], FiniteDistribution([1 - p, p]), n_outputs=2)


def bsc_ternary_actions(p):
    """Force 0 w.p. p, force 1 w.p. p, pass X through w.p. 1 - 2p."""
    if not 0.0 <= p <= 0.5:
        raise DomainError(f"ternary BSC model needs p in [0, 1/2], got {p}")
    return ActionModel(
        [[0, 0], [1, 1], [0, 1]], FiniteDistribution([p, p, 1 - 2 * p]), n_outputs=2
    )


def z_actions():
    """Identity or constant 0, each with probability 1/2."""
    return ActionModel([[0, 1], [0, 0]], FiniteDistribution([0.5, 0.5]), n_outputs=2)


def bec_actions(eps):
    """Identity w.p. 1 - eps, erase everything w.p. eps."""
    _check_unit("eps", eps)
    return ActionModel(
        [[0, 1], [ERASURE, ERASURE]], FiniteDistribution([1 - eps, eps]), n_outputs=3
    )


def z_reference_values(p):
    """Closed forms for the Z channel with X ~ Bern(p).

    Returns ``(simple, thm1, conv1, exact)``: the adjacency baseline, the
    two-term adjacency bound, the bound after one more dual iteration, and
    the exact mutual information h(p/2) - p.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    if p == 0.0:
        return 0.0, 0.0, 0.0, 0.0
    lg = math.log2
    simple = -p / 2 * lg(p)
    thm1 = 1 - p / 2 * lg(p) - (1 - p) * lg(2 - p) - p * lg(3 - p)
    conv1 = p / 2 * lg(2 - p) + (1 - p) * lg(3 - p) - p / 2 * lg(p) - (1 - p / 2) * lg(3 - 2 * p)
    exact = binary_entropy(p / 2) - p
    return simple, thm1, conv1, exact


def figure1_data(p_grid):
    return [(float(p), *z_reference_values(float(p))) for p in p_grid]
