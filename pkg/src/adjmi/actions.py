"""Channels as random deterministic maps ("actions") drawn independently of X.

An :class:`ActionModel` lists maps ``a: X -> Y`` as rows of output indices
together with their probabilities; the channel it realizes is
``P(y|x) = sum of P(a) over a with a(x) = y``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from adjmi.core import (
    FiniteDistribution,
    JointDistribution,
    SizeCapError,
    ValidationError,
    _freeze,
    _probs,
    entropy,
)

DEFAULT_CAP = 10**6


class UnreachablePairError(ValidationError):
    """No positive-probability action maps x to y."""


@dataclass(frozen=True, eq=False)
class ActionModel:
    maps: np.ndarray
    probs: FiniteDistribution
    n_outputs: int = None

    def __post_init__(self):
        maps = np.array(self.maps, dtype=np.int64)
        if maps.ndim != 2 or maps.shape[0] == 0:
            raise ValidationError("maps must be a non-empty 2-D table (actions x inputs)")
        probs = self.probs
        if not isinstance(probs, FiniteDistribution):
            probs = FiniteDistribution(probs)
        if len(probs) != maps.shape[0]:
            raise ValidationError(f"{maps.shape[0]} maps but {len(probs)} probabilities")
        n_out = int(maps.max()) + 1 if self.n_outputs is None else int(self.n_outputs)
        if maps.min() < 0 or maps.max() >= n_out:
            raise ValidationError(f"map entries must lie in [0, {n_out})")
        object.__setattr__(self, "maps", _freeze(maps))
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "n_outputs", n_out)

    @property
    def n_actions(self):
        return self.maps.shape[0]

    @property
    def n_inputs(self):
        return self.maps.shape[1]

    def is_uniform(self):
        p = self.probs.probs
        pos = p[p > 0]
        return bool(np.all(pos == pos[0]))

    def __repr__(self):
        return (
            f"ActionModel(n_actions={self.n_actions}, n_inputs={self.n_inputs}, "
            f"n_outputs={self.n_outputs})"
        )


@dataclass(frozen=True)
class ActionSetIndex:
    """For each (x, y), the positive-probability actions with a(x) = y."""

    members: tuple
    counts: np.ndarray

    def __getitem__(self, xy):
        x, y = xy
        return self.members[x][y]


def action_set_index(m):
    live = np.flatnonzero(m.probs.probs > 0)
    members = tuple(
        tuple(tuple(int(a) for a in live[m.maps[live, x] == y]) for y in range(m.n_outputs))
        for x in range(m.n_inputs)
    )
    counts = np.array([[len(s) for s in row] for row in members], dtype=np.int64)
    return ActionSetIndex(members, _freeze(counts))


def induced_channel(m):
    out = np.zeros((m.n_inputs, m.n_outputs))
    p = m.probs.probs
    for x in range(m.n_inputs):
        out[x] = np.bincount(m.maps[:, x], weights=p, minlength=m.n_outputs)
    return out


def joint_of_actions(px, m):
    return JointDistribution.from_channel(px, induced_channel(m))


def _enumerate_maps(choices, cap):
    """All tuples picking one entry of ``choices[x]`` per input, x=0 most significant."""
    total = math.prod(len(c) for c in choices)
    if total > cap:
        raise SizeCapError(f"action set would have {total} actions (cap {cap})")
    if total == 0:
        raise ValidationError("some input has no admissible output")
    grids = np.meshgrid(*[np.asarray(c, dtype=np.int64) for c in choices], indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


def generic_action_set(channel, cap=DEFAULT_CAP, support_only=False):
    """Every function X -> Y with product probabilities prod_x P(a(x)|x).

    With ``support_only`` the zero-probability functions are never built;
    the bound values are unchanged but far fewer actions are enumerated.
    """
    ch = np.asarray(channel, dtype=np.float64)
    if ch.ndim != 2:
        raise ValidationError("channel must be a 2-D matrix")
    nx, ny = ch.shape
    if support_only:
        choices = [np.flatnonzero(ch[x] > 0) for x in range(nx)]
    else:
        choices = [np.arange(ny)] * nx
    maps = _enumerate_maps(choices, cap)
    probs = np.prod(ch[np.arange(nx)[None, :], maps], axis=1)
    return ActionModel(maps, FiniteDistribution(probs / probs.sum()), n_outputs=ny)


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError as exc:
            raise ValidationError(f"cannot parse {v!r} as a rational number") from exc
    raise ValidationError(
        f"{v!r} is not an exact rational; pass fractions.Fraction, int or 'p/q' strings"
    )


def uniformize(maps, probs, cap=DEFAULT_CAP, n_outputs=None):
    """Duplicate actions so that every copy carries probability 1/D.

    ``probs`` must be exact rationals. D is the least common denominator
    of the positive probabilities and action i is repeated ``P(a_i) * D``
    times; zero-probability actions are dropped.
    """
    fr = [_as_fraction(p) for p in probs]
    if any(p < 0 for p in fr) or sum(fr) != 1:
        raise ValidationError("rational action probabilities must be non-negative and sum to 1")
    maps = np.asarray(maps, dtype=np.int64)
    denom = math.lcm(*(p.denominator for p in fr if p > 0))
    if denom > cap:
        raise SizeCapError(f"uniform action needs {denom} copies (cap {cap})")
    reps = np.array([int(p * denom) for p in fr], dtype=np.int64)
    out = np.repeat(maps, reps, axis=0)
    return ActionModel(out, FiniteDistribution(np.full(denom, 1.0 / denom)), n_outputs=n_outputs)


def uniform_action_from_rational(channel, cap=DEFAULT_CAP):
    rows = [[_as_fraction(v) for v in row] for row in channel]
    if len({len(r) for r in rows}) != 1:
        raise ValidationError("channel rows must have equal length")
    for x, row in enumerate(rows):
        if any(v < 0 for v in row) or sum(row) != 1:
            raise ValidationError(f"channel row {x} is not an exact probability vector")
    ny = len(rows[0])
    choices = [[y for y in range(ny) if row[y] > 0] for row in rows]
    maps = _enumerate_maps(choices, cap)
    probs = [math.prod((rows[x][y] for x, y in enumerate(a)), start=Fraction(1)) for a in maps]
    return uniformize(maps, probs, cap=cap, n_outputs=ny)


def action_posterior(m, x, y):
    """P(a | x, y) = P(a) 1(a(x) = y) / sum over consistent actions."""
    p = m.probs.probs
    hit = m.maps[:, x] == y
    mass = float(p[hit].sum())
    if mass <= 0:
        raise UnreachablePairError(f"no positive-probability action maps x={x} to y={y}")
    return FiniteDistribution(np.where(hit, p, 0.0) / mass)


def _live_terms(px, m):
    """Rows (x, a, P(x), P(a), P(a(x)|x)) of the triple joint with positive mass."""
    pxv = _probs(px)
    if pxv.shape[0] != m.n_inputs:
        raise ValidationError(f"input distribution has {pxv.shape[0]} symbols, model {m.n_inputs}")
    pa = m.probs.probs
    ch = induced_channel(m)
    xs = np.flatnonzero(pxv > 0)
    acts = np.flatnonzero(pa > 0)
    xx, aa = np.meshgrid(xs, acts, indexing="ij")
    xx = xx.reshape(-1)
    aa = aa.reshape(-1)
    yy = m.maps[aa, xx]
    return xx, aa, yy, pxv[xx], pa[aa], ch[xx, yy]


def intrinsic_uncertainty(px, m):
    """H(A | X, Y) in bits under P(x, y, a) = P(x) P(a) 1(y = a(x))."""
    _, _, _, p_x, p_a, p_yx = _live_terms(px, m)
    post = p_a / p_yx
    return float(-np.sum(p_x * p_a * np.log2(post)))


def mi_via_actions(px, m):
    """H(Y) - H(A) + H(A|X,Y); equals I(X;Y) for every consistent model."""
    j = joint_of_actions(px, m)
    return entropy(j.py) - entropy(m.probs) + intrinsic_uncertainty(px, m)


def action_model_from_choices(choices, probs, n_outputs=None):
    """Convenience constructor from explicit maps, e.g. ``[(0, 1), (0, 0)]``."""
    maps = np.array([list(c) for c in choices], dtype=np.int64)
    return ActionModel(maps, FiniteDistribution(probs), n_outputs=n_outputs)
