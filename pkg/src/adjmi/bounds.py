"""Lower and upper bounds on I(X;Y) from marginals, support and actions.

All values are returned in bits. The dual iteration works with natural-log
multipliers internally and converts its objective at the end.
"""

import math
from dataclasses import dataclass

import numpy as np

from adjmi import kernels
from adjmi.actions import UnreachablePairError, induced_channel
from adjmi.core import (
    AdjacencyProblem,
    BoundReport,
    ConvergenceError,
    JointDistribution,
    ValidationError,
    _freeze,
    _probs,
    entropy,
    mutual_information,
)

LN2 = math.log(2.0)
MULTIPLIER_FLAG = 100.0  # |lambda| or |mu| beyond this (nats) is flagged as unbounded


def _as_problem(adj):
    if not isinstance(adj, AdjacencyProblem):
        raise ValidationError("expected an AdjacencyProblem")
    return adj


def _live(adj):
    """Marginals and support restricted to positive-mass symbols."""
    px = adj.px.probs
    py = adj.py.probs
    xs = np.flatnonzero(px > 0)
    ys = np.flatnonzero(py > 0)
    return px[xs], py[ys], adj.support[np.ix_(xs, ys)].astype(np.float64)


def _adjacency_terms(adj):
    px, py, s = _live(adj)
    ex = px @ s  # E_X 1(X ~ y)
    first = -float(np.dot(py, np.log2(ex)))
    inner = s @ (py / ex)  # E_Y [1(x ~ Y) / E_X 1(X ~ Y)]
    second = -float(np.dot(px, np.log2(inner)))
    return first, second


def baseline_lower(adj):
    first, _ = _adjacency_terms(_as_problem(adj))
    return BoundReport(max(first, 0.0), "baseline", 0, {"first_term": first})


def thm1_lower(adj):
    first, second = _adjacency_terms(_as_problem(adj))
    return BoundReport(
        max(first, 0.0) + max(second, 0.0),
        "thm1",
        0,
        {"first_term": first, "second_term": second},
    )


def thm4_lower(px, m):
    """General action bound: -H(A) - E_Y log E_{X,A} P(A|X,Y) - E_{X,A} log E_Y[...]."""
    pxv = _probs(px)
    if pxv.shape[0] != m.n_inputs:
        raise ValidationError(f"input distribution has {pxv.shape[0]} symbols, model {m.n_inputs}")
    pa = m.probs.probs
    ch = induced_channel(m)
    py = pxv @ ch
    xs = np.flatnonzero(pxv > 0)
    acts = np.flatnonzero(pa > 0)
    # Q2[x, y] = sum of P(a)^2 over actions with a(x) = y
    q2 = np.zeros((m.n_inputs, m.n_outputs))
    for x in xs:
        q2[x] = np.bincount(m.maps[acts, x], weights=pa[acts] ** 2, minlength=m.n_outputs)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(ch > 0, q2 / np.where(ch > 0, ch, 1.0), 0.0)
    c = pxv @ ratio  # E_{X,A} P(A | X, y)
    ys = np.flatnonzero(py > 0)
    if np.any(c[ys] <= 0):
        raise UnreachablePairError("some output with positive mass is unreachable")
    h_a = entropy(m.probs)
    second = -float(np.dot(py[ys], np.log2(c[ys])))
    xx, aa = np.meshgrid(xs, acts, indexing="ij")
    xx = xx.reshape(-1)
    aa = aa.reshape(-1)
    yy = m.maps[aa, xx]
    post = pa[aa] / ch[xx, yy]
    third = -float(np.sum(pxv[xx] * pa[aa] * np.log2(py[yy] * post / c[yy])))
    value = -h_a + second + third
    return BoundReport(
        value, "thm4", 0, {"neg_action_entropy": -h_a, "second_term": second, "third_term": third}
    )


def thm2_upper(px, m):
    """H(Y) + E_A log E_{X,Y} 1(A~(X,Y)) + E_{X,Y} log E_A [1(A~(X,Y)) / E_{X,Y} 1(A~(X,Y))]."""
    pxv = _probs(px)
    if pxv.shape[0] != m.n_inputs:
        raise ValidationError(f"input distribution has {pxv.shape[0]} symbols, model {m.n_inputs}")
    pa = m.probs.probs
    joint = pxv[:, None] * induced_channel(m)
    acts = np.flatnonzero(pa > 0)
    maps = m.maps[acts]
    s = joint[np.arange(m.n_inputs)[None, :], maps].sum(axis=1)  # E_{X,Y} 1(a ~ (X,Y))
    second = float(np.dot(pa[acts], np.log2(s)))
    w = pa[acts] / s
    third = 0.0
    for x in np.flatnonzero(pxv > 0):
        inner = np.bincount(maps[:, x], weights=w, minlength=m.n_outputs)
        on = joint[x] > 0
        third += float(np.dot(joint[x, on], np.log2(inner[on])))
    h_y = entropy(joint.sum(axis=0))
    return BoundReport(
        h_y + second + third,
        "thm2",
        0,
        {"output_entropy": h_y, "second_term": second, "third_term": third},
    )


@dataclass(frozen=True, eq=False)
class IterativeState:
    """Dual multipliers (nats, positive-mass symbols only) and the half-step objective trace.

    ``g_values`` is a read-only array and never decreases (up to rounding).

    ``g_values[0]`` is G(lambda0, mu0), ``g_values[1]`` is G(lambda1, mu0),
    ``g_values[2]`` is G(lambda1, mu1) and so on, all in bits.
    """

    lambda_: np.ndarray
    mu: np.ndarray
    k: int
    g_values: tuple


def iterative_lower(adj, k_max=10_000, rel_tol=1e-10):
    """Alternating maximization of the dual of min I(X;Y) over couplings on the support.

    Returns the objective after ``k`` full (lambda, mu) updates, where ``k``
    is ``k_max`` or the first iteration whose value changed by at most
    ``rel_tol * max(|G|, 1)`` (relative, with a one-bit floor so that a zero
    bound does not chase rounding noise). ``k = 0`` is the baseline bound;
    the intermediate half-step G(lambda1, mu0) is the two-term adjacency bound.
    """
    adj = _as_problem(adj)
    if k_max < 0:
        raise ValidationError("k_max must be non-negative")
    px, py, s = _live(adj)
    lam, mu, k, converged, trace = kernels.dual_iterate(
        np.log(px), np.log(py), s > 0, np.zeros(px.shape[0]), k_max, rel_tol
    )
    big = max(float(np.max(np.abs(lam))), float(np.max(np.abs(mu))))
    state = IterativeState(_freeze(lam), _freeze(mu), k, _freeze(trace))
    diag = {
        "converged": float(converged),
        "max_abs_multiplier": big,
        "multipliers_unbounded": float(big > MULTIPLIER_FLAG),
    }
    return BoundReport(max(float(trace[-1]), 0.0), "iterative", k, diag), state


def min_mi_ipf_oracle(adj, max_iters=1_000_000, marg_tol=1e-12):
    """Minimum-MI coupling on the support via iterative proportional fitting.

    Rows and columns of P(x)P(y)1(x~y) are rescaled alternately until both
    marginals match within ``marg_tol``; the fitted joint has the product
    form P(x)P(y)e^{lambda_x + mu_y} of the minimizer.
    """
    adj = _as_problem(adj)
    px = adj.px.probs
    py = adj.py.probs
    kernel = px[:, None] * py[None, :] * adj.support
    p, it, row_err, col_err, ok = kernels.ipf_fit(px, py, kernel, max_iters, marg_tol)
    if not ok:
        raise ConvergenceError(
            f"IPF did not converge in {it} iterations "
            f"(row residual {row_err:.3e}, column residual {col_err:.3e})"
        )
    joint = JointDistribution(p / p.sum())
    return mutual_information(joint), joint
