import math

import numpy as np
import pytest

from adjmi.core import (
    AdjacencyProblem,
    BoundReport,
    DomainError,
    FiniteDistribution,
    InfeasibleSupportError,
    JointDistribution,
    ValidationError,
    adjacency_of,
    binary_divergence,
    binary_entropy,
    dv_identity_check,
    dv_objective,
    entropy,
    kl_divergence,
    mutual_information,
)


class TestFiniteDistribution:
    def test_valid_and_frozen(self):
        d = FiniteDistribution([0.25, 0.75])
        assert len(d) == 2
        with pytest.raises(ValueError):
            d.probs[0] = 1.0

    @pytest.mark.parametrize(
        "bad", [[], [0.5, 0.6], [-0.1, 1.1], [float("nan"), 1.0], [0.5, 0.5 + 1e-9]]
    )
    def test_rejects_invalid(self, bad):
        with pytest.raises(ValidationError):
            FiniteDistribution(bad)

    def test_sum_tolerance(self):
        FiniteDistribution([0.5, 0.5 + 5e-13])

    def test_constructors(self):
        assert np.allclose(FiniteDistribution.uniform(4).probs, 0.25)
        assert np.allclose(FiniteDistribution.from_weights([1, 3]).probs, [0.25, 0.75])
        assert np.allclose(FiniteDistribution.bernoulli(0.2).probs, [0.8, 0.2])
        with pytest.raises(DomainError):
            FiniteDistribution.bernoulli(1.5)
        with pytest.raises(ValidationError):
            FiniteDistribution.from_weights([0, 0])


class TestJoint:
    def test_marginals(self):
        j = JointDistribution([[0.1, 0.2], [0.3, 0.4]])
        assert np.allclose(j.px.probs, [0.3, 0.7])
        assert np.allclose(j.py.probs, [0.4, 0.6])
        assert j.shape == (2, 2)

    def test_rejects_bad(self):
        with pytest.raises(ValidationError):
            JointDistribution([0.5, 0.5])
        with pytest.raises(ValidationError):
            JointDistribution([[0.5, 0.6]])

    def test_from_channel_shape_mismatch(self):
        with pytest.raises(ValidationError):
            JointDistribution.from_channel([0.5, 0.5], [[1.0, 0.0]])


class TestAdjacency:
    def test_infeasible_row(self):
        with pytest.raises(InfeasibleSupportError, match="row x=1"):
            AdjacencyProblem([0.5, 0.5], [1.0, 0.0], [[1, 0], [0, 1]])

    def test_infeasible_column(self):
        with pytest.raises(InfeasibleSupportError, match="column y=1"):
            AdjacencyProblem([1.0, 0.0], [0.5, 0.5], [[1, 0], [0, 1]])

    def test_zero_mass_rows_are_ignored(self):
        adj = AdjacencyProblem([1.0, 0.0], [1.0, 0.0], [[1, 0], [0, 0]])
        assert adj.shape == (2, 2)

    def test_mask_validation(self):
        with pytest.raises(ValidationError):
            AdjacencyProblem([1.0], [1.0], [[2]])
        with pytest.raises(ValidationError):
            AdjacencyProblem([1.0], [1.0], [[1, 1]])

    def test_adjacency_of_tolerance(self):
        j = JointDistribution([[0.5 - 1e-15, 1e-15], [0.0, 0.5]])
        assert adjacency_of(j).support[0, 1]
        assert not adjacency_of(j, zero_tol=1e-12).support[0, 1]
        with pytest.raises(ValidationError):
            adjacency_of(j, zero_tol=-1)


class TestInformation:
    def test_entropy(self):
        assert entropy(FiniteDistribution.uniform(8)) == pytest.approx(3.0)
        assert entropy([1.0, 0.0]) == 0.0

    def test_binary_entropy(self):
        assert binary_entropy(0.5) == 1.0
        assert binary_entropy(0.0) == binary_entropy(1.0) == 0.0
        assert binary_entropy(0.11) == pytest.approx(0.4999159582, abs=1e-10)
        with pytest.raises(DomainError):
            binary_entropy(-0.1)

    def test_binary_divergence(self):
        assert binary_divergence(0.3, 0.3) == 0.0
        assert binary_divergence(0.5, 0.0) == math.inf
        assert binary_divergence(0.5, 1.0) == math.inf
        assert binary_divergence(0.0, 0.5) == pytest.approx(1.0)
        assert binary_divergence(0.25, 0.5) == pytest.approx(1 - binary_entropy(0.25))

    def test_kl(self):
        assert kl_divergence([0.5, 0.5], [1.0, 0.0]) == math.inf
        assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(1.0)

    def test_mutual_information(self):
        assert mutual_information(JointDistribution(np.full((3, 4), 1 / 12))) == 0.0
        assert mutual_information(JointDistribution(np.eye(4) / 4)) == pytest.approx(2.0)
        p = 0.11
        bsc = JointDistribution([[(1 - p) / 2, p / 2], [p / 2, (1 - p) / 2]])
        assert mutual_information(bsc) == pytest.approx(1 - binary_entropy(p))

    def test_bound_report_rejects_nonfinite(self):
        with pytest.raises(ValidationError):
            BoundReport(math.nan, "x")


class TestDonskerVaradhan:
    def test_identity(self, rng):
        p = rng.dirichlet(np.ones(5))
        f = rng.uniform(0.1, 3, size=5)
        lhs, rhs, q = dv_identity_check(p, f)
        assert lhs == pytest.approx(rhs, abs=1e-12)
        assert np.allclose(q.probs, p / f / np.sum(p / f))

    def test_zero_f_off_support(self):
        lhs, rhs, q = dv_identity_check([1.0, 0.0], [2.0, 0.0])
        assert lhs == pytest.approx(1.0) and rhs == pytest.approx(1.0)
        assert q.probs[1] == 0.0

    def test_rejects_nonpositive_on_support(self):
        with pytest.raises(DomainError):
            dv_identity_check([0.5, 0.5], [1.0, 0.0])
        with pytest.raises(ValidationError):
            dv_identity_check([0.5, 0.5], [1.0])

    def test_objective_is_infinite_off_support(self):
        assert dv_objective([0.5, 0.5], [1.0, 1.0], [1.0, 0.0]) == math.inf
