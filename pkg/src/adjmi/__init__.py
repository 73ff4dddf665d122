"""Mutual-information bounds from marginals, joint support and channel actions."""

from adjmi.actions import (
    ActionModel,
    ActionSetIndex,
    UnreachablePairError,
    action_posterior,
    action_set_index,
    generic_action_set,
    induced_channel,
    intrinsic_uncertainty,
    mi_via_actions,
    uniform_action_from_rational,
)
from adjmi.boolean import (
    BooleanFunction,
    FourierSpectrum,
    agreement_prob,
    cor1_upper,
    exact_mi_boolean,
    exhaustive_sweep,
    fourier_spectrum,
    thm7_upper,
)
from adjmi.bounds import (
    IterativeState,
    baseline_lower,
    iterative_lower,
    min_mi_ipf_oracle,
    thm1_lower,
    thm2_upper,
    thm4_lower,
)
from adjmi.channels import ChannelSpec, bec, bsc, figure1_data, joint_of, z_channel, z_reference_values
from adjmi.core import (
    AdjacencyProblem,
    AdjmiError,
    BoundReport,
    ConvergenceError,
    DomainError,
    FiniteDistribution,
    InfeasibleSupportError,
    JointDistribution,
    SizeCapError,
    ValidationError,
    adjacency_of,
    binary_divergence,
    binary_entropy,
    dv_identity_check,
    entropy,
    mutual_information,
)
from adjmi.deletion import (
    DeletionConfig,
    PhraseHistogram,
    deletion_lower_bound,
    deletion_sweep,
    deletion_upper_bound,
    dsv_upper_bound,
    embedding_count,
    finite_n_joint,
    g_of_d,
    gamma,
    greedy_is_subsequence,
    lambda_star,
    parse_phrases,
    phrase_mgf,
    rho_star,
    supersequence_count,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
