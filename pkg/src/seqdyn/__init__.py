"""seqdyn: exact-arithmetic hypercyclicity criteria and certificates on
sequence spaces.

Everything runs over exact rationals: seminorm families and column-finite
operators are finitely presented through tail and band rules, criteria
return HOLDS / REFUTED only when the presentation decides them (otherwise
VERIFIED_UP_TO a horizon), and constructions emit certificates whose every
residual re-checks to exactly zero.
"""

__version__ = "0.1.0"

from .certificates import Certificate, VerifyReport, verify_certificate
from .construct import (
    BasicSeqBundle,
    basic_seq_build,
    basic_seq_verify,
    basker_verify,
    fhc_prefix_certificate,
    hc_prefix_certificate,
    subspace_prefix_certificates,
    with_perturbation,
)
from .criteria import (
    NoSubspaceEntry,
    NoSubspaceWitness,
    TargetFamily,
    frequent_schedule_criterion,
    no_subspace_witness_verify,
    rank_criterion,
    support_divergence_criterion,
    support_growth_criterion,
    universal_span_criterion,
    verify_rank_witness,
    ws_gap_criterion,
)
from .density import DensitySetFamily, density_sets
from .enumeration import dense_index, enumerate_dense
from .operators import (
    ColumnFiniteOperator,
    OperatorSequence,
    affine_support_operator,
    closed_form_support,
    compose,
    constant_weights,
    identity_operator,
    iterate,
    iterate_support,
    polynomial_shift_mix,
    weighted_backward_shift,
    weighted_forward_shift,
    zero_operator,
)
from .seqspace import (
    Domain,
    FiniteSeq,
    GradedSeminormFamily,
    SeminormKind,
    TailRule,
    WeightRow,
    bilateral_summable_family,
    constant_norm_family,
    factorial_gap_family,
    omega_family,
)
from .verdicts import GapWitness, Status, Verdict
