"""Broken-stick polygon probabilities: exact formulas, simulation, verification."""

from .exact import (
    DEFAULT_N_CAP,
    CancellationWarning,
    CapExceededError,
    ProblemSpec,
    alternating_factorial_identity,
    joint_spacing_survivor,
    prob_all_kgon,
    prob_all_kgon_float,
    prob_all_ngon,
    prob_all_pentagon_beta,
    prob_all_quadrilateral_beta,
    prob_all_triangle,
    prob_exists_triangle,
    whitworth_survivor,
)
from .kernel import Rational, beta_int, binomial, falling_product, fibonacci, pochhammer
from .montecarlo import (
    DEFAULT_CHUNK_SIZE,
    DEFAULT_TRIAL_BUDGET,
    GENERATOR_ID,
    BudgetExceededError,
    EstimateResult,
    SimulationConfig,
    estimate,
    sampler_equivalence_test,
    wilson_interval,
)
from .report import VerificationEntry, VerificationReport
from .sticks import (
    ORACLE_MAX_N,
    EventKind,
    EventSpec,
    SamplerModel,
    all_k_subsets_polygon,
    event_indicator_batch,
    exists_k_polygon_windowed,
    max_spacing_exceeds,
    sample_spacings,
    sample_spacings_batch,
    subset_polygon_oracle,
)
from .verify import (
    run_all,
    run_exact_crosschecks,
    run_identity_selftests,
    run_lemma3_checks,
    run_mc_crosschecks,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CHUNK_SIZE",
    "DEFAULT_N_CAP",
    "DEFAULT_TRIAL_BUDGET",
    "GENERATOR_ID",
    "ORACLE_MAX_N",
    "BudgetExceededError",
    "CancellationWarning",
    "CapExceededError",
    "EstimateResult",
    "EventKind",
    "EventSpec",
    "ProblemSpec",
    "Rational",
    "SamplerModel",
    "SimulationConfig",
    "VerificationEntry",
    "VerificationReport",
    "all_k_subsets_polygon",
    "alternating_factorial_identity",
    "beta_int",
    "binomial",
    "estimate",
    "event_indicator_batch",
    "exists_k_polygon_windowed",
    "falling_product",
    "fibonacci",
    "joint_spacing_survivor",
    "max_spacing_exceeds",
    "pochhammer",
    "prob_all_kgon",
    "prob_all_kgon_float",
    "prob_all_ngon",
    "prob_all_pentagon_beta",
    "prob_all_quadrilateral_beta",
    "prob_all_triangle",
    "prob_exists_triangle",
    "run_all",
    "run_exact_crosschecks",
    "run_identity_selftests",
    "run_lemma3_checks",
    "run_mc_crosschecks",
    "sample_spacings",
    "sample_spacings_batch",
    "sampler_equivalence_test",
    "subset_polygon_oracle",
    "whitworth_survivor",
    "wilson_interval",
    "__version__",
]
