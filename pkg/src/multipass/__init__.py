"""Multipass pushdown automata, their closure constructions, and word-problem
machines for groups checked against brute-force oracles."""
from .automaton import (
    DEFAULT_BUDGET,
    Configuration,
    Mode,
    MultipassAutomaton,
    PreconditionError,
    RunTrace,
    ValidationReport,
    Verdict,
    build,
    completed,
    divergence_analysis,
    epsilon_analysis,
    is_complete,
    make_complete,
    replay,
    run,
    validate,
)
from .closures import (
    Profile,
    complement,
    decomposition_accepts,
    enumerate_profiles,
    intersection,
    profile_decomposition,
    union,
)
from .groups import SpecError, build_wp, hnn_tcancel_machine, validate_spec, wp_pullback
from .oracles import (
    GroupOracle,
    LinearSet,
    ParikhVector,
    RationalMatrix2,
    SemilinearSet,
    britton_reduce,
    bs_matrix_eval,
    oracle_for,
    parikh,
    parikh_image,
    semilinear_member,
)
from .pda import PushdownAutomaton, onepass_to_pda, pda_accepts, pda_to_onepass, run_pda
from .specs import (
    Double,
    DirectProduct,
    Finite,
    FiniteExtension,
    FiniteGroup,
    FiniteQuotient,
    Free,
    FreeAbelian,
    Hnn,
    MappingTorus,
    alphabet_of,
)
from .transducers import (
    Gsm,
    gsm_apply,
    homomorphism,
    interleaved_product,
    inverse_gsm,
    left_quotient,
    projection,
)
from .verify import VerifyReport, verify

__all__ = [
    "DEFAULT_BUDGET", "Configuration", "Mode", "MultipassAutomaton", "PreconditionError",
    "RunTrace", "ValidationReport", "Verdict", "build", "completed", "divergence_analysis",
    "epsilon_analysis", "is_complete", "make_complete", "replay", "run", "validate", "Profile",
    "complement", "decomposition_accepts", "enumerate_profiles", "intersection",
    "profile_decomposition", "union", "SpecError", "build_wp", "hnn_tcancel_machine",
    "validate_spec", "wp_pullback", "GroupOracle", "LinearSet", "ParikhVector",
    "RationalMatrix2", "SemilinearSet", "britton_reduce", "bs_matrix_eval", "oracle_for",
    "parikh", "parikh_image", "semilinear_member", "PushdownAutomaton", "onepass_to_pda",
    "pda_accepts", "pda_to_onepass", "run_pda", "Double", "DirectProduct", "Finite",
    "FiniteExtension", "FiniteGroup", "FiniteQuotient", "Free", "FreeAbelian", "Hnn",
    "MappingTorus", "alphabet_of", "Gsm", "gsm_apply", "homomorphism", "interleaved_product",
    "inverse_gsm", "left_quotient", "projection", "VerifyReport", "verify",
]

__version__ = "0.1.0"
