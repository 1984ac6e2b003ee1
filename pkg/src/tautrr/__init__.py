"""Exact intersection-number engine and pairing-level relation certifier."""

from .cache import (
    CacheFormatError,
    CacheStore,
    cache_load,
    cache_save,
    format_rational,
    load_engine_cache,
    parse_rational,
    save_engine_cache,
)
from .engine import (
    CorrelatorEngine,
    CorrelatorKey,
    UnstableModuliError,
    default_engine,
    genus0_closed_form,
    one_point_value,
    psi_integral,
    psi_kappa_integral,
)
from .relations import (
    VerificationReport,
    build_bbt,
    build_fqq,
    build_variation,
    build_vpe,
    build_xi,
    verify,
    verify_vyt,
    verify_xi_witness,
    xi_witness,
    xi_witness_expected,
)
from .strata import (
    AmbientSpace,
    ClassExpr,
    InteriorTerm,
    NonSeparatingPushforward,
    SeparatingStratum,
    TestMonomial,
    enumerate_tests,
    pair_pushforward_irreducible,
    pair_with_test,
    pullback_test_to_separating,
)
from .universal import (
    VectorFieldPt,
    correlator_pt,
    psi_eval,
    sreduce_check,
    symmetry_check,
    tau,
    tau_shift,
    verify_conjC,
)

__version__ = "0.1.0"
