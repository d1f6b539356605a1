"""Exact interval exchanges, piecewise contractions, and their codings."""

from .errors import (
    BadAlphabet,
    BadPartition,
    CodingUndecidable,
    DenominatorBlowup,
    DivisionByZero,
    IetpcError,
    ImageEscapes,
    IncompatibleRadicands,
    InsufficientVisits,
    InterceptMismatch,
    InvalidSeed,
    KTooLarge,
    LengthMismatch,
    MapFormatError,
    NotBijective,
    NotContracting,
    NotInjective,
    NotTransitiveEvidence,
    OrbitHitsBreakpoint,
    OutOfDomain,
    PeriodicOrbit,
    PrefixTooShort,
)
from .intervals import Interval
from .numeric import (
    Ball,
    ExactNumber,
    compare,
    format_scalar,
    parse_scalar,
    to_ball,
)
from .words import (
    ComplexityTable,
    SymbolicWord,
    complexity,
    complexity_stability,
    detect_eventual_period,
    factors,
    fibonacci_word,
    isomorphic,
    morse_hedlund_flag,
)
from .iet import (
    Iet,
    IdocCertificate,
    MinimalityCertificate,
    RefinementComplexity,
    from_lengths_and_permutation,
    golden_rotation,
    idoc_check,
    irreducible,
    keane_minimality_certificate,
    new_iet,
    refinement_complexity,
    rotation_iet,
)
from .iet import coding as iet_coding
from .pc import (
    EmpiricalFactor,
    PeriodicCertificate,
    PiecewiseContraction,
    certify_periodic,
    check_certificate,
    empirical_factor,
    new_pc,
)
from .pc import coding as pc_coding
from .construct import (
    ConstructedPc,
    GapSystem,
    RotationPc,
    SemiconjugacyReport,
    build_gap_system,
    build_pc_from_iet,
    default_seed,
    rabbit_constant,
    robust_certificate,
    rotation_pc,
    valid_seeds,
    verify_semiconjugacy,
)
from .mapio import canonical_json, load_map, map_from_json_dict

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
