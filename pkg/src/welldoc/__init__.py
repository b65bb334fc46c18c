"""WELLDOC toolkit: morphic words, the determinant/returns criterion, combined LCGs."""
from .criterion import Verdict, WelldocVerdict, decide_welldoc, is_recurrent
from .empirical import EmpiricalReport, EmpiricalVerdict, empirical_welldoc, empirical_X
from .errors import (
    DomainError,
    InputError,
    InternalError,
    NotInvertibleError,
    PreconditionError,
    UnboundedReturnsError,
    WelldocError,
)
from .prng import CombinedStream, LcgParams, lcg_next, lcg_stream, tuple_coverage
from .returns import (
    ReturnSet,
    STable,
    returns_by_scan,
    returns_complete,
    returns_via_images,
    s_table_fixpoint,
)
from .words import (
    Morphism,
    PrefixStream,
    apply,
    factors,
    incidence_matrix,
    is_prolongable,
    parikh,
    parse_morphism,
    prefix,
    rauzy_graph1,
)
from .zlinalg import det, generates_mod_p, generates_Z, inverse_mod_m, prime_factors, rank_mod_p

__all__ = [
    "apply",
    "CombinedStream",
    "decide_welldoc",
    "det",
    "DomainError",
    "empirical_welldoc",
    "empirical_X",
    "EmpiricalReport",
    "EmpiricalVerdict",
    "factors",
    "generates_mod_p",
    "generates_Z",
    "incidence_matrix",
    "InputError",
    "InternalError",
    "inverse_mod_m",
    "is_prolongable",
    "is_recurrent",
    "lcg_next",
    "lcg_stream",
    "LcgParams",
    "Morphism",
    "NotInvertibleError",
    "parikh",
    "parse_morphism",
    "PreconditionError",
    "prefix",
    "PrefixStream",
    "prime_factors",
    "rank_mod_p",
    "rauzy_graph1",
    "returns_by_scan",
    "returns_complete",
    "returns_via_images",
    "ReturnSet",
    "s_table_fixpoint",
    "STable",
    "tuple_coverage",
    "UnboundedReturnsError",
    "Verdict",
    "WelldocError",
    "WelldocVerdict",
]

__version__ = "0.1.0"
