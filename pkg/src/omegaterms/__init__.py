"""Omega-terms over finite alphabets: normal forms, the languages L_n and aperiodic semigroups."""

from .terms import (
    Alphabet,
    CrucialPortion,
    Power,
    Term,
    TermSyntaxError,
    concat,
    crucial_portions,
    freeze,
    length,
    mu,
    parse,
    rank,
    unfreeze,
)
from .normal_form import (
    NormalFormReport,
    NormalizationError,
    RewriteStep,
    RewriteTrace,
    apply_rule,
    check_circular_normal_form,
    check_normal_form,
    normalize,
    verify_trace,
)
from .languages import build_Ln, intersect_empty, is_star_free, member, sample_expansion, to_dfa
from .semigroup import FiniteSemigroup, agree_on_aperiodic, evaluate
from .decide import EqVerdict, decide_eq, decide_eq_language, synchronize_rank1, threshold

__all__ = [
    "Alphabet", "CrucialPortion", "Power", "Term", "TermSyntaxError",
    "concat", "crucial_portions", "freeze", "length", "mu", "parse", "rank", "unfreeze",
    "NormalFormReport", "NormalizationError", "RewriteStep", "RewriteTrace",
    "apply_rule", "check_circular_normal_form", "check_normal_form", "normalize", "verify_trace",
    "build_Ln", "intersect_empty", "is_star_free", "member", "sample_expansion", "to_dfa",
    "FiniteSemigroup", "agree_on_aperiodic", "evaluate",
    "EqVerdict", "decide_eq", "decide_eq_language", "synchronize_rank1", "threshold",
]

__version__ = "0.1.0"
