"""Eigenvalue positivity of generalized words in two Hermitian PD matrices."""

from .classify import ClassificationReport, classify, conjecture_check, sweep
from .gpoly import GPoly, combine, evaluate, imaginary_part, merge_variables, reduce
from .gword import (
    ExactnessReport,
    NearSymmetrySplit,
    RelationWitness,
    Word,
    WordSyntaxError,
    exactness,
    is_nearly_symmetric,
    is_symmetric,
    nearly_symmetric_split,
    parse_word,
    standard_form,
    thm31_relations,
    transform,
)
from .numeric import (
    Counterexample,
    HermitianPD,
    RefuteConfig,
    build_pair,
    eig_general,
    evaluate_word,
    haar_unitary,
    primary_power,
    refute,
    spectrum_check,
)
from .trace import (
    Family,
    Parameterization,
    TraceExpansion,
    adjacent_coefficient,
    class2_imag_closed_form,
    inexactness_certificate,
    paper_unitary,
    symbolic_trace,
    term_coefficient,
)

__version__ = "0.1.0"
