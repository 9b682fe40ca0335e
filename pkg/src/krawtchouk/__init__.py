"""Multivariate Krawtchouk polynomial systems.

Exact construction of column-orthogonal systems and their symmetric-power
realizations, ladder-operator representations, analytic identities, and
Monte Carlo estimators, with a verification CLI on top.
"""

from .analytic import (AnalyticContext, generating_function, leibniz,
                       leibniz_bruteforce)
from .core import (DEFAULT_ATOL, DEFAULT_RTOL, FlavorError, LevelBasis, Matrix,
                   MultiIndex, ShapeError, enumerate_level, format_rational,
                   matrices_match, multi_factorial, multinomial_coeff,
                   parse_rational, scalars_match)
from .fock import FockRep, commutator
from .induced import (InducedMatrix, binomial_diag, check_homomorphism,
                      check_transpose_lemma, induced_matrix)
from .report import CheckResult, VerificationReport
from .sampling import ProcessSample, RngSpec, empirical_gram, sample_counts
from .system import (KConditionError, KGSystem, KravchoukLevel, build_exact,
                     build_from_orthogonal, kravchouk_level, orthogonality_check)

__all__ = [
    "AnalyticContext", "CheckResult", "DEFAULT_ATOL", "DEFAULT_RTOL",
    "FlavorError", "FockRep", "InducedMatrix", "KConditionError", "KGSystem",
    "KravchoukLevel", "LevelBasis", "Matrix", "MultiIndex", "ProcessSample",
    "RngSpec", "ShapeError", "VerificationReport", "binomial_diag",
    "build_exact", "build_from_orthogonal", "check_homomorphism",
    "check_transpose_lemma", "commutator", "empirical_gram", "enumerate_level",
    "format_rational", "generating_function", "induced_matrix",
    "kravchouk_level", "leibniz", "leibniz_bruteforce", "matrices_match",
    "multi_factorial", "multinomial_coeff", "orthogonality_check",
    "parse_rational", "sample_counts", "scalars_match",
]

__version__ = "0.1.0"
