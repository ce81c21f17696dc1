"""Topological entropy and chaos for piecewise-monotone maps via coupled expansion."""
from .coupled import EntropyVerdict, VerificationReport, entropy_verdict, infer_matrix, verify
from .kernels import BACKEND
from .onedmap import Arc, Partition, PiecewiseMonotoneMap, linear_markov, make_builtin, piecewise_linear
from .subshift import SymbolSequence, count_words, is_admissible
from .trans_matrix import TransitionMatrix, spectral_radius, validate_transition

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "BACKEND",
    "EntropyVerdict",
    "Partition",
    "PiecewiseMonotoneMap",
    "SymbolSequence",
    "TransitionMatrix",
    "VerificationReport",
    "count_words",
    "entropy_verdict",
    "infer_matrix",
    "is_admissible",
    "linear_markov",
    "make_builtin",
    "piecewise_linear",
    "spectral_radius",
    "validate_transition",
    "verify",
]
