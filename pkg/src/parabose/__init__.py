"""Single-mode parabose quantum mechanics in a truncated Fock space."""

__version__ = "0.1.0"

from .algebra import (
    ParaAlgebra,
    bracket,
    bracket_factorial,
    build_algebra,
    coherent_overlap,
    coherent_state,
    deformed_exp,
)
from .amplifier import AmplifierConfig, PropagatorSample, propagator_analytic, propagator_numeric
from .polynomials import ExactPoly, hermite_deformed, legendre_deformed
from .report import CheckResult, Report, TruncationError
from .squeeze import (
    SqueezeParams,
    disentangled_squeeze,
    excitation_norm,
    squeeze_operator,
    squeezed_number_state_closed,
    squeezed_number_state_numeric,
)

__all__ = [
    "AmplifierConfig",
    "CheckResult",
    "ExactPoly",
    "ParaAlgebra",
    "PropagatorSample",
    "Report",
    "SqueezeParams",
    "TruncationError",
    "bracket",
    "bracket_factorial",
    "build_algebra",
    "coherent_overlap",
    "coherent_state",
    "deformed_exp",
    "disentangled_squeeze",
    "excitation_norm",
    "hermite_deformed",
    "legendre_deformed",
    "propagator_analytic",
    "propagator_numeric",
    "squeeze_operator",
    "squeezed_number_state_closed",
    "squeezed_number_state_numeric",
]
