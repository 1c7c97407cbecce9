"""Groebner bases and rewriting for shuffle operads, with exact rational arithmetic."""

from .algebra import Element
from .catalog import RhsMap, almost_composite, completed, dims_of, lie_filtration_weights, preset, with_rewriting_rhs
from .checks import CheckReport, run_check
from .expressions import Presentation, parse_expression
from .orders import PathLex, WeightedPathLex, XYAugmented
from .rewriting import RewriteSystem, StepLimitExceeded, complete, suboperad_dims
from .trees import Generator, ShuffleSignature

__all__ = [
    "CheckReport", "Element", "Generator", "PathLex", "Presentation", "RewriteSystem", "RhsMap",
    "ShuffleSignature", "StepLimitExceeded", "WeightedPathLex", "XYAugmented", "almost_composite",
    "complete", "completed", "dims_of", "lie_filtration_weights", "parse_expression", "preset", "run_check",
    "suboperad_dims", "with_rewriting_rhs",
]

__version__ = "0.1.0"
