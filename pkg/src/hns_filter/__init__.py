"""Hypercomplex realization of third-order IIR filters.

Converts a real third-order recursive filter into an equivalent first-order
filter with Γ(e,3) coefficients, measures the total parametric sensitivity of
both realizations and searches the two free parameters for the least sensitive
one. The command line lives in ``hns_filter.cli`` and the MCP server in
``hns_filter.server``; the library surface is re-exported here.
"""

from __future__ import annotations

__version__ = "1.0.0"

from .algebra import (
    GAMMA3,
    RC,
    AlgebraTable,
    HnsElement,
    conjugate,
    element,
    inverse,
    mul,
    norm,
    regular_rep,
)
from .errors import HnsFilterError
from .isomorphism import find_isomorphism
from .optimizer import OptimResult, SearchBox, grid_search, refine, staged_optimize
from .sensitivity import (
    FrequencyGrid,
    SensitivityProfile,
    ZConvention,
    magnitude,
    ratio_profile,
    rcs,
    s_rcs,
)
from .synth import (
    Branch,
    ExpandedForm,
    HyperFilter1,
    RealTransfer3,
    convert,
    evaluate,
    expand,
    solve_denominator,
    solve_numerator,
)

__all__ = [
    "__version__",
    "GAMMA3",
    "RC",
    "AlgebraTable",
    "HnsElement",
    "element",
    "mul",
    "regular_rep",
    "norm",
    "conjugate",
    "inverse",
    "find_isomorphism",
    "RealTransfer3",
    "HyperFilter1",
    "ExpandedForm",
    "Branch",
    "expand",
    "solve_denominator",
    "solve_numerator",
    "convert",
    "evaluate",
    "FrequencyGrid",
    "ZConvention",
    "SensitivityProfile",
    "magnitude",
    "rcs",
    "s_rcs",
    "ratio_profile",
    "SearchBox",
    "OptimResult",
    "grid_search",
    "refine",
    "staged_optimize",
    "HnsFilterError",
]
