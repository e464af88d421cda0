"""Exact decision procedure for nontermination of multipath linear loops.

A loop ``while c_i . x >= 0 (all i) do x := A_j x`` with commuting invertible
rational A_j is asked whether some nonzero real x keeps the guard forever.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DimensionMismatchError,
    InstanceSyntaxError,
    InternalInvariantError,
    LoopSystemError,
    NonCommutingError,
    SingularMatrixError,
    ZeroGuardRowError,
)
from .polyring import LoopSystem  # noqa: E402
from .positivity import SearchConfig  # noqa: E402
from .termination import (  # noqa: E402
    INCONCLUSIVE,
    NO_WITNESS,
    NONTERMINATING_WITNESS_EXISTS,
    Decision,
    decide_nontermination,
    validate_system,
)
from .dsl import parse_instance_json, parse_loop_dsl  # noqa: E402

__all__ = [
    "__version__",
    "DimensionMismatchError",
    "InstanceSyntaxError",
    "InternalInvariantError",
    "LoopSystemError",
    "NonCommutingError",
    "SingularMatrixError",
    "ZeroGuardRowError",
    "LoopSystem",
    "SearchConfig",
    "INCONCLUSIVE",
    "NO_WITNESS",
    "NONTERMINATING_WITNESS_EXISTS",
    "Decision",
    "decide_nontermination",
    "validate_system",
    "parse_instance_json",
    "parse_loop_dsl",
]
