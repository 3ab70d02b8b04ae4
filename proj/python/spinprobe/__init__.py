"""Qubit probe dephasing in an interacting spin bath.

Thin Python face over the C++ core: exact reduced dynamics of a single-qubit
probe coupled to a finite Ising spin chain, quantum Fisher information for
bath temperature and probe-bath coupling, and maximization of the QFI over
the interaction time.  See ``spinprobe._core`` for the full binding surface.
"""

from spinprobe._core import (
    BlochState,
    Boundary,
    CoherenceCollapse,
    CollapseDominatedGrid,
    DerivativeMethod,
    ModelSpec,
    OptimizeResult,
    Parameter,
    ParamSelector,
    QfiPoint,
    TimeWindow,
    bloch_at,
    brute_force_bloch,
    optimize_over_time,
    qfi_point,
)

__all__ = [
    "BlochState",
    "Boundary",
    "CoherenceCollapse",
    "CollapseDominatedGrid",
    "DerivativeMethod",
    "ModelSpec",
    "OptimizeResult",
    "Parameter",
    "ParamSelector",
    "QfiPoint",
    "TimeWindow",
    "bloch_at",
    "brute_force_bloch",
    "optimize_over_time",
    "qfi_point",
]
