"""Block renormalization group for the Hubbard model on the triangular lattice."""

from ._core import (
    BracketFailure,
    DegenerateRetention,
    NonConvergence,
    NumericalFailure,
    SymmetryViolation,
    __version__,
    charge_gap,
    find_critical,
    geometry,
    retain_states,
    run_flow,
    sector_ground_energy,
    sweep,
)

__all__ = [
    "BracketFailure",
    "DegenerateRetention",
    "NonConvergence",
    "NumericalFailure",
    "SymmetryViolation",
    "__version__",
    "charge_gap",
    "find_critical",
    "geometry",
    "retain_states",
    "run_flow",
    "sector_ground_energy",
    "sweep",
]
