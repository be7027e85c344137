"""Exact constant-objective-value and sum-decomposability checks.

Rational inputs may be ints, ``fractions.Fraction`` or ``"p/q"`` strings;
rational outputs come back as ints or Fractions.
"""

from ._covpkit import (
    BudgetExhausted,
    InputError,
    InternalError,
    axial_reduction,
    blow_up,
    counterexample_array,
    covp_check,
    covp_space_dimension,
    decompose,
    enumerate_solutions,
    graph_covp,
    repro,
    savs_dimension,
    tp_covp,
)

__all__ = [
    "BudgetExhausted",
    "InputError",
    "InternalError",
    "axial_reduction",
    "blow_up",
    "counterexample_array",
    "covp_check",
    "covp_space_dimension",
    "decompose",
    "enumerate_solutions",
    "graph_covp",
    "repro",
    "savs_dimension",
    "tp_covp",
]
