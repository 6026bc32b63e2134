"""Shipped distinguished sentences for the unordered canonical forms.

Graph three-colorability over the base vocabulary {R:2} serves the NP shapes
and its universal complement the coNP shapes.  The remaining classes have no
shipped default; their distinguished sentences are supplied by the user and
trusted (whether a sentence really defines a complete problem is not
checkable).
"""

from __future__ import annotations

from .logic import Formula, parse_formula
from .semantics import EvalConfig

_COLORING_MATRIX = (
    "(Ax (Q1(x) | (Q2(x) | Q3(x)))"
    " & Ax Ay (R(x,y) ->"
    " ~((Q1(x) & Q1(y)) | ((Q2(x) & Q2(y)) | (Q3(x) & Q3(y))))))"
)


def three_colorability() -> Formula:
    return parse_formula(f"EQ1:1 EQ2:1 EQ3:1 {_COLORING_MATRIX}")


def non_three_colorability() -> Formula:
    return parse_formula(f"AQ1:1 AQ2:1 AQ3:1 ~{_COLORING_MATRIX}")


def unord_default(cls: str) -> Formula:
    if cls == "NP":
        return three_colorability()
    if cls == "coNP":
        return non_three_colorability()
    raise KeyError(f"no shipped distinguished sentence for class {cls!r}")


def default_config() -> EvalConfig:
    return EvalConfig(upsilon_unord=three_colorability())
