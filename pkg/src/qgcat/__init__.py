"""Exact modular data of quantum-group ribbon G-categories at roots of unity.

Typical use::

    from qgcat import make_spec, build_modular_data, classify
    data = build_modular_data(make_spec("A1", 6))
    classify(data).regular  # True
"""

from .alcove import AlcoveError, AlcoveSpec, Case, WallError, make_spec
from .checks import ClassificationReport, classify, cross_validate, predicted_flags, transparent_simples
from .cyclotomic import CycNum, RadicalScalar
from .modular import GradedModularData, block_dimension, build_modular_data, hopf_pairing, qdim, twist_scalar
from .rootsys import CartanType, RootSystem, build_root_system
from .surgery import PlumbingForest, TauResult, blow_down, cohomology_classes, linking_matrix, omega_bracket, tau

__version__ = "0.1.0"

__all__ = [
    "AlcoveError",
    "AlcoveSpec",
    "CartanType",
    "Case",
    "ClassificationReport",
    "CycNum",
    "GradedModularData",
    "PlumbingForest",
    "RadicalScalar",
    "RootSystem",
    "TauResult",
    "WallError",
    "blow_down",
    "block_dimension",
    "build_modular_data",
    "build_root_system",
    "classify",
    "cohomology_classes",
    "cross_validate",
    "hopf_pairing",
    "linking_matrix",
    "make_spec",
    "omega_bracket",
    "predicted_flags",
    "qdim",
    "tau",
    "transparent_simples",
    "twist_scalar",
]
