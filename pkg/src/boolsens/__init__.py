"""Boolean functions with dual sensitivity, resiliency and degree tooling."""

from .core import (
    CapacityError,
    FunctionProfile,
    TruthTable,
    WalshSpectrum,
    algebraic_degree,
    dual,
    max_dual_sensitivity_order,
    max_sensitivity_order,
    mobius_anf,
    nonlinearity,
    pdeg,
    profile,
    resiliency_order,
    sensitivity,
    walsh_transform,
)

__all__ = [
    "CapacityError",
    "FunctionProfile",
    "TruthTable",
    "WalshSpectrum",
    "algebraic_degree",
    "dual",
    "max_dual_sensitivity_order",
    "max_sensitivity_order",
    "mobius_anf",
    "nonlinearity",
    "pdeg",
    "profile",
    "resiliency_order",
    "sensitivity",
    "walsh_transform",
]

__version__ = "0.1.0"
