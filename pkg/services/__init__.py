from services.exceptions import (
    CapacityError,
    ConfigurationError,
    ContractError,
    DomainError,
    LabError,
    NumericError,
)
from services.params import SymbolKind, SymbolSpec
from services.reduction import WeightedHankelMatrix, build_simplex_hankel, build_weighted_hankel
from services.speceng import FastHankelOperator, Solver, SpectrumResult, compute_spectrum
from services.constants import AsymptoticConstants, asymptotic_constants
from services.weylcheck import PsdoSpec, weyl_verify
from services.lab import LabReport, StudyKind, asymptotic_study, model_compare, parity_split_study
from services.run_service import RunService

__all__ = [
    "LabError",
    "DomainError",
    "ConfigurationError",
    "ContractError",
    "NumericError",
    "CapacityError",
    "SymbolKind",
    "SymbolSpec",
    "WeightedHankelMatrix",
    "build_weighted_hankel",
    "build_simplex_hankel",
    "FastHankelOperator",
    "Solver",
    "SpectrumResult",
    "compute_spectrum",
    "AsymptoticConstants",
    "asymptotic_constants",
    "PsdoSpec",
    "weyl_verify",
    "LabReport",
    "StudyKind",
    "asymptotic_study",
    "model_compare",
    "parity_split_study",
    "RunService",
]
