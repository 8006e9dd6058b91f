"""Renormalization of analytic Lorenz maps: real dynamics and complex bounds."""
from .combinatorics import (CombinatorialSequence, LorenzPermutation, extract_permutation,
                            in_S_Theta, is_lorenz_permutation, realize, rho)
from .config import DEFAULT, Tolerances
from .errors import (CertificationError, ClassificationError, ContinuationError, DepthError,
                     DomainError, FitError, LorenzError, NumericError, SchemaError,
                     SearchFailure)
from .flow import FixedPointConfig, FlowRecord, fixed_point_search, iterate, stability_witness
from .maps import (MINUS, PLUS, BranchRep, LorenzMap, Triviality, is_nontrivial,
                   real_bounds_report, standard_family)
from .renorm import (Prerenormalization, RenormalizationStep, find_renormalization,
                     prerenormalize, renormalize)

__all__ = [
    "BranchRep", "CertificationError", "ClassificationError", "CombinatorialSequence",
    "ContinuationError", "DEFAULT", "DepthError", "DomainError", "FitError",
    "FixedPointConfig", "FlowRecord", "LorenzError", "LorenzMap", "LorenzPermutation",
    "MINUS", "NumericError", "PLUS", "Prerenormalization", "RenormalizationStep",
    "SchemaError", "SearchFailure", "Tolerances", "Triviality", "extract_permutation",
    "find_renormalization", "fixed_point_search", "in_S_Theta", "is_lorenz_permutation",
    "is_nontrivial", "iterate", "prerenormalize", "real_bounds_report", "realize",
    "renormalize", "rho", "stability_witness", "standard_family",
]
