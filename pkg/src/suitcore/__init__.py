"""Suitable cores: constructions from triple packings and Ramsey colorings, plus verifiers."""

from .core import (CoreWitness, PermutationArray, SuitabilityParams, array_to_core, c_pre, core_to_array,
                   is_suitable_array)
from .verify import (Verdict, Witness, sample_falsify, verify_condition_ii, verify_exact, verify_necessary,
                     verify_shallow)

__version__ = "0.1.0"

__all__ = [
    "CoreWitness", "PermutationArray", "SuitabilityParams", "array_to_core", "c_pre", "core_to_array",
    "is_suitable_array", "Verdict", "Witness", "sample_falsify", "verify_condition_ii", "verify_exact",
    "verify_necessary", "verify_shallow",
]
