"""Equivariant algebra over F_2: complexes, Z_2-structures and spectral sequences."""

from .complexes import (EquivariantComplex, F2Complex, GradedChains, HomologyData, LongExactSequence,
                        Z2ComplexStructure, build_equivariant, equivariant_homology, homology,
                        long_exact_sequence)
from .morse_bott import ChordComponent, expected_positive_hw, generator_degree, morse_bott_e1, spectrum_from_iterates
from .spectral import FilteredComplex, SSPage, filtered_spectral_sequence, spectral_sequence
from . import fixtures

__all__ = [
    "ChordComponent", "EquivariantComplex", "F2Complex", "FilteredComplex", "GradedChains",
    "HomologyData", "LongExactSequence", "SSPage", "Z2ComplexStructure", "build_equivariant",
    "equivariant_homology", "expected_positive_hw", "filtered_spectral_sequence", "fixtures",
    "generator_degree", "homology", "long_exact_sequence", "morse_bott_e1", "spectral_sequence",
    "spectrum_from_iterates",
]
