"""Exact Hecke algebras, Fell-bundle crossed products by Hecke pairs, and their property suites."""

from .bundles import BundleAlgebra, FellBundle, Section, TrivialLineBundle
from .crossed import CrossedElement, CrossedProduct
from .eq import EQBundle, GradedStarAlgebra, group_algebra, matrix_algebra
from .groupoids import CosetSpace, FiniteGSpace, PairGroupoidSpace, TranslationSpace
from .hecke import CosetVector, HeckeAlgebra, HeckeElement
from .lln import LLNAlgebra, LLNElement
from .matrices import ExactMatrix, spectral_norm
from .pair import BaumslagSolitarPair, HeckePair, PermutationPair, SubgroupTag, pair_from_json
from .scalars import I, ONE, ZERO, RadScalar

__all__ = [
    "BaumslagSolitarPair", "BundleAlgebra", "CosetSpace", "CosetVector", "CrossedElement",
    "CrossedProduct", "EQBundle", "ExactMatrix", "FellBundle", "FiniteGSpace", "GradedStarAlgebra",
    "HeckeAlgebra", "HeckeElement", "HeckePair", "I", "LLNAlgebra", "LLNElement", "ONE",
    "PairGroupoidSpace", "PermutationPair", "RadScalar", "Section", "SubgroupTag", "TranslationSpace",
    "TrivialLineBundle", "ZERO", "group_algebra", "matrix_algebra", "pair_from_json", "spectral_norm",
]
