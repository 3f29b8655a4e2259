"""Named example pairs and the standard bundle over ``X = G``."""

from __future__ import annotations

from fractions import Fraction

from .bundles import BundleAlgebra, TrivialLineBundle
from .crossed import CrossedProduct
from .groupoids import TranslationSpace
from .pair import BaumslagSolitarPair, HeckePair, PermutationPair

__all__ = ["s3_pair", "s4_pair", "bs_pair", "translation_algebra", "translation_crossed", "s4_k_tag", "bs_window", "z2_pair"]

S3_SPEC = {"type": "perm", "degree": 3, "generators": [[2, 1, 3], [2, 3, 1]], "gamma": [[2, 1, 3]]}
S4_SPEC = {"type": "perm", "degree": 4, "generators": [[2, 1, 3, 4], [2, 3, 4, 1]],
           "gamma": [[2, 1, 3, 4], [2, 3, 1, 4]]}
BS2_SPEC = {"type": "bs", "m": 2}


def s3_pair() -> PermutationPair:
    """``S_3`` with ``Gamma = <(1 2)>``."""
    return PermutationPair.symmetric(3, gamma=[[2, 1, 3]])


def s4_pair() -> PermutationPair:
    """``S_4`` with ``Gamma`` the stabilizer of 4."""
    return PermutationPair.symmetric(4, gamma=[[2, 1, 3, 4], [2, 3, 1, 4]])


def bs_pair(m: int = 2) -> BaumslagSolitarPair:
    return BaumslagSolitarPair(m)


def s4_k_tag(pair: PermutationPair):
    """``Gamma ∩ (3 4) Gamma (3 4)^-1``, of index 3 in ``Gamma``."""
    return pair.meet(pair.gamma_tag, pair.conjugate_tag(pair.parse([1, 2, 4, 3]), pair.gamma_tag))


def translation_algebra(pair: HeckePair) -> BundleAlgebra:
    """Sections of the trivial line bundle over ``X = G`` with right translation."""
    return BundleAlgebra(TrivialLineBundle(TranslationSpace(pair)))


def translation_crossed(pair: HeckePair) -> CrossedProduct:
    return CrossedProduct(translation_algebra(pair))


def bs_window(pair: BaumslagSolitarPair) -> list:
    """Six distinct cosets of ``Z`` in BS(1, m), two at each level ``k = -1, 0, 1``."""
    m = pair.m
    return [pair.element(j * Fraction(m) ** (k - 1), k)
            for k in (-1, 0, 1) for j in (0, 1)]


def z2_pair(gamma_is_whole: bool = False) -> PermutationPair:
    return PermutationPair(2, [[2, 1]], [[2, 1]] if gamma_is_whole else [])
