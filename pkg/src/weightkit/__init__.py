"""Exact weight calculus for bounded complexes of finite-rank free modules.

The stupid weight structure on bounded complexes over ``Z``, ``Q``,
``F_p`` and ``F_p[e]/e^2``: homotopy decisions, killed weights, avoiding
decompositions, homology criteria over a PID and two counterexample
categories.
"""

from .complexes import (ChainMap, Complex, FgModule, canonical_decompose, cone, direct_sum, hom_group,
                        homology, shift, shift_map)
from .counterexamples import EvenComplex, TripleObject, even_obstruction, triple_weight_decompose
from .errors import (DimensionMismatch, GenerationFailure, InvalidChoice, InvalidComplex, InvalidRange,
                     ParseError, RingMismatch, SourceTargetMismatch, UnknownBattery, UnsupportedRing,
                     WeightkitError)
from .fileformat import parse_document, serialize_document
from .functor_consv import conservativity_check, reduce_map_mod_eps, reduce_mod_eps
from .homotopy import homotopic, is_null_homotopic, sim_interval, stupid_membership, weakly_homotopic
from .pd_one import (coefficient_homology, hom_decomposition, kill_criterion_pd1, skeleton_membership,
                     without_weights_pd1)
from .ring_linalg import QQ, ZZ, CoeffRing, Dual, Matrix, snf, solve_linear
from .weights import (avoiding_decomposition, kills_weights, stupid_truncate, weight_complex_via_tower,
                      without_weights)

__version__ = "0.1.0"

__all__ = [
    "ChainMap", "Complex", "FgModule", "canonical_decompose", "cone", "direct_sum", "hom_group",
    "homology", "shift", "shift_map",
    "EvenComplex", "TripleObject", "even_obstruction", "triple_weight_decompose",
    "DimensionMismatch", "GenerationFailure", "InvalidChoice", "InvalidComplex", "InvalidRange",
    "ParseError", "RingMismatch", "SourceTargetMismatch", "UnknownBattery", "UnsupportedRing",
    "WeightkitError",
    "parse_document", "serialize_document",
    "conservativity_check", "reduce_map_mod_eps", "reduce_mod_eps",
    "homotopic", "is_null_homotopic", "sim_interval", "stupid_membership", "weakly_homotopic",
    "coefficient_homology", "hom_decomposition", "kill_criterion_pd1", "skeleton_membership",
    "without_weights_pd1",
    "QQ", "ZZ", "CoeffRing", "Dual", "Matrix", "snf", "solve_linear",
    "avoiding_decomposition", "kills_weights", "stupid_truncate", "weight_complex_via_tower",
    "without_weights",
]
