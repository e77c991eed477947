"""Exact computations with the BMW algebra, framed tangles and type-C tensor space."""

__version__ = "0.1.0"

from .scalars import FieldSpec, LaurentPoly, RatFunc, loop_value, parse_scalar, r_value, specialize
from .linalg import Mat, Subspace, algebra_closure, commutant, kernel, rref, two_sided_ideal
from .tangles import bmw_word, cap_cup_chain, dual, parse, to_text
from .rep_sp import RepContext, build_beta_gamma, bmw_generators, hom_shift, rt_eval, uq_generators
from .schur_weyl import Partition, duality_report, harmonic_tensors, pi_f, truncation

__all__ = [
    "FieldSpec", "LaurentPoly", "RatFunc", "loop_value", "parse_scalar", "r_value", "specialize",
    "Mat", "Subspace", "algebra_closure", "commutant", "kernel", "rref", "two_sided_ideal",
    "bmw_word", "cap_cup_chain", "dual", "parse", "to_text",
    "RepContext", "build_beta_gamma", "bmw_generators", "hom_shift", "rt_eval", "uq_generators",
    "Partition", "duality_report", "harmonic_tensors", "pi_f", "truncation",
]
