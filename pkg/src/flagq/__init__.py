"""Toeplitz quantization on flag manifolds of U(n) and SU(n).

Highest-weight representations, conical and Berezin kernels, Toeplitz
operators, isotypic data and spectral statistics, together with the
experiment drivers behind the ``flagq`` command.
"""
from .errors import (ConfigError, ConstructionError, DomainError, PrecisionError, PreconditionError,
                     ResourceError)
from .weights import CoeffLaw, RootDataA, Weight, WeightFamily, growth_check, weyl_dimension
from .group import SubgroupSpec, UnitaryElement, coset_angle, haar_sample, subgroup_sample
from .quadrature import QuadratureRule, integrate, mc_rule, su2_product_rule, torus_rule
from .representations import HighestWeightRep, build_irrep, character, weight_multiplicities
from .conical import (berezin_kernel_eval, conical_eval, h_k_eval, hk_integral, hk_l1_norm,
                      sup_outside_neighborhood)
from .toeplitz import Symbol, ToeplitzOperator, assemble_toeplitz, commutator_norm, quantization_rank
from .berezin import (berezin_eigenvalue, berezin_of_operator, berezin_of_symbol, decompose,
                      invariant_dimension, multiplicity)
from .spectra import counting_fraction, level_measure, spectrum

__version__ = "0.1.0"
