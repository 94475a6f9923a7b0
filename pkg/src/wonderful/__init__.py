"""Exact combinatorics of wonderful embeddings of reductive and loop groups.

Root data, affine roots and alcoves, stacky embedding fans, and the
Voronoi/LT fan of a quadratic form, all in exact rational arithmetic.
"""

__version__ = "0.1.0"

from .errors import CapExceededError, InputError, InvariantViolation, UnsupportedError, WonderfulError
from .lattice import Cone, Fan, FiniteAbelianGroup, cokernel, dual_cone, smith_normal_form
from .roots import (QuadraticForm, RootDatum, basic_form, build_root_datum, freudenthal_multiplicities,
                    one_param_limit_J, positive_roots, weyl_group)
from .affine import (AffineCharacter, AffineRootDatum, affine_dynkin, affine_weyl_action, alcove,
                     coset_representatives, levi_center_quotient, parahoric_levi_type)
from .embedding import (StackyFan, c_delta, check_embedding_fan, orbit_poset, picard_presentation, z_beta)
from .voronoi import cocycle_eval, lt_fan, lt_fan_vs_minimizers_check, minimizer_set, voronoi_cell, z_q

__all__ = [name for name in dir() if not name.startswith("_")]
