"""Exact computations with differential graded algebras over Z and Z/m."""

__version__ = "0.1.0"

from .bar import (bar_tor, bialgebra_primitivity_check, center_vanishing_check, hochschild_cohomology,
                  hochschild_homology, verify_center_certificate)
from .complexes import BudgetExceeded, ChainComplex, algebra_complex
from .core import (DGAError, Element, ExplicitDGA, Generator, SemifreePresentation, base_change,
                   dumps_presentation, formal_exterior, formal_tensor_exterior, formal_truncated_polynomial,
                   loads_presentation, truncate)
from .formality import HypothesisViolation, distinguish, find_dga_map, formality_profile
from .homology import HomologyTable, RingTarget, homology_table, ring_iso_check
from .koszul import koszul_dual_homology, minimal_free_resolution
from .linalg import IntegerMatrix, smith_normal_form
from .tower import (CertificationError, build_tower, kill_class, sculpt_polynomial,
                    trivial_algebra_model)
