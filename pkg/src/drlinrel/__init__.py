"""Douglas-Rachford calculus for maximally monotone linear relations on R^n."""
from .drcalc import (CommutatorPolynomial, DrDiagnosis, SegmentFamily, commutator,
                     commutator_polynomials, commuting_lambdas, coolmat_family,
                     dr_operator, is_proximal, reflected_resolvent)
from .errors import *  # noqa: F401,F403
from .iterate import (IterationTrace, SolutionSet, fixed_point_subspace, run_dr,
                      solution_set)
from .lab import (SweepConfig, SweepRecord, closedness_probe, escape_from_D,
                  genericity_sweep, sample_symmetric_relation)
from .linrel import (LinearRelation, dist, from_matrix, from_resolvent,
                     is_maximally_monotone, is_monotone, is_symmetric,
                     normal_cone_of_subspace, resolvent_of)

__version__ = "0.1.0"
