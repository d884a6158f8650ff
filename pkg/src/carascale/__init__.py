"""Projection-and-rescaling solver for ``find x in L with x > 0`` using
limited-support basic procedures."""

from .caratheodory import ActiveBasis, NumericalBreakdown, check_consistency, init_active, mirr
from .instances import Instance, gen_dual_feasible, gen_primal_feasible
from .linalg import (RankDeficient, complement_basis, orthonormalize, positive_part, project,
                     pseudoinverse_direct)
from .procedures import ProcedureKind, StoppingPolicy, run_basic, run_baseline, run_procedure
from .rescaling import SolverConfig, solve, verify_certificate

__version__ = "0.1.0"
