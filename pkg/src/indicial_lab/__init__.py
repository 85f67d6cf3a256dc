"""Indicial-root analysis of the linearized supergravity operator on B^7 x S^4."""

from .polynomials import (BivariatePoly, ComplexRoot, GaussianRational, NonConvergence, UniPoly,
                          determinant4, solve_roots)
from .spectrum import EigenEntry, FormKind, IndexBelowMinimum, eigenvalue, multiplicity, spectrum_table
from .sectors import InadmissibleLambda, SectorId, SectorPolynomial, indicial_poly, sector_sweep
from .roots import (NotSingular, RootRecord, RootTable, build_table, gap_scan, kernel_vector,
                    symmetry_check)
from .scattering import (DegenerateProfile, PoleAtNonpositiveInteger, ScatteringSample, log_gamma,
                         phase, real_profile_check)
from .expansion import (BadDelta, BoundaryData, ExpansionSpec, ExpansionTerm, build_expansion,
                        render, residual_order)

__version__ = "0.1.0"
