"""Spectral toolkit for vector Sturm-Liouville operators -psi'' + V psi on [0, 1]."""
from .errors import (ClusterAmbiguity, ConfigError, ContourTooClose, DegenerateZ, DimensionMismatch,
                     DomainError, NearExceptionalSet, NearPole, RankMismatch, SingularMatrix,
                     StepFailure, UnresolvedCluster, VSLError)
from .geometry import BoundaryGeometry, TwistedBlock, decompose, verify_geometry
from .problem import (BoundaryConditions, Potential, ProblemDef, boundary_map, load_problem,
                      problem_from_dict, problem_to_dict, validate)
from .propagate import PropagationResult, end_values, entire_trig, fundamental, fundamental_dlambda
from .report import Check, VerificationReport
from .spectrum import (EigenvalueRecord, SpectralTriplet, WeylSample, find_eigenvalues,
                       fingerprint_distance, first_eigenvalues, localization_intervals, m_function,
                       residue, spectral_triplet, triplet_via_derivative, z_matrix)
from .verify import asymptotics_trend, fd_reference_eigenvalues, run_suite
from .wronskian import (Contour, count_zeros, det_w, rouche_margin, unperturbed, unperturbed_inverse,
                        wronskian)

__version__ = "0.1.0"
