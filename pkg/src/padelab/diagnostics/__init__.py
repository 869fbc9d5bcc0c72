"""Rates, radii, regularization, zero tracking and system-level probes."""
from .independence import IndependenceVerdict, polynomial_independence, verify_witness
from .lemma import KSpec, LemmaReport, lemma_bound_check
from .rates import (DegenerateHankel, FabryResult, RadiusEstimate, RateEstimate, approximation_error_rate,
                    estimate_R_star, fabry, hadamard_radius, hankel_determinants, rate_estimate, theta)
from .regularize import RegularizedSequence, regularize, upper_hull
from .system import CombinationEvidence, ConjectureProbe, ScanEvidence, conjecture_probe, projective_grid, \
    system_pole_scan
from .zeros import Cluster, SingularityEntry, SingularityReport, TrajectorySet, classify, qstar_distances, track_zeros

__all__ = [
    "Cluster", "CombinationEvidence", "ConjectureProbe", "DegenerateHankel", "FabryResult", "IndependenceVerdict",
    "KSpec", "LemmaReport", "RadiusEstimate", "RateEstimate", "RegularizedSequence", "ScanEvidence",
    "SingularityEntry", "SingularityReport", "TrajectorySet", "approximation_error_rate", "classify",
    "conjecture_probe", "estimate_R_star", "fabry", "hadamard_radius", "hankel_determinants", "lemma_bound_check",
    "polynomial_independence", "projective_grid", "qstar_distances", "rate_estimate", "regularize",
    "system_pole_scan", "theta", "track_zeros", "upper_hull", "verify_witness",
]
