"""Desk-scale numerics for the analytic side: masses, Lelong numbers, envelopes, the J^* probe."""

from .envelope import InfeasibleEnvelope, convex_nondecreasing_minorant, envelope_violation, minimal_pair_envelope
from .grids import ApproxPair, GridFunction, RadialProfile, dumps_csv, load_csv, loads_csv, save_csv
from .lelong import least_negative_example, lelong_estimate, max_regularize
from .mass import ConvergenceReport, ddc_mass, default_epsilons, mass_split, model_family, monotone_convergence_report
from .probe import DegenerateProbe, jstar_singularity_probe

__all__ = [
    "ApproxPair",
    "ConvergenceReport",
    "DegenerateProbe",
    "GridFunction",
    "InfeasibleEnvelope",
    "RadialProfile",
    "convex_nondecreasing_minorant",
    "ddc_mass",
    "default_epsilons",
    "dumps_csv",
    "envelope_violation",
    "jstar_singularity_probe",
    "least_negative_example",
    "lelong_estimate",
    "load_csv",
    "loads_csv",
    "mass_split",
    "max_regularize",
    "minimal_pair_envelope",
    "model_family",
    "monotone_convergence_report",
    "save_csv",
]
