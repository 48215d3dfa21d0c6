"""Distances, potentials, mass matching and invariant checks."""

from .checks import (ContractionReport, EnvelopeReport, GrowthFit, check_aronson_benilan,
                     check_contraction, check_envelope, estimate_growth_constant)
from .coefficient import coefficient_bound_margin, growth_bounds, mean_value_coefficient
from .mass import BracketError, mass_function, match_k0
from .monitors import (AronsonBenilanMonitor, CompanionMonitor, DistanceMonitor, MassMonitor,
                       SandwichMonitor, barenblatt_reference)
from .norms import l1_distance, scheme_l1_distance, sup_distance, weighted_l1_distance
from .potentials import (InfiniteMassError, PotentialProfile, green_potential_radial,
                         log_growth_fit, newtonian_potential_radial)

__all__ = [
    "AronsonBenilanMonitor", "BracketError", "CompanionMonitor", "ContractionReport", "DistanceMonitor",
    "EnvelopeReport", "GrowthFit", "InfiniteMassError", "MassMonitor", "PotentialProfile", "SandwichMonitor",
    "barenblatt_reference", "check_aronson_benilan", "check_contraction", "check_envelope",
    "coefficient_bound_margin", "estimate_growth_constant", "green_potential_radial", "growth_bounds",
    "l1_distance", "log_growth_fit", "mass_function", "match_k0", "mean_value_coefficient",
    "newtonian_potential_radial", "scheme_l1_distance", "sup_distance", "weighted_l1_distance",
]
