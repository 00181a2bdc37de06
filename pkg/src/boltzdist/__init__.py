"""Distance between a global Maxwellian and gas distribution functions."""

from .dist import DistributionField, MaxwellianParams, MomentSummary, local_maxwellian, maxwellian_eval, moments, entropy
from .functionals import (
    DistanceReport,
    F_maxwellian_closed,
    dist_maxwellians_closed,
    distance,
    distance_bregman,
    functional_F,
    drift_lower_bound,
)
from .grid import SpatialDomain, SphereRule, VelocityGrid, integrate, make_domain, make_sphere_rule, make_velocity_grid
from .projection import MomentClass, ProjectionResult, dist_lower_bound_over_class, project, project_oracle

__all__ = [
    "DistributionField", "MaxwellianParams", "MomentSummary", "local_maxwellian", "maxwellian_eval",
    "moments", "entropy", "DistanceReport", "F_maxwellian_closed", "dist_maxwellians_closed", "distance",
    "distance_bregman", "functional_F", "drift_lower_bound", "SpatialDomain", "SphereRule", "VelocityGrid",
    "integrate", "make_domain", "make_sphere_rule", "make_velocity_grid", "MomentClass", "ProjectionResult",
    "dist_lower_bound_over_class", "project", "project_oracle",
]
