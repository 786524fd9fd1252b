"""Exact lattice criteria for separable Campana rational connectedness of
toric orbifolds in positive characteristic."""

from .campana import (
    INF,
    CampanaOrbifold,
    Certificate,
    ContactOrderSet,
    Marking,
    balancing_check,
    campana_type_check,
    scrc_check,
)
from .fan import Fan, SingularityClass, classify_cone, star_subdivide, validate
from .witness import (
    Status,
    Verdict,
    crit_sing,
    crit_sing_via_blowdown,
    decide,
    witness_smooth,
    witness_surface,
    wps_repair,
    wps_verdict,
)
from .wps import recover_weights, well_formed, wps_fan

__version__ = "0.1.0"
