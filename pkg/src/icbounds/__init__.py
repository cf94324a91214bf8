"""Capacity-region bounds for the two-user interference channel with
conferencing transmitters.

Subpackages compute inner and outer bounds exactly for the linear
deterministic channel and numerically for the Gaussian channel, certify the
constant per-user gap between them, and check the reciprocity relation
between a channel and its Hermitian transpose.
"""

from .polytope import (
    APPROX,
    EXACT,
    ClaimEntry,
    ClaimsReport,
    GapReport,
    HalfspaceSystem,
    LinearInequality,
    Region2D,
    fme_eliminate,
    fme_project,
    minkowski_shift,
    per_user_gap,
    project_to_rates,
    region_from_inequalities,
    region_from_json_dict,
    remove_redundant,
    vertices_2d,
)

__version__ = "0.1.0"
