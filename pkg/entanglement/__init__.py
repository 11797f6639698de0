"""
Entanglement package for the monogamy audit toolkit.

This package contains the bipartite entanglement measures:
- measures: concurrence, negativity, CREN and residual entanglements
- convex_roof: numerical upper bounds on convex-roof measures
"""

from .convex_roof import ConvexRoofOptimizer, DecompositionPoint, RoofObjective, roof_upper_bound
from .measures import (
    NegativityConvention,
    concurrence_pure,
    concurrence_pure_schmidt,
    cren,
    is_ppt,
    mixed_concurrence,
    negativity,
    negativity_pure_schmidt,
    residual_entanglement,
    residual_epsilon,
    residual_kappa,
    spin_flip,
    tilde_overlap,
    wootters_concurrence,
)

__all__ = [
    'ConvexRoofOptimizer', 'DecompositionPoint', 'RoofObjective', 'roof_upper_bound',
    'NegativityConvention', 'concurrence_pure', 'concurrence_pure_schmidt', 'cren', 'is_ppt',
    'mixed_concurrence', 'negativity', 'negativity_pure_schmidt', 'residual_entanglement',
    'residual_epsilon', 'residual_kappa', 'spin_flip', 'tilde_overlap', 'wootters_concurrence',
]
