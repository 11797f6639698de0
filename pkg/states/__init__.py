"""
States package for the monogamy audit toolkit.

This package contains the named state constructors used by the worked
examples and counterexamples, and the seeded random-state generators.
"""

from .catalog import (
    BUILTIN_RECIPES,
    EXAMPLE1_PARAMETERS,
    GSD_EXAMPLE2_PARAMETERS,
    Example1Quantities,
    GsdClosedForms,
    StateRecipe,
    builtin_names,
    example1_closed_forms,
    example1_quoted_values,
    example1_state,
    ghz_state,
    gsd_closed_forms,
    gsd_state,
    kim_sanders_state,
    ou_state,
    resolve_builtin,
    w_state,
)
from .random_states import draw_rng, haar_random_pure, random_mixed, schmidt_rank_two_pure

__all__ = [
    'StateRecipe', 'BUILTIN_RECIPES', 'builtin_names', 'resolve_builtin',
    'w_state', 'ghz_state', 'example1_state', 'gsd_state', 'ou_state', 'kim_sanders_state',
    'EXAMPLE1_PARAMETERS', 'GSD_EXAMPLE2_PARAMETERS',
    'Example1Quantities', 'example1_quoted_values', 'example1_closed_forms',
    'GsdClosedForms', 'gsd_closed_forms',
    'draw_rng', 'haar_random_pure', 'random_mixed', 'schmidt_rank_two_pure',
]
