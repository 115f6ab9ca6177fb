"""Once-punctured-torus bundles: twist words, Farey edge paths, surfaces and volume."""

__version__ = "0.1.0"

from .sl2z import (L, MatSL2, QuadraticSurd, R, Slope, TwistWord, apply_to_slope,
                   attracting_fixed_point, compose, is_hyperbolic, rl_factorize,
                   surd_continued_fraction, word_to_matrix)
from .farey import build_strip, minimal_paths, path_period, quotient_graph
from .surfaces import build_surface, guts_report, sidedness
from .triangulation import build_layered_triangulation, gluing_equations
from .hyperbolic import lobachevsky, regular_ideal_volume, solve_geometric, volume
