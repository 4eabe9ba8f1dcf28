"""Smallest intersecting ball of compact convex sets via a zero-sum game."""

from .errors import (DimensionMismatch, EmptyScene, InvalidInput, InvalidObject, InvalidScene,
                     NonConvergence, SceneSyntaxError, SibError, UnsupportedDimension)
from .geometry import (Aabb, Ball, Ellipsoid, Point, Polytope, contains, diameter_upper_bound,
                       project, representative, scene_metrics, support)
from .learner import DualIterate, LearnerState, best_fixed_response_value
from .oracle import OracleResult, coreset_seb, subgradient_sib
from .scene import ResultFile, Scene, parse_result, parse_scene, serialize_result, serialize_scene
from .solver import (PrimalResponse, Solution, SolverParams, Termination, best_response, lower_bound,
                     seb_game_value, solve, upper_bound)
from .svg import render_svg

__version__ = "0.1.0"
