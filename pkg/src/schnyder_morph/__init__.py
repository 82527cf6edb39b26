"""Weighted Schnyder drawings of planar triangulations and planar morphs between them."""
from .drawing import Drawing, WeightDistribution, draw, is_planar, project, uniform_weights
from .flips import (FlipEvent, RegionWeights, apply_flip, apply_flop, flip_sequence, flippable_triangles,
                    predict_coords_facial, predict_coords_separating, region_weights)
from .morph import (MorphPlan, MorphStep, morph_facial_flip, morph_separating_flip, morph_weights,
                    plan_morph, rebalance_weights, render_frames)
from .recognize import RecognitionResult, classify_edges, recognize, solve_weights
from .schnyder import (RegionDecomposition, SchnyderWood, Violation, compute_wood, descendants,
                       paths_and_regions, restrict_wood, validate_wood)
from .triangulation import (Triangulation, TriangleRef, build, dual_distance_sum, random_triangulation,
                            remove_interior, restrict, separating_triangles)
from .verify import CollapseCertificate, area_polynomial, certify_step, enumerate_woods

__all__ = [
    "CollapseCertificate", "Drawing", "FlipEvent", "MorphPlan", "MorphStep", "RecognitionResult",
    "RegionDecomposition", "RegionWeights", "SchnyderWood", "TriangleRef", "Triangulation", "Violation",
    "WeightDistribution", "apply_flip", "apply_flop", "area_polynomial", "build", "certify_step",
    "classify_edges", "compute_wood", "descendants", "draw", "dual_distance_sum", "enumerate_woods",
    "flip_sequence", "flippable_triangles", "is_planar", "morph_facial_flip", "morph_separating_flip",
    "morph_weights", "paths_and_regions", "plan_morph", "predict_coords_facial", "predict_coords_separating",
    "project", "random_triangulation", "rebalance_weights", "recognize", "region_weights", "remove_interior",
    "render_frames", "restrict", "restrict_wood", "separating_triangles", "solve_weights", "uniform_weights",
    "validate_wood",
]
