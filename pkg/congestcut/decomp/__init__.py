# flake8: noqa F401, F403
from .fragments import (
    Fragment,
    FragmentDecomposition,
    decomposition_to_json,
    fragment_decompose,
    initial_components,
    skeleton_to_dot,
)
from .layering import (
    Bough,
    Layering,
    build_layering,
    layer_nonhighways,
    layer_rule,
    layer_skeleton,
    bough_subtree_scope,
    maximal_bough_paths,
)
from .skeleton import PathId, Skeleton, SkeletonEntry

__all__ = [
    "Fragment",
    "FragmentDecomposition",
    "decomposition_to_json",
    "fragment_decompose",
    "initial_components",
    "skeleton_to_dot",
    "Bough",
    "Layering",
    "build_layering",
    "layer_nonhighways",
    "layer_rule",
    "layer_skeleton",
    "maximal_bough_paths",
    "bough_subtree_scope",
    "PathId",
    "Skeleton",
    "SkeletonEntry",
]
