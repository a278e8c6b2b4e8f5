"""Precoloring extension for proper edge colorings of the torus C_r^d."""
from .coloring import PartialEdgeColoring, is_proper
from .extend_common import ExtensionResult
from .extend_even import extend_even
from .extend_odd import extend_odd
from .matching import base_coloring, build_distance2_counterexample, extend_distance4_matching
from .oracle import solve
from .torus import EdgeId, TorusInstance, build_torus

__version__ = "0.1.0"

__all__ = [
    "PartialEdgeColoring", "is_proper", "ExtensionResult", "extend_even", "extend_odd",
    "base_coloring", "build_distance2_counterexample", "extend_distance4_matching",
    "solve", "EdgeId", "TorusInstance", "build_torus",
]
