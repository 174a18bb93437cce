"""Tournament linkage, domination structures and edge-disjoint Hamilton cycles."""

from .connectivity import connectivity, menger_paths
from .engine import EngineConfig, EngineError, build_good_structure, k_hamilton_cycles, single_hamilton
from .generators import gen_extremal, gen_planted, gen_random, gen_rotational, gen_transitive
from .graph import Digraph, read_tournament, write_tournament
from .hamilton import hamilton_cycle_camion, validate_cycle

__all__ = [
    "Digraph",
    "EngineConfig",
    "EngineError",
    "build_good_structure",
    "connectivity",
    "gen_extremal",
    "gen_planted",
    "gen_random",
    "gen_rotational",
    "gen_transitive",
    "hamilton_cycle_camion",
    "k_hamilton_cycles",
    "menger_paths",
    "read_tournament",
    "single_hamilton",
    "validate_cycle",
    "write_tournament",
]
