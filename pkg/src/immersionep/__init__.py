"""Multigraph immersion machinery with certified packing/covering duality."""

from .backend import BACKEND
from .multigraph import (
    EdgeRef,
    Multigraph,
    dissolve,
    lift,
    parse_graph_text,
    read_graph,
    serialize_graph_text,
    subdivide,
    to_dot,
    write_graph,
)
from .generators import (
    StarZoneMap,
    WallCoordinates,
    complete_graph,
    cycle_graph,
    disjoint_subwalls,
    grid,
    path_graph,
    plus_graph,
    random_multigraph,
    star_graph,
    star_tree,
    theta,
    wall,
    wall_plus,
)
from .immersion import (
    ImmersionModel,
    PackingResult,
    ValidityReport,
    components_met,
    enumerate_expansions,
    expansion_subgraph,
    find_expansion,
    grid_in_wallplus,
    max_packing,
    min_cover,
    restrict_model,
    validate_model,
)

__version__ = "0.1.0"
