"""Diameter-two orientations of undirected graphs: search, verification, refutation."""

from orientdiam.graph import (
    Graph,
    GraphFormatError,
    GeneratorExhausted,
    codegree,
    min_degree,
    parse_graph,
    random_graph_with_min_degree,
    serialize_graph,
    underlying_diameter,
)
from orientdiam.orientation import (
    Orientation,
    ViolationReport,
    check_diameter_two,
    diameter,
    directed_distance,
    is_strong,
    reverse,
    violation_report,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphFormatError",
    "GeneratorExhausted",
    "Orientation",
    "ViolationReport",
    "check_diameter_two",
    "codegree",
    "diameter",
    "directed_distance",
    "is_strong",
    "min_degree",
    "parse_graph",
    "random_graph_with_min_degree",
    "reverse",
    "serialize_graph",
    "underlying_diameter",
    "violation_report",
    "__version__",
]
