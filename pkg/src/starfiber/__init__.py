"""Approximate distance labels for K4-free bridged graphs.

Build per-vertex labels of polylogarithmic size, then answer distance
queries within a factor of 4 from two labels alone:

    >>> from starfiber import flat_triangle, encode_graph
    >>> ls = encode_graph(flat_triangle(4))
    >>> ls.decode(0, 14)
    4
"""
from .classcheck import (find_induced_c4, find_induced_c5, is_bridged,
                         is_k4_free, quadrangle_condition,
                         spheres_triangle_free, triangle_condition)
from .codec import (LabelMismatchError, LabelParseError, LabelSet,
                    decode, decode_explain, decode_pair, deserialize_label,
                    encode_graph, serialize_label)
from .generators import (burned_lozenge, flat_triangle, glued_triangles,
                         lozenge, random_instance, random_tree)
from .graphs import (DisconnectedGraphError, Graph, GraphFormatError,
                     all_pairs, bfs_distances, format_graph, graph_hash,
                     interval, is_connected, metric_projection, parse_graph,
                     quasi_median)
from .stars import (ClassViolationError, Star, build_star, entrance, exits,
                    fiber_partition, median_vertex, star_labels,
                    total_boundary)
from .treelabels import encode_tree, tree_distance
from .verify import classify_pair, structural_invariants, verify_labels

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphFormatError", "DisconnectedGraphError",
    "parse_graph", "format_graph", "graph_hash", "all_pairs",
    "bfs_distances", "is_connected", "interval", "metric_projection",
    "quasi_median",
    "is_k4_free", "is_bridged", "triangle_condition", "quadrangle_condition",
    "find_induced_c4", "find_induced_c5", "spheres_triangle_free",
    "flat_triangle", "lozenge", "burned_lozenge", "glued_triangles",
    "random_instance", "random_tree",
    "ClassViolationError", "Star", "median_vertex", "build_star",
    "star_labels", "fiber_partition", "total_boundary", "entrance", "exits",
    "encode_tree", "tree_distance",
    "LabelSet", "LabelParseError", "LabelMismatchError", "encode_graph",
    "decode", "decode_explain", "decode_pair", "serialize_label",
    "deserialize_label",
    "verify_labels", "classify_pair", "structural_invariants",
    "__version__",
]
