"""Random Edge on simple 3-polytopes: exact expectations, realizability, constructions."""

from .graph import DPGError, PolytopeDigraph, parse_dpg, serialize_dpg

__all__ = ["DPGError", "PolytopeDigraph", "parse_dpg", "serialize_dpg"]
__version__ = "0.1.0"
