"""PolarFly: diameter-2 network topologies from Erdős–Rényi polarity graphs."""

from .ergraph import (ErGraph, Graph, VertexClass, build_er, build_er_via_polarity, diameter,
                      verify_property1, verify_structure)
from .expand import expand_nonquadric, expand_quadric
from .gf import FieldSpec, field_for_order, make_field
from .layout import build_layout, verify_layout
from .routing import compact_valiant_route, min_route, valiant_route

__all__ = ["ErGraph", "FieldSpec", "Graph", "VertexClass", "build_er", "build_er_via_polarity",
           "build_layout", "compact_valiant_route", "diameter", "expand_nonquadric", "expand_quadric",
           "field_for_order", "make_field", "min_route", "valiant_route", "verify_layout",
           "verify_property1", "verify_structure"]
