"""Deciding extension problems: does some minimal (or maximal) solution
extend a given pre-solution?"""

from .framework import (
    Direction,
    ExtensionInstance,
    MonotoneProblem,
    ProblemId,
    Verdict,
    decide_extension_dual_fpt,
    decide_extension_oracle,
    get_problem,
    is_extremal,
)
from .graphs import Graph, parse_graph, serialize_graph

__all__ = [
    "Direction",
    "ExtensionInstance",
    "Graph",
    "MonotoneProblem",
    "ProblemId",
    "Verdict",
    "decide_extension_dual_fpt",
    "decide_extension_oracle",
    "get_problem",
    "is_extremal",
    "parse_graph",
    "serialize_graph",
]

__version__ = "0.1.0"
