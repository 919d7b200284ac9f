"""Product-distinguishing edge labellings of graphs.

Graphs, exact colourings, labelling predicates, constructive labelling
algorithms and a backtracking oracle, plus a ``mult123`` command line tool.
"""

__version__ = "0.1.0"

from ._accel import backend
from .errors import (
    BudgetExceeded,
    ConstructionError,
    GraphError,
    LabellingError,
    Mult123Error,
    PreconditionError,
    RepairFailed,
)
from .graph import Graph, parse_edge_list, parse_graph6, to_graph6
from .labelling import (
    EdgeLabelling,
    ProductClass,
    Requirement,
    TotalLabelling,
    check_shape,
    conflicts,
    is_m_proper,
    is_p_proper,
    is_s_proper,
    satisfies,
)

__all__ = [
    "BudgetExceeded",
    "ConstructionError",
    "EdgeLabelling",
    "Graph",
    "GraphError",
    "LabellingError",
    "Mult123Error",
    "PreconditionError",
    "ProductClass",
    "RepairFailed",
    "Requirement",
    "TotalLabelling",
    "__version__",
    "backend",
    "check_shape",
    "conflicts",
    "is_m_proper",
    "is_p_proper",
    "is_s_proper",
    "parse_edge_list",
    "parse_graph6",
    "satisfies",
    "to_graph6",
]
