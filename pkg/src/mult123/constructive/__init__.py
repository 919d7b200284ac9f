"""Constructive labelling algorithms."""

from .four_chromatic import label_four_chromatic
from .generic import label_generic
from .parity import ParityTarget, parity_switch
from .repair import repair_conflicts
from .total import label_total
from .trace import Construction, ConstructionTrace, Milestone, TraceStep
from .two_labels import label_bipartite_two, label_complete, label_subcubic_two

__all__ = [
    "Construction",
    "ConstructionTrace",
    "Milestone",
    "ParityTarget",
    "TraceStep",
    "label_bipartite_two",
    "label_complete",
    "label_four_chromatic",
    "label_generic",
    "label_subcubic_two",
    "label_total",
    "parity_switch",
    "repair_conflicts",
]
