"""DC power-flow models with flow-control buses.

Three dispatch models over one grid representation: a pure network-flow model,
the classical DC (electrical) model, and a hybrid model where a chosen set of
buses may redistribute flow freely. On top of those: an in-house LP/MILP
engine, a min-cost-flow solver used as an independent oracle for the flow
model, controller-placement search with graph-theoretic certificates, and the
experiment drivers behind the lambda-sweep, placement and load-scaling
studies.
"""

from .case_io import SamplingConfig, build_grid, load_case, parse_case
from .grid_model import (ControlSet, Flow, PowerGrid, check_feasible,
                         flow_cost, net_outflow)

__all__ = [
    "SamplingConfig",
    "build_grid",
    "load_case",
    "parse_case",
    "ControlSet",
    "Flow",
    "PowerGrid",
    "check_feasible",
    "flow_cost",
    "net_outflow",
]

__version__ = "0.1.0"
