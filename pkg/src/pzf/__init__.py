"""Probabilistic zero-forcing on graphs.

Simulation of the probabilistic color change rule and its variants,
an exact absorbing-chain oracle for small graphs, closed-form bound
evaluation, and reproduction of the grid / hypercube mean-propagation-time
tables.
"""

from .bounds import (BoundReport, diameter_bound, grid_bounds,
                     hypercube_upper_bound, isoperimetric_lower,
                     regular_upper_bound, star_tail_bound, summary_bounds)
from .exact import BudgetExceeded, ExactResult, exact_ept, exact_ept_min_over_starts
from .forcing import (CLASSIC, PULL, PUSH, PUSH_PULL, STANDARD, ForcingRule,
                      TrialRecord, closed_blue_count, constant_rule,
                      force_probability, parse_rule, run_trial, step,
                      vertex_absorption_prob)
from .graphs import (Graph, GraphError, GraphFamilySpec, bfs_distances,
                     diameter, eccentricity, edge_boundary, is_connected,
                     make_clique_ring, make_complete, make_cycle, make_grid,
                     make_hypercube, make_named_graph, make_path, make_star,
                     parse_edge_list, parse_graph_spec)
from .montecarlo import (DoublingProfile, EptSummary, MinStartsResult,
                         TailEstimate, default_start_candidates,
                         doubling_profile, estimate_ept,
                         estimate_ept_min_over_starts, resolve_workers,
                         tail_estimate)
from .rng import CounterRng, lane_uniforms, philox4x32

__version__ = "0.1.0"
