from .lib.admissibility.admissibility import blowup_sum_range, find_heavy_sets, heavy_set_degrees, is_admissible, \
    self_admissible
from .lib.blowup.blowup import blowup_value, build_blowup, heavy_degree_check, optimize_blowup, turan_closed_forms
from .lib.bounds.bounds import averaging_propagate, fk_m, flat_interval, integer_am_gm_max, known_extremal_value, \
    large_a_gate, turan_growth_checks
from .lib.catalog.catalog import TuranSpec, lift_graph_pattern, make_turan_pattern, named_graph, named_pattern
from .lib.core.multigraph import Multigraph, MultiplicityProfile, Pattern, edge_product, edge_sum, is_sq_graph
from .lib.density.density import clone_reduce, connected_reduce, pi_density, sigma_density, turan_asymptotics, \
    vertex_count_bound
from .lib.oracle.oracle import brute_force_extremal
from .lib.search.search import canonical_form, enumerate_graphs, survey

__all__ = [
    "Multigraph", "MultiplicityProfile", "Pattern", "TuranSpec",
    "edge_sum", "edge_product", "is_sq_graph",
    "make_turan_pattern", "lift_graph_pattern", "named_graph", "named_pattern",
    "sigma_density", "pi_density", "turan_asymptotics", "clone_reduce", "connected_reduce", "vertex_count_bound",
    "build_blowup", "blowup_value", "optimize_blowup", "turan_closed_forms", "heavy_degree_check",
    "averaging_propagate", "integer_am_gm_max", "fk_m", "flat_interval", "large_a_gate", "known_extremal_value",
    "turan_growth_checks",
    "is_admissible", "blowup_sum_range", "find_heavy_sets", "heavy_set_degrees", "self_admissible",
    "brute_force_extremal",
    "enumerate_graphs", "canonical_form", "survey",
]

__version__ = '0.1.0'
