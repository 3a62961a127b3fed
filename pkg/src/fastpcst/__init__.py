"""Prize-collecting Steiner tree heuristics (MSTG, FGW'), pruning/post-processing
(GPrA, TGA, MST technique, P3), exact oracles and DIMACS STP I/O."""

__version__ = "0.1.0"

from .errors import ConnectivityError, DomainError, ParseError, PCSTError, StructuralError
from .graph import Graph, SolutionTree, is_connected, minimum_spanning_tree, net_cost, net_weight
from .prune import TreeInstance, gpra, prune_solution, select_pseudo_root, strong_prune
from .grow import PathCandidate, enumerate_path_candidates, tga
from .pipeline import P3Config, mst_technique, mstg, p3
from .fgw import fgw_growth, fgw_prime, run_fgw, split_edges
from .verify import Certificate, exact_nwstpt, exact_pcst, gw_lower_bound, validate_solution
from .stp import GeneratorParams, generate_instance, parse_solution, parse_stp, write_graph, write_solution

__all__ = [
    "ConnectivityError", "DomainError", "ParseError", "PCSTError", "StructuralError",
    "Graph", "SolutionTree", "is_connected", "minimum_spanning_tree", "net_cost", "net_weight",
    "TreeInstance", "gpra", "prune_solution", "select_pseudo_root", "strong_prune",
    "PathCandidate", "enumerate_path_candidates", "tga",
    "P3Config", "mst_technique", "mstg", "p3",
    "fgw_growth", "fgw_prime", "run_fgw", "split_edges",
    "Certificate", "exact_nwstpt", "exact_pcst", "gw_lower_bound", "validate_solution",
    "GeneratorParams", "generate_instance", "parse_solution", "parse_stp", "write_graph", "write_solution",
]
