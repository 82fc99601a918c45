"""Unicast capacity of layered linear deterministic relay networks over F_p."""

from .builder import GainSpec, GenParams, build_from_gains, levels_from_snr, random_network
from .gfp import ContractError, DependencySolution, FieldSpec, FMatrix, check_forward, find_removable_input, rank, solve_dependency
from .io import dumps_network, load_network, loads_network, to_dot
from .network import Cut, Edge, LayeredNetwork, Node, adjacency, cut_edges, cut_value, layer_cut_bound, validate
from .oracle import OracleResult, brute_force_capacity, li_path_capacity, verify_paths
from .solver import PathSet, SolveResult, Solver, SolverConfig, capacity

__all__ = [
    "GainSpec", "GenParams", "build_from_gains", "levels_from_snr", "random_network",
    "ContractError", "DependencySolution", "FieldSpec", "FMatrix", "check_forward", "find_removable_input",
    "rank", "solve_dependency",
    "dumps_network", "load_network", "loads_network", "to_dot",
    "Cut", "Edge", "LayeredNetwork", "Node", "adjacency", "cut_edges", "cut_value", "layer_cut_bound", "validate",
    "OracleResult", "brute_force_capacity", "li_path_capacity", "verify_paths",
    "PathSet", "SolveResult", "Solver", "SolverConfig", "capacity",
]
