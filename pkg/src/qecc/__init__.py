"""Query-efficient correlation clustering."""

from .algorithms import RunResult, qecc, qecc_heur, qecc_nonadaptive, qwick_cluster
from .generators import (LowerBoundSpec, SyntheticSpec, generate_cluster_graph,
                         generate_lower_bound_instance, generate_synthetic)
from .graph import (Clustering, SimilarityGraph, build_from_edge_list, edge_sign, load_graph,
                    positive_components)
from .metrics import brute_force_opt, cost, evaluate, precision_recall
from .oracle import BudgetedOracle, BudgetExhausted

__all__ = [
    "BudgetExhausted", "BudgetedOracle", "Clustering", "LowerBoundSpec", "RunResult",
    "SimilarityGraph", "SyntheticSpec", "brute_force_opt", "build_from_edge_list", "cost",
    "edge_sign", "evaluate", "generate_cluster_graph", "generate_lower_bound_instance",
    "generate_synthetic", "load_graph", "positive_components", "precision_recall", "qecc",
    "qecc_heur", "qecc_nonadaptive", "qwick_cluster",
]
