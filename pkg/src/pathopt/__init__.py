"""Graph partitioning heuristics: Path Optimization, FM local search, simulated
annealing, greedy constructions and near-greedy analysis."""

__version__ = "0.1.0"
