"""Constructible graphs, exact cops-and-robbers solving and pursuit simulation."""

from .graph import BudgetExceeded, FiniteGraph, GraphError, NeighborOracle, distance

__version__ = "0.1.0"

__all__ = ["BudgetExceeded", "FiniteGraph", "GraphError", "NeighborOracle", "distance", "__version__"]
