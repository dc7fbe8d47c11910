"""Exact tools for topological and algebraic lower bounds on graph coloring."""

__version__ = "0.1.0"
