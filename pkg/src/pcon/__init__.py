"""Conductance-based graph clustering by peeling."""
