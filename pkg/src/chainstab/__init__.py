"""Exact Bridgeland-stability toolkit for chains: lattices, charges, the A_n model, walls, SOD mutations and a tower rewrite engine."""
__version__ = "0.1.0"
