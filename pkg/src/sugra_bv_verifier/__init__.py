"""Exact-arithmetic verification engine for the BV formulation of N=1, D=4 Palatini-Cartan supergravity."""

__version__ = "0.1.0"
