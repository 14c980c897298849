"""Exact search for lattice embeddings K_d^perp -> L_{2,26} with few orthogonal roots."""

__version__ = "0.1.0"
