"""Markov chain ensembles for k:1 nested and unnested districting plans."""

__version__ = "1.0.0"
