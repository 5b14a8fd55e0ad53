"""Exact entanglement spectra of valence-bond-solid ground states."""

__version__ = "0.1.0"
