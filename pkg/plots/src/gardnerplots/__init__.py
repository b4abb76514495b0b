"""Figure rendering for lattice-wave CSV/JSON artifacts."""

__version__ = "0.1.0"
