"""Rainbow clique subdivisions in properly edge-colored graphs."""

__version__ = "0.1.0"
