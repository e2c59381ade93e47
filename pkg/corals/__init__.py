"""Tropical Corals - exact enumeration and counting of tropical corals on the truncated cone."""

__version__ = "1.0.0"
