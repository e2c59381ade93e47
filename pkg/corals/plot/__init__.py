"""Tropical Corals - Figures."""
