"""Tropical Corals - Core module."""
