"""Tropical Corals - HTTP API."""
