"""Tropical Corals - API v1 Routers"""

from corals.api.v1 import corals, counting, moduli, morse, quotient

__all__ = ["corals", "counting", "moduli", "morse", "quotient"]
