"""Exact-arithmetic calculator for low-degree Donaldson invariants from
Seiberg-Witten basic-class data."""

__version__ = "0.1.0"
