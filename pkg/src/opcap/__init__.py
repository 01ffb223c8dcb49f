"""Mistake-bounded online learning games under per-round arithmetic caps."""

__version__ = "0.1.0"
