"""Pointer-machine VM, rule language, and a slime-mold simulator realizing it."""

__version__ = "0.1.0"
