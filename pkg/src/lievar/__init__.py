"""Exact verification workbench for nilpotent Lie algebras over GF(p)."""
from __future__ import annotations

__version__ = "0.1.0"
