"""Exact-arithmetic verification engine for one-parameter subgroup
classifications in rank-2 Chevalley groups (SL3, Sp4, G2)."""

__version__ = "0.1.0"
