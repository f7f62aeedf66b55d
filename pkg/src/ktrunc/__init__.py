"""Exact computation of relative K-groups of truncated polynomial rings
k[x]/(x^e) over prime fields, with every closed-form answer cross-checked
against brute-force routes."""

__version__ = "0.1.0"
