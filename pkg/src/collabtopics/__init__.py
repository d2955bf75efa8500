"""Collaboration-topic analysis of publication careers.

Builds per-scientist co-citing networks, detects research topics by
modularity maximization, decomposes careers into per-collaborator
series, runs time-controlled and degree-preserved null models, and
emits the full statistics suite as figure-keyed CSV tables.
"""

__version__ = "0.1.0"
