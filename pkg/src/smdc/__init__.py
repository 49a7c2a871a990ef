"""Symmetrical multilevel diversity coding toolkit.

Exact rate-region computation, subset entropy inequality verification,
coefficient-chain construction, and erasure/secret-sharing codecs.
"""

__version__ = "0.1.0"
