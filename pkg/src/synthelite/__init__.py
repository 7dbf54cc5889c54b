"""Synthelite: expert-steerable retrosynthesis planning.

An LLM plans disconnections step by step against a semantically indexed
template library (phase 1); a similarity-weighted tree search then refines
each plan toward purchasable materials (phase 2).
"""

__version__ = "0.1.0"
