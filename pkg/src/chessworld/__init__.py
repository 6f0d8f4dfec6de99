"""Toolkit for the chess move-to-state tracking benchmark.

Rebuilds aligned move-token / state-label trajectory shards from PGN games
and seeded random legal self-play, and scores state predictions with exact
per-timestep metrics.
"""

__version__ = "0.1.0"
