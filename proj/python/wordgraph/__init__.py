"""Word similarity graphs, Louvain communities, and betweenness seed words.

The heavy lifting lives in the compiled extension; this package just
re-exports it under a stable name.
"""

from ._core import (
    ConfigError,
    DomainError,
    IoError,
    ParseError,
    __version__,
    adjusted_rand_index,
    build_graph,
    communities,
    cosine_similarity,
    gen_synthetic,
    pipeline,
    seeds,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "IoError",
    "ParseError",
    "__version__",
    "adjusted_rand_index",
    "build_graph",
    "communities",
    "cosine_similarity",
    "gen_synthetic",
    "pipeline",
    "seeds",
]
