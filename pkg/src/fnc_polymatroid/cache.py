"""
Rank cache for representation-backed rank oracles.

Ranks of subspace sums are recomputed by elimination on demand; the
node-rank checks and polymatroid tables ask for the same subsets repeatedly,
so results are kept in a bounded LRU keyed by subset bitmask.
"""

from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

from .config import PolymatroidConfig, get_config


@dataclass
class CacheStats:
    """Statistics about the cache."""

    entries: int
    capacity: int
    hits: int
    misses: int
    evictions: int

    def to_dict(self) -> dict:
        return {
            "entries": self.entries,
            "capacity": self.capacity,
            "hits": self.hits,
            "misses": self.misses,
            "evictions": self.evictions,
        }


class RankCache:
    """Bounded LRU map from subset bitmask to rank."""

    def __init__(self, config: Optional[PolymatroidConfig] = None):
        self.config = config or get_config().polymatroid
        self._capacity = max(1, self.config.rank_cache_size)
        self._entries: OrderedDict[int, int] = OrderedDict()

        # Statistics
        self._hits = 0
        self._misses = 0
        self._evictions = 0

    @property
    def stats(self) -> CacheStats:
        return CacheStats(
            entries=len(self._entries),
            capacity=self._capacity,
            hits=self._hits,
            misses=self._misses,
            evictions=self._evictions,
        )

    def get(self, mask: int) -> Optional[int]:
        value = self._entries.get(mask)
        if value is None:
            self._misses += 1
            return None
        self._entries.move_to_end(mask)
        self._hits += 1
        return value

    def put(self, mask: int, value: int) -> None:
        self._entries[mask] = value
        self._entries.move_to_end(mask)
        while len(self._entries) > self._capacity:
            self._entries.popitem(last=False)
            self._evictions += 1

    def clear(self) -> None:
        self._entries.clear()
