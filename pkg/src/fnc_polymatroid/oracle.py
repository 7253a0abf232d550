"""
Base class for rank oracles.

Both a dense rank table and a subspace representation answer the same
questions (rank of a subset, membership of an integer vector), so every
check in the bridge accepts either.
"""

from abc import ABC, abstractmethod
from typing import Iterable, Sequence

from .errors import PolymatroidError
from .vectors import check_index, mask_of, subset_sum, support_mask


class RankOracle(ABC):
    """A rank function on the subsets of {1, ..., r}."""

    @property
    @abstractmethod
    def r(self) -> int:
        """Ground-set size."""
        pass

    @abstractmethod
    def rank(self, mask: int) -> int:
        """Rank of the subset encoded by `mask` (element i <-> bit i-1)."""
        pass

    @property
    def full_mask(self) -> int:
        return (1 << self.r) - 1

    def rank_of_set(self, subset: Iterable[int]) -> int:
        return self.rank(mask_of(subset, self.r))

    def singleton_rank(self, i: int) -> int:
        check_index(i, self.r)
        return self.rank(1 << (i - 1))

    def singleton_ranks(self) -> list[int]:
        return [self.singleton_rank(i) for i in range(1, self.r + 1)]

    def rho_max(self) -> int:
        """Largest singleton rank; 0 on an empty ground set."""
        return max(self.singleton_ranks(), default=0)

    def contains(self, u: Sequence[int]) -> bool:
        """
        Membership |u(A)| <= rank(A) for all A.

        Only subsets of the support are tested; for a monotone rank function
        that decides every A.
        """
        self._check_length(u)
        supp = support_mask(u)
        sub = supp
        while True:
            if subset_sum(u, sub) > self.rank(sub):
                return False
            if sub == 0:
                return True
            sub = (sub - 1) & supp

    def _check_length(self, u: Sequence[int]) -> None:
        if len(u) != self.r:
            raise PolymatroidError(f"vector of length {len(u)} on a ground set of size {self.r}")
