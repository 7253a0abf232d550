"""
Discrete polymatroids and their subspace representations.

A DiscretePolymatroid is a dense rank table over all 2^r subsets. A
Representation is a list of generator matrices over F_q whose column
spans V_1, ..., V_r define ranks rho(X) = dim(sum of V_i, i in X).

Vector sets (members, bases, excluded vectors, C-sets) are always
returned in lexicographic order.
"""

import itertools
import logging
from functools import cached_property
from math import prod
from typing import Iterable, Optional, Sequence

import numpy as np

from .cache import RankCache
from .config import PolymatroidConfig, get_config
from .errors import BudgetError, PolymatroidError
from .linalg import Field, Mat, hconcat, rank, random_matrix
from .models import Axiom, AxiomReport, AxiomViolation
from .oracle import RankOracle
from .vectors import (
    IntVector,
    add_unit,
    as_vector,
    check_index,
    elements_of,
    is_subvector,
    join,
    leq,
    support_mask,
    weight,
)

logger = logging.getLogger(__name__)


def _subset_sums(vectors: np.ndarray, r: int) -> np.ndarray:
    """Row j, column `mask`: the sum of vectors[j] over that subset."""
    count = vectors.shape[0]
    sums = np.zeros((count, 1 << r), dtype=np.int64)
    for i in range(r):
        half = 1 << i
        sums.reshape(count, -1, 2 * half)[:, :, half:] += vectors[:, i, None, None]
    return sums


class DiscretePolymatroid(RankOracle):
    """A discrete polymatroid given by its rank table."""

    def __init__(
        self,
        r: int,
        ranks: Sequence[int],
        config: Optional[PolymatroidConfig] = None,
    ):
        self.config = config or get_config().polymatroid
        if not 1 <= r <= self.config.max_ground_set:
            raise PolymatroidError(
                f"ground-set size {r} outside 1..{self.config.max_ground_set}"
            )
        if len(ranks) != 1 << r:
            raise PolymatroidError(f"rank table needs {1 << r} entries, got {len(ranks)}")
        table = tuple(int(x) for x in ranks)
        if any(x < 0 for x in table):
            raise PolymatroidError("rank values must be non-negative")
        self._r = r
        self._ranks = table

    @property
    def r(self) -> int:
        return self._r

    @property
    def table(self) -> tuple[int, ...]:
        return self._ranks

    def rank(self, mask: int) -> int:
        if not 0 <= mask <= self.full_mask:
            raise PolymatroidError(f"subset mask {mask} outside the ground set")
        return self._ranks[mask]

    @cached_property
    def rank_array(self) -> np.ndarray:
        arr = np.array(self._ranks, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DiscretePolymatroid) and (
            other._r,
            other._ranks,
        ) == (self._r, self._ranks)

    def __hash__(self) -> int:
        return hash((self._r, self._ranks))

    def __repr__(self) -> str:
        return f"DiscretePolymatroid(r={self._r})"

    # ==================== Serialization ====================

    def to_dict(self) -> dict:
        return {"r": self._r, "rank": {str(m): v for m, v in enumerate(self._ranks)}}

    @classmethod
    def from_dict(cls, data: dict) -> "DiscretePolymatroid":
        r = int(data["r"])
        entries = {int(k): int(v) for k, v in data["rank"].items()}
        missing = [m for m in range(1 << r) if m not in entries]
        if missing:
            raise PolymatroidError(f"rank table misses subset masks {missing[:8]}")
        return cls(r, [entries[m] for m in range(1 << r)])

    # ==================== Axioms ====================

    def validate_axioms(self) -> AxiomReport:
        """
        Check normalisation, monotonicity and submodularity.

        Monotonicity and submodularity are checked in their local forms (single-element
        increments and the pairs A+i, A+j); each reported pair is a genuine
        violation of the global axiom.
        """
        report = AxiomReport()
        ranks = self.rank_array
        masks = np.arange(1 << self._r, dtype=np.int64)

        if ranks[0] != 0:
            report.violations.append(
                AxiomViolation(Axiom.NORMALIZED, [[]], f"rank of the empty set is {ranks[0]}")
            )

        for i in range(self._r):
            bit = 1 << i
            base = masks[(masks & bit) == 0]
            bad = base[ranks[base] > ranks[base | bit]]
            for m in bad.tolist():
                a, b = m, m | bit
                report.violations.append(
                    AxiomViolation(
                        Axiom.MONOTONE,
                        [elements_of(a), elements_of(b)],
                        f"rank {ranks[a]} of the subset exceeds rank {ranks[b]} of its superset",
                    )
                )

        for i, j in itertools.combinations(range(self._r), 2):
            bi, bj = 1 << i, 1 << j
            base = masks[(masks & (bi | bj)) == 0]
            lhs = ranks[base | bi] + ranks[base | bj]
            rhs = ranks[base | bi | bj] + ranks[base]
            for m in base[lhs < rhs].tolist():
                a, b = m | bi, m | bj
                report.violations.append(
                    AxiomViolation(
                        Axiom.SUBMODULAR,
                        [elements_of(a), elements_of(b)],
                        f"rho(A)+rho(B) = {ranks[a] + ranks[b]} < "
                        f"rho(A|B)+rho(A&B) = {ranks[a | b] + ranks[a & b]}",
                    )
                )

        return report

    # ==================== Membership ====================

    def contains(self, u: Sequence[int]) -> bool:
        """|u(A)| <= rho(A) for every subset A (all 2^r subsets are tested)."""
        self._check_length(u)
        sums = _subset_sums(np.asarray(u, dtype=np.int64).reshape(1, self._r), self._r)
        return bool((sums[0] <= self.rank_array).all())

    def enumeration_size(self) -> int:
        return prod(b + 1 for b in self.singleton_ranks())

    @cached_property
    def _classified(self) -> tuple[list[IntVector], list[IntVector]]:
        """All componentwise-bounded vectors, split into (members, excluded)."""
        bounds = self.singleton_ranks()
        size = self.enumeration_size()
        if size > self.config.member_budget:
            raise BudgetError(
                f"enumerating {size} bounded vectors exceeds the member budget",
                required=size,
                budget=self.config.member_budget,
            )
        grid = np.array(
            list(itertools.product(*(range(b + 1) for b in bounds))), dtype=np.int64
        ).reshape(size, self._r)
        ranks = self.rank_array
        is_member = np.empty(size, dtype=bool)
        chunk = max(1, (1 << 22) >> self._r)
        for start in range(0, size, chunk):
            block = grid[start : start + chunk]
            sums = _subset_sums(block, self._r)
            is_member[start : start + chunk] = (sums <= ranks[None, :]).all(axis=1)
        members = [tuple(row) for row in grid[is_member].tolist()]
        excluded = [tuple(row) for row in grid[~is_member].tolist()]
        logger.debug(
            "classified %d bounded vectors: %d members, %d excluded",
            size,
            len(members),
            len(excluded),
        )
        return members, excluded

    @cached_property
    def _member_set(self) -> frozenset[IntVector]:
        return frozenset(self._classified[0])

    def members(self) -> list[IntVector]:
        return list(self._classified[0])

    def is_member(self, u: Sequence[int]) -> bool:
        """Membership through the enumerated member set."""
        return tuple(u) in self._member_set

    def bases(self) -> list[IntVector]:
        pool = self._member_set
        out = []
        for u in self._classified[0]:
            if not any(add_unit(u, i) in pool for i in range(1, self._r + 1)):
                out.append(u)
        return out

    def rank_of(self) -> int:
        weights = {weight(b) for b in self.bases()}
        if len(weights) != 1:
            raise PolymatroidError(f"bases have unequal weights {sorted(weights)}")
        return weights.pop()

    # ==================== Excluded vectors ====================

    def excluded_vectors(self) -> list[IntVector]:
        return list(self._classified[1])

    def excluded_at(self, i: int) -> list[IntVector]:
        """D_i: excluded vectors whose i-th component is 1."""
        check_index(i, self._r)
        return [u for u in self._classified[1] if u[i - 1] == 1]

    def c_set(self, i: int) -> list[IntVector]:
        """
        C_i: vectors u of D_i with
        (1) u - e_i a member,
        (2) no other v in D_i below u,
        (3) no other v in D_i whose support is a proper subset of u's.
        """
        d_i = self.excluded_at(i)
        supports = [support_mask(v) for v in d_i]
        out = []
        for u, su in zip(d_i, supports):
            if not self.is_member(add_unit(u, i, -1)):
                continue
            if any(v != u and leq(v, u) for v in d_i):
                continue
            if any(sv != su and (sv & ~su) == 0 for sv in supports):
                continue
            out.append(u)
        return out

    def phi(self, b: Sequence[int]) -> int:
        """Largest singleton rank outside the support of the basis vector b."""
        b = as_vector(b)
        self._check_length(b)
        if b not in set(self.bases()):
            raise PolymatroidError(f"{b} is not a basis vector")
        outside = [i for i in range(1, self._r + 1) if b[i - 1] == 0]
        if not outside:
            raise PolymatroidError(f"phi is undefined: support of {b} covers the ground set")
        return max(self.singleton_rank(i) for i in outside)


def free_polymatroid(r: int, unit_rank: int = 1) -> DiscretePolymatroid:
    """rho(A) = unit_rank * |A|."""
    return DiscretePolymatroid(r, [unit_rank * bin(m).count("1") for m in range(1 << r)])


# ==================== Exchange property on explicit sets ====================


def subvector_closure_violations(
    vectors: Iterable[Sequence[int]],
) -> list[tuple[IntVector, IntVector]]:
    """Pairs (u, u - e_i) where the immediate sub-vector is missing from the set."""
    pool = {tuple(v) for v in vectors}
    missing = []
    for u in sorted(pool):
        for i in range(1, len(u) + 1):
            if u[i - 1] > 0:
                below = add_unit(u, i, -1)
                if below not in pool:
                    missing.append((u, below))
    return missing


def validate_exchange(vectors: Iterable[Sequence[int]]) -> bool:
    """True iff for all u, v with |u| < |v| some w satisfies u < w <= u ∨ v."""
    vecs = sorted({tuple(v) for v in vectors})
    pool = set(vecs)
    closed = not subvector_closure_violations(vecs)
    if not closed:
        logger.warning("vector set is not closed under sub-vectors; checking exchange literally")
    for u in vecs:
        wu = weight(u)
        for v in vecs:
            if weight(v) <= wu:
                continue
            if closed:
                found = any(v[i] > u[i] and add_unit(u, i + 1) in pool for i in range(len(u)))
            else:
                top = join(u, v)
                found = any(is_subvector(u, w) and leq(w, top) for w in vecs)
            if not found:
                logger.debug("exchange fails for u=%s, v=%s", u, v)
                return False
    return True


# ==================== Representations ====================


class Representation(RankOracle):
    """Generator matrices A_1, ..., A_r over F_q, all with `ambient` rows."""

    def __init__(
        self,
        field: Field,
        ambient: int,
        generators: Sequence[Mat],
        config: Optional[PolymatroidConfig] = None,
    ):
        if ambient < 1:
            raise PolymatroidError(f"ambient dimension must be positive, got {ambient}")
        if not generators:
            raise PolymatroidError("a representation needs at least one generator")
        for idx, g in enumerate(generators, start=1):
            if g.field != field:
                raise PolymatroidError(f"generator {idx} is over F_{g.field.q}, not F_{field.q}")
            if g.rows != ambient:
                raise PolymatroidError(f"generator {idx} has {g.rows} rows, expected {ambient}")
            if g.cols < 1:
                raise PolymatroidError(f"generator {idx} has no columns")
        self.field = field
        self.ambient = ambient
        self.generators: tuple[Mat, ...] = tuple(generators)
        self._cache = RankCache(config)

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def cache_stats(self):
        return self._cache.stats

    def generator(self, i: int) -> Mat:
        check_index(i, self.r)
        return self.generators[i - 1]

    def stacked(self, mask: int) -> Mat:
        """Horizontal concatenation of the generators in `mask` (ambient x 0 when empty)."""
        chosen = [self.generators[i - 1] for i in elements_of(mask)]
        return hconcat(chosen, rows=self.ambient, field=self.field)

    def rank(self, mask: int) -> int:
        if not 0 <= mask <= self.full_mask:
            raise PolymatroidError(f"subset mask {mask} outside the ground set")
        if mask == 0:
            return 0
        cached = self._cache.get(mask)
        if cached is not None:
            return cached
        value = rank(self.stacked(mask))
        self._cache.put(mask, value)
        return value

    def restricted(self, elements: Sequence[int]) -> "Representation":
        """Keep only the generators for `elements`, in the given order."""
        return Representation(self.field, self.ambient, [self.generator(i) for i in elements])

    def transformed(self, m: Mat) -> "Representation":
        """Left-multiply every generator by m (a change of basis when m is invertible)."""
        return Representation(self.field, m.rows, [m @ g for g in self.generators])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Representation)
            and other.field == self.field
            and other.ambient == self.ambient
            and other.generators == self.generators
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.ambient, self.generators))

    def __repr__(self) -> str:
        return f"Representation(q={self.field.q}, ambient={self.ambient}, r={self.r})"

    def to_dict(self) -> dict:
        return {
            "q": self.field.q,
            "ambient": self.ambient,
            "generators": [g.to_rows() for g in self.generators],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Representation":
        field = Field(int(data["q"]))
        ambient = int(data["ambient"])
        gens = [Mat.from_rows(field, rows) for rows in data["generators"]]
        return cls(field, ambient, gens)


def polymatroid_of(rep: Representation) -> DiscretePolymatroid:
    """The discrete polymatroid D(V_1, ..., V_r) of a representation."""
    limit = get_config().polymatroid.max_ground_set
    if rep.r > limit:
        raise PolymatroidError(f"ground-set size {rep.r} exceeds the dense-table limit {limit}")
    return DiscretePolymatroid(rep.r, [rep.rank(m) for m in range(1 << rep.r)])


def random_representation(
    q: int,
    r: int,
    ambient: int,
    rng: np.random.Generator,
    max_columns: int = 2,
) -> Representation:
    field = Field(q)
    gens = [
        random_matrix(field, ambient, int(rng.integers(1, max_columns + 1)), rng)
        for _ in range(r)
    ]
    return Representation(field, ambient, gens)
