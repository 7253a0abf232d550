"""
Integer vectors on a ground set {1, ..., r}.

Vectors are plain tuples of non-negative ints. Subsets are given as
iterables of 1-based ground elements in the public API and as bitmasks
(element i <-> bit i-1) internally.
"""

from typing import Iterable, Sequence

from .errors import PolymatroidError

IntVector = tuple[int, ...]


def as_vector(values: Iterable[int]) -> IntVector:
    v = tuple(int(x) for x in values)
    if any(x < 0 for x in v):
        raise PolymatroidError(f"vector components must be non-negative: {v}")
    return v


def check_index(i: int, r: int) -> None:
    if not 1 <= i <= r:
        raise PolymatroidError(f"ground element {i} outside 1..{r}")


def mask_of(subset: Iterable[int], r: int) -> int:
    mask = 0
    for i in subset:
        check_index(i, r)
        mask |= 1 << (i - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def restrict(v: Sequence[int], subset: Iterable[int]) -> IntVector:
    """v(A): the components of v indexed by A, in ascending element order."""
    idx = sorted(set(subset))
    for i in idx:
        check_index(i, len(v))
    return tuple(v[i - 1] for i in idx)


def join(u: Sequence[int], v: Sequence[int]) -> IntVector:
    """Componentwise maximum u ∨ v."""
    if len(u) != len(v):
        raise PolymatroidError(f"length mismatch: {len(u)} and {len(v)}")
    return tuple(max(a, b) for a, b in zip(u, v))


def weight(v: Sequence[int]) -> int:
    return sum(v)


def leq(u: Sequence[int], v: Sequence[int]) -> bool:
    if len(u) != len(v):
        raise PolymatroidError(f"length mismatch: {len(u)} and {len(v)}")
    return all(a <= b for a, b in zip(u, v))


def is_subvector(u: Sequence[int], v: Sequence[int]) -> bool:
    """Strict order u < v: u <= v componentwise and u != v."""
    return leq(u, v) and tuple(u) != tuple(v)


def support(v: Sequence[int]) -> frozenset[int]:
    return frozenset(i + 1 for i, x in enumerate(v) if x > 0)


def support_mask(v: Sequence[int]) -> int:
    mask = 0
    for i, x in enumerate(v):
        if x > 0:
            mask |= 1 << i
    return mask


def unit(i: int, r: int) -> IntVector:
    check_index(i, r)
    return tuple(1 if j == i else 0 for j in range(1, r + 1))


def add_unit(v: Sequence[int], i: int, amount: int = 1) -> IntVector:
    """v + amount * unit(i); raises if a component would go negative."""
    check_index(i, len(v))
    out = list(v)
    out[i - 1] += amount
    if out[i - 1] < 0:
        raise PolymatroidError(f"component {i} of {tuple(v)} would become negative")
    return tuple(out)


def subset_sum(v: Sequence[int], mask: int) -> int:
    """|v(A)| for A given as a bitmask."""
    total = 0
    i = 0
    while mask:
        if mask & 1:
            total += v[i]
        mask >>= 1
        i += 1
    return total
