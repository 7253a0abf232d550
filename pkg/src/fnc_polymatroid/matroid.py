"""
Matroids given by their independent sets, and the embedding of a
matroid as the discrete polymatroid of its independent-set indicators.
"""

import itertools
from typing import Iterable, Optional

from .errors import PolymatroidError
from .models import MatroidAxiom, MatroidReport, MatroidViolation
from .polymatroid import DiscretePolymatroid, Representation
from .vectors import elements_of, mask_of

MAX_MATROID_GROUND_SET = 16


class Matroid:
    """A pair (ground set {1..r}, family of independent sets as bitmasks)."""

    def __init__(self, r: int, independent: Iterable[int]):
        if not 1 <= r <= MAX_MATROID_GROUND_SET:
            raise PolymatroidError(f"matroid ground set {r} outside 1..{MAX_MATROID_GROUND_SET}")
        family = frozenset(int(m) for m in independent)
        bad = [m for m in family if not 0 <= m < (1 << r)]
        if bad:
            raise PolymatroidError(f"independent-set masks {sorted(bad)} outside the ground set")
        self.r = r
        self.independent = family

    @classmethod
    def from_sets(cls, r: int, sets: Iterable[Iterable[int]]) -> "Matroid":
        return cls(r, [mask_of(s, r) for s in sets])

    @classmethod
    def uniform(cls, k: int, r: int) -> "Matroid":
        """U_{k,r}: every subset of size at most k is independent."""
        return cls(r, [m for m in range(1 << r) if bin(m).count("1") <= k])

    @classmethod
    def free(cls, r: int) -> "Matroid":
        return cls(r, range(1 << r))

    @classmethod
    def from_representation(cls, rep: Representation) -> "Matroid":
        """Column matroid of a representation with exactly one column per generator."""
        wide = [i for i, g in enumerate(rep.generators, start=1) if g.cols != 1]
        if wide:
            raise PolymatroidError(f"generators {wide} do not have exactly one column")
        return cls(rep.r, [m for m in range(1 << rep.r) if rep.rank(m) == bin(m).count("1")])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Matroid) and (other.r, other.independent) == (
            self.r,
            self.independent,
        )

    def __hash__(self) -> int:
        return hash((self.r, self.independent))

    def __repr__(self) -> str:
        return f"Matroid(r={self.r}, independent={len(self.independent)})"

    def to_dict(self) -> dict:
        return {"r": self.r, "independent": sorted(self.independent)}

    @classmethod
    def from_dict(cls, data: dict) -> "Matroid":
        return cls(int(data["r"]), [int(m) for m in data["independent"]])

    def validate(self) -> MatroidReport:
        """Check the three independent-set axioms, all violations included."""
        report = MatroidReport()
        fam = self.independent

        if 0 not in fam:
            report.violations.append(
                MatroidViolation(MatroidAxiom.EMPTY, [[]], "the empty set is not independent")
            )

        for m in sorted(fam):
            for i in elements_of(m):
                sub = m & ~(1 << (i - 1))
                if sub not in fam:
                    report.violations.append(
                        MatroidViolation(
                            MatroidAxiom.HEREDITARY,
                            [elements_of(m), elements_of(sub)],
                            "a subset of an independent set is missing",
                        )
                    )

        for u, v in itertools.product(sorted(fam), repeat=2):
            if bin(u).count("1") <= bin(v).count("1"):
                continue
            if not any((v | (1 << (x - 1))) in fam for x in elements_of(u & ~v)):
                report.violations.append(
                    MatroidViolation(
                        MatroidAxiom.AUGMENTATION,
                        [elements_of(u), elements_of(v)],
                        "no element of the larger set extends the smaller one",
                    )
                )

        return report

    def rank(self, subset: Optional[Iterable[int]] = None, mask: Optional[int] = None) -> int:
        """max |X| over independent X contained in the subset."""
        if mask is None:
            mask = mask_of(subset or [], self.r)
        return max((bin(x).count("1") for x in self.independent if x & ~mask == 0), default=0)

    def bases(self) -> list[list[int]]:
        top = max((bin(x).count("1") for x in self.independent), default=0)
        return sorted(elements_of(x) for x in self.independent if bin(x).count("1") == top)

    def to_polymatroid(self) -> DiscretePolymatroid:
        return DiscretePolymatroid(self.r, [self.rank(mask=m) for m in range(1 << self.r)])
