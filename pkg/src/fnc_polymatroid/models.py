"""
Report and result models for fnc-polymatroid.

Checks return these instead of raising, so callers (CLI, MCP tools,
tests) can render every violation at once.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional


class Axiom(str, Enum):
    """Rank-function axioms of a discrete polymatroid."""

    MONOTONE = "monotone"
    SUBMODULAR = "submodular"
    NORMALIZED = "normalized"


class MatroidAxiom(str, Enum):
    """Independent-set axioms of a matroid."""

    EMPTY = "empty-set"
    HEREDITARY = "hereditary"
    AUGMENTATION = "augmentation"


class DpnCondition(str, Enum):
    """Conditions of a discrete polymatroidal network."""

    INJECTIVE = "injective-sources"
    INDEPENDENT = "independent-sources"
    DIMENSIONS = "edge-dimensions"
    NODE_RANK = "node-rank"


class FailureKind(str, Enum):
    """Which solution condition failed."""

    SOURCE = "source"
    DECODING = "decoding"
    LOCAL = "local"


class Verdict(str, Enum):
    """Outcome of a bounded linear search."""

    FOUND = "found"
    EXHAUSTED_NONE = "exhausted-none"
    BUDGET_EXCEEDED = "budget-exceeded"


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class AxiomViolation:
    """One failing instance of an axiom; subsets are 1-based and sorted."""

    axiom: Axiom
    subsets: list[list[int]]
    detail: str

    def to_dict(self) -> dict:
        return {"axiom": self.axiom.value, "subsets": self.subsets, "detail": self.detail}


@dataclass
class AxiomReport:
    violations: list[AxiomViolation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_dict() for v in self.violations]}


@dataclass
class MatroidViolation:
    axiom: MatroidAxiom
    sets: list[list[int]]
    detail: str

    def to_dict(self) -> dict:
        return {"axiom": self.axiom.value, "sets": self.sets, "detail": self.detail}


@dataclass
class MatroidReport:
    violations: list[MatroidViolation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_dict() for v in self.violations]}


@dataclass
class NetworkIssue:
    """A violated network invariant. `witness` holds node or edge ids (a cycle, a duplicate id)."""

    code: str
    detail: str
    witness: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"code": self.code, "detail": self.detail, "witness": self.witness}


@dataclass
class NetworkReport:
    issues: list[NetworkIssue] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.issues

    def to_dict(self) -> dict:
        return {"valid": self.valid, "issues": [i.to_dict() for i in self.issues]}


@dataclass
class SolutionFailure:
    """A failed source, decoding or local check, naming the edge, node and message involved."""

    kind: FailureKind
    edge: Optional[str] = None
    node: Optional[str] = None
    message: Optional[int] = None
    detail: str = ""

    def sort_key(self) -> tuple:
        return (self.kind.value, self.edge or "", self.node or "", self.message or 0)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.edge is not None:
            out["edge"] = self.edge
        if self.node is not None:
            out["node"] = self.node
        if self.message is not None:
            out["msg"] = self.message
        out["detail"] = self.detail
        return out


@dataclass
class RateReport:
    """Rates of a (k_1, ..., k_m; n) solution as exact fractions."""

    rates: list[Fraction]
    average: Fraction
    symmetric: bool

    @classmethod
    def of(cls, k: list[int], n: int) -> "RateReport":
        rates = [Fraction(ki, n) for ki in k]
        average = sum(rates, Fraction(0)) / len(rates) if rates else Fraction(0)
        return cls(rates=rates, average=average, symmetric=len(set(k)) <= 1)

    def to_dict(self) -> dict:
        return {
            "rates": [fraction_str(r) for r in self.rates],
            "average": fraction_str(self.average),
            "symmetric": self.symmetric,
        }


@dataclass
class DpnViolation:
    """A failed condition; `node` is the witness node for a node-rank failure."""

    condition: DpnCondition
    detail: str
    node: Optional[str] = None
    elements: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        out: dict = {"condition": self.condition.value, "detail": self.detail}
        if self.node is not None:
            out["node"] = self.node
        if self.elements:
            out["elements"] = self.elements
        return out


@dataclass
class DpnReport:
    k: list[int]
    n: int
    violations: list[DpnViolation] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations

    def failed(self, condition: DpnCondition) -> bool:
        return any(v.condition == condition for v in self.violations)

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "k": self.k,
            "n": self.n,
            "violations": [v.to_dict() for v in self.violations],
        }
