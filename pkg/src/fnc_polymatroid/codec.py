"""
Fractional network code solutions: global encoding matrices per edge
and their verification against a network.

Decoders and local encoders are never stored; verification recomputes
them as solve_right witnesses and returns them in the report.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .config import get_config
from .errors import DimensionError, FieldError, UnverifiedSolutionError
from .linalg import Field, Mat, hconcat, solve_right
from .models import FailureKind, RateReport, SolutionFailure
from .network import Network

logger = logging.getLogger(__name__)


def selector(i: int, dims: Sequence[int], field: Optional[Field] = None) -> Mat:
    """The (sum k) x k_i identity block picking out message position i (1-based)."""
    if not 1 <= i <= len(dims):
        raise DimensionError(f"message position {i} outside 1..{len(dims)}")
    field = field or Field(get_config().linalg.default_q)
    total = sum(dims)
    offset = sum(dims[: i - 1])
    return Mat.identity(field, total).columns(range(offset, offset + dims[i - 1]))


@dataclass
class FncSolution:
    """A (k_1, ..., k_m; n) linear solution over F_q."""

    field: Field
    k: list[int]
    n: int
    globals: dict[str, Mat]

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def total(self) -> int:
        return sum(self.k)

    def global_of(self, edge_id: str) -> Mat:
        try:
            return self.globals[edge_id]
        except KeyError:
            raise DimensionError(f"solution has no global matrix for edge {edge_id!r}") from None

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "k": list(self.k),
            "n": self.n,
            "global": {eid: self.globals[eid].to_rows() for eid in sorted(self.globals)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FncSolution":
        f = Field(int(data["q"]))
        k = [int(x) for x in data["k"]]
        n = int(data["n"])
        globals_ = {
            str(eid): Mat.from_rows(f, rows, cols=0) for eid, rows in data["global"].items()
        }
        return cls(field=f, k=k, n=n, globals=globals_)


@dataclass
class VerificationReport:
    """Verdict plus the witnesses found along the way."""

    failures: list[SolutionFailure] = field(default_factory=list)
    local: dict[str, Mat] = field(default_factory=dict)
    decoders: dict[tuple[str, int], Mat] = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return not self.failures

    def to_dict(self, witnesses: bool = False) -> dict:
        out: dict = {
            "verified": self.verified,
            "failures": [f.to_dict() for f in self.failures],
        }
        if witnesses:
            out["local"] = {eid: m.to_rows() for eid, m in sorted(self.local.items())}
            out["decoders"] = [
                {"node": node, "msg": msg, "matrix": m.to_rows()}
                for (node, msg), m in sorted(self.decoders.items())
            ]
        return out


def _check_shapes(net: Network, sol: FncSolution) -> None:
    if len(sol.k) != net.m:
        raise DimensionError(f"solution has {len(sol.k)} message dimensions, network has {net.m}")
    if any(x < 1 for x in sol.k) or sol.n < 1:
        raise DimensionError(f"dimensions must be positive: k={sol.k}, n={sol.n}")
    known = set(net.edge_ids)
    extra = sorted(set(sol.globals) - known)
    if extra:
        raise DimensionError(f"solution names unknown edges {extra}")
    widths = dict(zip(net.messages, sol.k))
    for e in net.inputs:
        _check_matrix(sol, e.id, widths[e.msg])
    for e in net.edges:
        _check_matrix(sol, e.id, sol.n)


def _check_matrix(sol: FncSolution, edge_id: str, cols: int) -> None:
    g = sol.global_of(edge_id)
    if g.field != sol.field:
        raise FieldError(f"edge {edge_id!r} is over F_{g.field.q}, solution over F_{sol.q}")
    if g.shape != (sol.total, cols):
        raise DimensionError(
            f"edge {edge_id!r} has a {g.rows}x{g.cols} matrix, expected {sol.total}x{cols}"
        )


def incoming(net: Network, sol: FncSolution, node: str) -> Mat:
    """Global matrices of the edges entering `node`, side by side."""
    return hconcat(
        [sol.globals[eid] for eid in net.in_edges(node)], rows=sol.total, field=sol.field
    )


def verify_solution(net: Network, sol: FncSolution) -> VerificationReport:
    """
    Check every input selector, decoder and local encoder. Message widths
    come from the solution, so a solution for other dimensions than the
    network file's still verifies against it.
    """
    _check_shapes(net, sol)
    report = VerificationReport()
    position = {msg: pos for pos, msg in enumerate(net.messages, start=1)}

    for e in net.inputs:
        if sol.globals[e.id] != selector(position[e.msg], sol.k, sol.field):
            report.failures.append(
                SolutionFailure(
                    FailureKind.SOURCE,
                    edge=e.id,
                    node=e.at,
                    message=e.msg,
                    detail="input edge does not carry its message's selector",
                )
            )

    for e in net.edges:
        local = solve_right(incoming(net, sol, e.origin), sol.globals[e.id])
        if local is None:
            report.failures.append(
                SolutionFailure(
                    FailureKind.LOCAL,
                    edge=e.id,
                    node=e.origin,
                    detail="edge is not a function of the symbols entering its origin",
                )
            )
        else:
            report.local[e.id] = local

    for node in net.nodes:
        wanted = net.demanded(node)
        if not wanted:
            continue
        received = incoming(net, sol, node)
        for msg in wanted:
            decoder = solve_right(received, selector(position[msg], sol.k, sol.field))
            if decoder is None:
                report.failures.append(
                    SolutionFailure(
                        FailureKind.DECODING,
                        node=node,
                        message=msg,
                        detail=f"x_{msg} is not in the span of the symbols received",
                    )
                )
            else:
                report.decoders[(node, msg)] = decoder

    report.failures.sort(key=SolutionFailure.sort_key)
    if report.failures:
        logger.debug("solution fails %d checks", len(report.failures))
    return report


def rates(net: Network, sol: FncSolution) -> RateReport:
    report = verify_solution(net, sol)
    if not report.verified:
        raise UnverifiedSolutionError("rates are only reported for verified solutions", report)
    return RateReport.of(list(sol.k), sol.n)


def restrict_solution(net: Network, sol: FncSolution, node: str) -> tuple[Network, FncSolution]:
    """The ancestor sub-network of `node` with the matching part of the solution."""
    sub = net.ancestor_subnetwork(node)
    kept = {eid: sol.globals[eid] for eid in sub.edge_ids if eid in sol.globals}
    return sub, FncSolution(field=sol.field, k=list(sol.k), n=sol.n, globals=kept)
