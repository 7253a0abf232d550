"""
Network construction from a discrete polymatroid and a basis vector.

The source stage places one source per element of the basis support.
The relay stage repeatedly adds a relay/carrier pair for the first
uncovered element whose C-set has a vector supported on covered
elements. The demand stage adds demand nodes for the source elements,
either for every eligible C-set vector ("exhaustive") or for an
explicit list of choices ("select").

Node names: sources and carriers use the element index ("4"), relays
the primed index ("4'"), demand nodes "d<i>_<seq>". Intermediate edge
ids are "<origin>-><dest>"; input edges are "e<i>".
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .bridge import PolymatroidMap, extract_solution
from .codec import FncSolution, rates
from .config import ConstructionConfig, get_config
from .errors import ConstructionError
from .models import RateReport
from .network import Edge, InputEdge, Network
from .polymatroid import DiscretePolymatroid, Representation, polymatroid_of
from .vectors import IntVector, add_unit, as_vector, support

logger = logging.getLogger(__name__)

POLICIES = ("exhaustive", "select")


@dataclass(frozen=True)
class LogEntry:
    step: str
    i: int
    u: IntVector

    def to_dict(self) -> dict:
        return {"step": self.step, "i": self.i, "u": list(self.u)}


@dataclass
class ConstructionState:
    """Everything the construction has built so far."""

    M: list[int] = field(default_factory=list)
    T: set[int] = field(default_factory=set)
    nodes: list[str] = field(default_factory=list)
    inputs: list[InputEdge] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    demands: dict[str, set[int]] = field(default_factory=dict)
    f: dict[str, int] = field(default_factory=dict)
    log: list[LogEntry] = field(default_factory=list)
    _seq: dict[int, int] = field(default_factory=dict)

    def network(self) -> Network:
        return Network(self.nodes, self.inputs, self.edges, self.demands)

    def polymatroid_map(self) -> PolymatroidMap:
        return PolymatroidMap(dict(self.f))

    # ==================== Steps ====================

    def add_source(self, i: int, k: int) -> None:
        node = str(i)
        self.nodes.append(node)
        edge = InputEdge(f"e{i}", node, i, k)
        self.inputs.append(edge)
        self.f[edge.id] = i
        self.M.append(i)
        self.T.add(i)

    def _feed(self, elements: Sequence[int], dest: str) -> None:
        for j in elements:
            edge = Edge(f"{j}->{dest}", str(j), dest)
            self.edges.append(edge)
            self.f[edge.id] = j

    def add_relay(self, i: int, u: IntVector) -> None:
        relay, carrier = f"{i}'", str(i)
        self.nodes.append(relay)
        self._feed(sorted(support(add_unit(u, i, -1))), relay)
        self.nodes.append(carrier)
        edge = Edge(f"{relay}->{carrier}", relay, carrier)
        self.edges.append(edge)
        self.f[edge.id] = i
        self.T.add(i)
        self.log.append(LogEntry("relay", i, u))
        logger.debug("relay %s fed from %s", relay, sorted(support(add_unit(u, i, -1))))

    def add_demand(self, i: int, u: IntVector) -> str:
        seq = self._seq.get(i, 0) + 1
        self._seq[i] = seq
        node = f"d{i}_{seq}"
        self.nodes.append(node)
        self._feed(sorted(support(add_unit(u, i, -1))), node)
        self.demands[node] = {i}
        self.log.append(LogEntry("demand", i, u))
        logger.debug("demand node %s wants x_%d", node, i)
        return node

    def to_dict(self) -> dict:
        return {
            "M": list(self.M),
            "T": sorted(self.T),
            "network": self.network().to_dict(),
            "map": self.polymatroid_map().to_dict(),
            "log": [entry.to_dict() for entry in self.log],
        }


def eligible_bases(d: DiscretePolymatroid) -> list[IntVector]:
    """Basis vectors whose nonzero components equal the singleton ranks."""
    ranks = d.singleton_ranks()
    return [b for b in d.bases() if all(x == 0 or x == ranks[i] for i, x in enumerate(b))]


def _start(b: IntVector) -> ConstructionState:
    state = ConstructionState()
    for i in sorted(support(b)):
        state.add_source(i, b[i - 1])
        state.log.append(LogEntry("source", i, b))
    return state


def build_network(
    d: DiscretePolymatroid,
    b: Sequence[int],
    policy: Optional[str] = None,
    choices: Optional[Sequence[tuple[int, Sequence[int]]]] = None,
    config: Optional[ConstructionConfig] = None,
) -> tuple[Network, PolymatroidMap, ConstructionState]:
    config = config or get_config().construction
    policy = policy or config.policy
    if policy not in POLICIES:
        raise ConstructionError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    b = as_vector(b)
    if b not in set(eligible_bases(d)):
        raise ConstructionError(f"{b} is not an eligible basis vector")

    state = _start(b)

    progress = True
    while progress:
        progress = False
        for i in range(1, d.r + 1):
            if i in state.T:
                continue
            usable = [u for u in d.c_set(i) if support(add_unit(u, i, -1)) <= state.T]
            if usable:
                state.add_relay(i, min(usable))
                progress = True
                break

    if policy == "exhaustive":
        for i in list(state.M):
            for u in d.c_set(i):
                if support(u) <= state.T:
                    state.add_demand(i, u)
    else:
        if choices is None:
            raise ConstructionError("the select policy needs a list of choices")
        for i, u in choices:
            u = as_vector(u)
            if i not in state.M:
                raise ConstructionError(f"{i} is not a source element")
            if u not in d.c_set(i):
                raise ConstructionError(f"{u} is not in C_{i}")
            if not support(u) <= state.T:
                raise ConstructionError(f"support of {u} is not covered")
            state.add_demand(i, u)

    net = state.network()
    logger.info(
        "constructed %d nodes, %d edges, %d demand nodes from basis %s",
        len(net.nodes),
        len(net.edges),
        len(net.demands),
        b,
    )
    return net, state.polymatroid_map(), state


def replay(log: Sequence[LogEntry]) -> tuple[Network, PolymatroidMap, ConstructionState]:
    """Rebuild a construction from its log alone."""
    if not log or log[0].step != "source":
        raise ConstructionError("a construction log starts with its source entries")
    b = as_vector(log[0].u)
    heads = [e for e in log if e.step == "source"]
    in_front = list(log[: len(heads)]) == heads
    if not in_front or [e.i for e in heads] != sorted(support(b)):
        raise ConstructionError(f"source entries do not match the support of {b}")
    state = _start(b)
    for entry in log[len(heads) :]:
        u = as_vector(entry.u)
        if entry.step == "relay":
            state.add_relay(entry.i, u)
        elif entry.step == "demand":
            state.add_demand(entry.i, u)
        else:
            raise ConstructionError(f"unexpected {entry.step!r} entry after the sources")
    return state.network(), state.polymatroid_map(), state


def construct_and_solve(
    rep: Representation,
    b: Sequence[int],
    policy: Optional[str] = None,
    choices: Optional[Sequence[tuple[int, Sequence[int]]]] = None,
) -> tuple[Network, FncSolution, RateReport]:
    """
    Construct from the representation's polymatroid and extract a verified solution.

    The edge dimension is phi(b), widened to the largest rank of an
    intermediate edge's image when some edge carries a wider element.
    """
    d = polymatroid_of(rep)
    net, f, _ = build_network(d, b, policy=policy, choices=choices)
    b = as_vector(b)
    n = None
    if len(support(b)) < d.r:
        phi = d.phi(b)
        n = max(phi, 1)
        for e in net.edges:
            width = rep.singleton_rank(f[e.id])
            if width > n:
                logger.info(
                    "edge dimension widened from phi(b) = %d to %d: edge %s carries element %d",
                    phi,
                    width,
                    e.id,
                    f[e.id],
                )
                n = width
    sol = extract_solution(net, rep, f, n=n)
    return net, sol, rates(net, sol)
