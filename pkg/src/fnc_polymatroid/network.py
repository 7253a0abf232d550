"""
Coding networks: a DAG with input edges (one per message), intermediate
edges and per-node demand sets.

Edges run from an origin node to a destination node. Input edges have
no origin: they enter the node where their message is generated.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from .errors import NetworkError
from .models import NetworkIssue, NetworkReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InputEdge:
    """Edge generating message `msg` of dimension `k` at node `at`."""

    id: str
    at: str
    msg: int
    k: int

    def to_dict(self) -> dict:
        return {"id": self.id, "at": self.at, "msg": self.msg, "k": self.k}


@dataclass(frozen=True)
class Edge:
    """Intermediate edge from `origin` to `dest`."""

    id: str
    origin: str
    dest: str

    def to_dict(self) -> dict:
        return {"id": self.id, "from": self.origin, "to": self.dest}


class Network:
    """An immutable coding network."""

    def __init__(
        self,
        nodes: Sequence[str],
        inputs: Sequence[InputEdge],
        edges: Sequence[Edge],
        demands: Optional[Mapping[str, Iterable[int]]] = None,
    ):
        self.nodes: tuple[str, ...] = tuple(nodes)
        self.inputs: tuple[InputEdge, ...] = tuple(inputs)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self.demands: dict[str, frozenset[int]] = {
            node: frozenset(msgs) for node, msgs in (demands or {}).items() if msgs
        }
        self._inputs_by_id = {e.id: e for e in self.inputs}
        self._edges_by_id = {e.id: e for e in self.edges}
        self._order: Optional[list[str]] = None

    # ==================== Lookups ====================

    @property
    def messages(self) -> list[int]:
        """Message indices in ascending order; this is the coordinate layout of x."""
        return sorted(e.msg for e in self.inputs)

    @property
    def dims(self) -> list[int]:
        by_msg = {e.msg: e.k for e in self.inputs}
        return [by_msg[m] for m in self.messages]

    @property
    def m(self) -> int:
        return len(self.inputs)

    @property
    def edge_ids(self) -> list[str]:
        return [e.id for e in self.inputs] + [e.id for e in self.edges]

    def _require_node(self, v: str) -> None:
        if v not in self._node_set:
            raise NetworkError(f"unknown node {v!r}")

    @property
    def _node_set(self) -> frozenset[str]:
        return frozenset(self.nodes)

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges_by_id[edge_id]
        except KeyError:
            raise NetworkError(f"unknown intermediate edge {edge_id!r}") from None

    def input_for(self, msg: int) -> InputEdge:
        for e in self.inputs:
            if e.msg == msg:
                return e
        raise NetworkError(f"no input edge carries message {msg}")

    def demanded(self, v: str) -> list[int]:
        return sorted(self.demands.get(v, ()))

    def in_edges(self, v: str) -> list[str]:
        """Input edges entering v (by message), then intermediate edges into v (by id)."""
        self._require_node(v)
        ins = sorted((e for e in self.inputs if e.at == v), key=lambda e: e.msg)
        mids = sorted(e.id for e in self.edges if e.dest == v)
        return [e.id for e in ins] + mids

    def out_edges(self, v: str) -> list[str]:
        """Intermediate edges leaving v, by id."""
        self._require_node(v)
        return sorted(e.id for e in self.edges if e.origin == v)

    def out_set(self, v: str) -> list[str]:
        """Intermediate edges leaving v together with the input edges of the messages v demands."""
        return self.out_edges(v) + [self.input_for(msg).id for msg in self.demanded(v)]

    def origin_in_edges(self, edge_id: str) -> list[str]:
        """The edges entering the origin of an intermediate edge."""
        return self.in_edges(self.edge(edge_id).origin)

    # ==================== Structure ====================

    def graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.nodes)
        for e in self.edges:
            g.add_edge(e.origin, e.dest, key=e.id)
        return g

    def validate(self) -> NetworkReport:
        report = NetworkReport()
        issues = report.issues
        nodes = self._node_set

        if len(nodes) != len(self.nodes):
            dup = sorted({v for v in self.nodes if self.nodes.count(v) > 1})
            issues.append(NetworkIssue("duplicate-node", "node ids are not unique", dup))

        ids = self.edge_ids
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            issues.append(NetworkIssue("duplicate-edge", "edge ids are not unique", dup))

        msgs = [e.msg for e in self.inputs]
        if len(set(msgs)) != len(msgs):
            dup = sorted({str(m) for m in msgs if msgs.count(m) > 1})
            issues.append(NetworkIssue("duplicate-message", "message indices repeat", dup))

        for e in self.inputs:
            if e.at not in nodes:
                issues.append(
                    NetworkIssue("unknown-node", f"input edge enters unknown node {e.at!r}", [e.id])
                )
            if e.k < 1:
                issues.append(
                    NetworkIssue("bad-dimension", f"message {e.msg} has dimension {e.k}", [e.id])
                )

        for e in self.edges:
            for end in (e.origin, e.dest):
                if end not in nodes:
                    issues.append(
                        NetworkIssue("unknown-node", f"edge touches unknown node {end!r}", [e.id])
                    )

        known = set(msgs)
        for node in sorted(self.demands):
            if node not in nodes:
                issues.append(
                    NetworkIssue("unknown-node", f"demand at unknown node {node!r}", [node])
                )
            for msg in sorted(self.demands[node]):
                if msg not in known:
                    issues.append(
                        NetworkIssue(
                            "unknown-message",
                            f"node {node!r} demands missing message {msg}",
                            [node],
                        )
                    )

        if all(e.origin in nodes and e.dest in nodes for e in self.edges):
            cycle = self._find_cycle()
            if cycle:
                issues.append(NetworkIssue("cycle", "the network has a directed cycle", cycle))

        return report

    def _find_cycle(self) -> list[str]:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from((e.origin, e.dest) for e in self.edges)
        try:
            arcs = nx.find_cycle(g)
        except nx.NetworkXNoCycle:
            return []
        return [u for u, _ in arcs]

    def ancestral_order(self) -> list[str]:
        """
        Edge ids such that every edge follows all edges entering its origin.

        Input edges come first; ties are broken by edge id.
        """
        if self._order is not None:
            return list(self._order)
        cycle = self._find_cycle()
        if cycle:
            raise NetworkError(f"network is cyclic: {' -> '.join(cycle)}")
        g = nx.DiGraph()
        g.add_nodes_from(self.edge_ids)
        for e in self.edges:
            for pred in self.in_edges(e.origin):
                g.add_edge(pred, e.id)
        order = list(
            nx.lexicographical_topological_sort(
                g, key=lambda eid: (0 if eid in self._inputs_by_id else 1, eid)
            )
        )
        self._order = order
        return list(order)

    # ==================== Derived networks ====================

    def with_dims(self, k: Sequence[int]) -> "Network":
        """The same network with message dimensions k (ordered by message index)."""
        if len(k) != self.m:
            raise NetworkError(f"expected {self.m} message dimensions, got {len(k)}")
        by_msg = dict(zip(self.messages, k))
        inputs = [InputEdge(e.id, e.at, e.msg, int(by_msg[e.msg])) for e in self.inputs]
        return Network(self.nodes, inputs, self.edges, self.demands)

    def ancestors(self, v: str) -> set[str]:
        self._require_node(v)
        return nx.ancestors(self.graph(), v)

    def ancestor_subnetwork(self, v: str) -> "Network":
        """
        Everything that can influence node v: v, its ancestors, the edges
        among them, their demands, and every input edge (so the message
        layout is unchanged).
        """
        keep = self.ancestors(v) | {v} | {e.at for e in self.inputs}
        feeding = self.ancestors(v) | {v}
        nodes = [u for u in self.nodes if u in keep]
        edges = [e for e in self.edges if e.dest in feeding and e.origin in keep]
        demands = {u: msgs for u, msgs in self.demands.items() if u in feeding}
        return Network(nodes, self.inputs, edges, demands)

    # ==================== Serialization ====================

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "inputs": [e.to_dict() for e in self.inputs],
            "edges": [e.to_dict() for e in self.edges],
            "demands": [
                {"node": v, "msgs": sorted(self.demands[v])}
                for v in self.nodes
                if v in self.demands
            ]
            + [
                {"node": v, "msgs": sorted(msgs)}
                for v, msgs in sorted(self.demands.items())
                if v not in self._node_set
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Network":
        inputs = [
            InputEdge(str(e["id"]), str(e["at"]), int(e["msg"]), int(e["k"]))
            for e in data["inputs"]
        ]
        edges = [Edge(str(e["id"]), str(e["from"]), str(e["to"])) for e in data["edges"]]
        demands: dict[str, set[int]] = {}
        for d in data.get("demands", []):
            demands.setdefault(str(d["node"]), set()).update(int(m) for m in d["msgs"])
        return cls([str(v) for v in data["nodes"]], inputs, edges, demands)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Network) and other.to_dict() == self.to_dict()

    def __hash__(self) -> int:
        return hash((self.nodes, self.inputs, self.edges))

    def __repr__(self) -> str:
        return (
            f"Network(nodes={len(self.nodes)}, inputs={len(self.inputs)}, "
            f"edges={len(self.edges)}, demands={len(self.demands)})"
        )

    def to_dot(self, name: str = "network") -> str:
        """Graphviz text: sources as boxes, demand nodes annotated, edges labelled with ids."""
        sources = {e.at for e in self.inputs}
        lines = [f"digraph {_dot_id(name)} {{", "  rankdir=TB;"]
        for v in self.nodes:
            attrs = []
            label = v
            if v in self.demands:
                wants = ", ".join(f"x_{m}" for m in sorted(self.demands[v]))
                label = f"{v}\\nwants {wants}"
            attrs.append(f"label={_dot_id(label)}")
            if v in sources:
                attrs.append("shape=box")
            lines.append(f"  {_dot_id(v)} [{', '.join(attrs)}];")
        for e in self.inputs:
            stub = f"in:{e.id}"
            lines.append(f"  {_dot_id(stub)} [shape=point];")
            lines.append(
                f"  {_dot_id(stub)} -> {_dot_id(e.at)} [label={_dot_id(f'{e.id} (x_{e.msg})')}];"
            )
        for e in self.edges:
            lines.append(f"  {_dot_id(e.origin)} -> {_dot_id(e.dest)} [label={_dot_id(e.id)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_id(text: str) -> str:
    escaped = text.replace('"', '\\"')
    return f'"{escaped}"'
