"""
Correspondence between discrete polymatroids and network code solutions.

check_dpn tests whether a network is discrete polymatroidal with respect
to a rank oracle under a map f from edges to ground elements.
extract_solution turns a representation plus such a map into a verified
solution; polymatroid_from_solution goes the other way.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .codec import FncSolution, selector, verify_solution
from .config import MapSearchConfig, get_config
from .errors import (
    BudgetError,
    DimensionError,
    DpnViolationError,
    ExtractionError,
    MapError,
    UnverifiedSolutionError,
)
from .linalg import column_basis, hconcat, invert, pad_columns, solve_right
from .matroid import Matroid
from .models import DpnCondition, DpnReport, DpnViolation
from .network import Network
from .oracle import RankOracle
from .polymatroid import Representation
from .vectors import mask_of

logger = logging.getLogger(__name__)


@dataclass
class PolymatroidMap:
    """f: edge id -> ground element (1-based)."""

    f: dict[str, int] = field(default_factory=dict)

    def __getitem__(self, edge_id: str) -> int:
        return self.f[edge_id]

    def image(self, edge_ids: Optional[Sequence[str]] = None) -> list[int]:
        ids = self.f if edge_ids is None else edge_ids
        return sorted({self.f[e] for e in ids})

    def check_total(self, net: Network, r: int) -> None:
        missing = [e for e in net.edge_ids if e not in self.f]
        if missing:
            raise MapError(f"map is not defined on edges {missing}")
        extra = sorted(set(self.f) - set(net.edge_ids))
        if extra:
            raise MapError(f"map names unknown edges {extra}")
        bad = sorted(e for e, i in self.f.items() if not 1 <= i <= r)
        if bad:
            raise MapError(f"edges {bad} map outside the ground set 1..{r}")

    def to_dict(self) -> dict:
        return {"f": {e: self.f[e] for e in sorted(self.f)}}

    @classmethod
    def from_dict(cls, data: dict) -> "PolymatroidMap":
        return cls({str(e): int(i) for e, i in data["f"].items()})


def _rank(d: RankOracle, elements) -> int:
    return d.rank(mask_of(set(elements), d.r))


def dpn_edge_dim(net: Network, d: RankOracle, f: PolymatroidMap) -> Optional[int]:
    """The edge dimension fixed by the network's non-source images, None if there are none."""
    f.check_total(net, d.r)
    sources = set(f.image([e.id for e in net.inputs]))
    rest = [i for i in f.image(net.edge_ids) if i not in sources]
    if not rest:
        return None
    return max(d.singleton_rank(i) for i in rest)


def check_dpn(
    net: Network,
    d: RankOracle,
    f: PolymatroidMap,
    k: Sequence[int],
    n: int,
) -> DpnReport:
    """Evaluate the four discrete-polymatroidal conditions and report every violation."""
    f.check_total(net, d.r)
    if len(k) != net.m:
        raise DimensionError(f"expected {net.m} message dimensions, got {len(k)}")
    report = DpnReport(k=list(k), n=n)
    viol = report.violations
    dims = dict(zip(net.messages, k))
    sources = [f[net.input_for(msg).id] for msg in net.messages]

    if len(set(sources)) != len(sources):
        dup = sorted({i for i in sources if sources.count(i) > 1})
        viol.append(
            DpnViolation(DpnCondition.INJECTIVE, "input edges share ground elements", elements=dup)
        )

    u = [0] * d.r
    for msg, i in zip(net.messages, sources):
        u[i - 1] += dims[msg]
    if not d.contains(u):
        viol.append(
            DpnViolation(
                DpnCondition.INDEPENDENT,
                f"source vector {tuple(u)} is not a member",
                elements=sorted(set(sources)),
            )
        )

    for msg, i in zip(net.messages, sources):
        got = d.singleton_rank(i)
        if got != dims[msg]:
            viol.append(
                DpnViolation(
                    DpnCondition.DIMENSIONS,
                    f"rho({{{i}}}) = {got} but message {msg} has dimension {dims[msg]}",
                    elements=[i],
                )
            )
    rest = [i for i in f.image(net.edge_ids) if i not in set(sources)]
    if rest:
        top = max(d.singleton_rank(i) for i in rest)
        if top != n:
            viol.append(
                DpnViolation(
                    DpnCondition.DIMENSIONS,
                    f"largest non-source singleton rank is {top}, not {n}",
                    elements=rest,
                )
            )

    for node in net.nodes:
        ins = [f[e] for e in net.in_edges(node)]
        both = ins + [f[e] for e in net.out_set(node)]
        lo, hi = _rank(d, ins), _rank(d, both)
        if lo != hi:
            viol.append(
                DpnViolation(
                    DpnCondition.NODE_RANK,
                    f"rho(f(In)) = {lo} but rho(f(In u Out)) = {hi}",
                    node=node,
                    elements=sorted(set(both)),
                )
            )

    return report


def is_discrete_polymatroidal(net: Network, d: RankOracle, f: PolymatroidMap) -> bool:
    """check_dpn with every k_i and n equal to the largest singleton rank."""
    top = d.rho_max()
    return check_dpn(net, d, f, [top] * net.m, top).holds


def is_matroidal(net: Network, m: Matroid, f: PolymatroidMap) -> bool:
    return check_dpn(net, m.to_polymatroid(), f, [1] * net.m, 1).holds


# ==================== Representation -> solution ====================


def extract_solution(
    net: Network,
    rep: Representation,
    f: PolymatroidMap,
    n: Optional[int] = None,
) -> FncSolution:
    """
    Solution read off a representation.

    k_i is the rank of the source generator of message i. Intermediate
    edges are as wide as the widest intermediate image unless a larger n
    is requested.
    """
    f.check_total(net, rep.r)
    k = [rep.singleton_rank(f[net.input_for(msg).id]) for msg in net.messages]
    widest = max((rep.singleton_rank(f[e.id]) for e in net.edges), default=0)
    default_n = max(widest, 1)
    if n is None:
        n = default_n
    elif n < default_n:
        raise ExtractionError(
            f"edge dimension {n} is below the widest intermediate rank {default_n}"
        )

    edge_dim = dpn_edge_dim(net, rep, f)
    report = check_dpn(net, rep, f, k, edge_dim if edge_dim is not None else n)
    if not report.holds:
        raise DpnViolationError("network is not discrete polymatroidal under this map", report)

    total = sum(k)
    image = f.image(net.edge_ids)
    spanned = rep.rank(mask_of(image, rep.r))
    if spanned != total:
        raise ExtractionError(
            f"image of the map spans dimension {spanned}, messages need {total}"
        )

    source_elems = [f[net.input_for(msg).id] for msg in net.messages]
    b = hconcat(
        [column_basis(rep.generator(i)) for i in source_elems], rows=rep.ambient, field=rep.field
    )
    if b.rows == b.cols:
        b_inv = invert(b)
        coords = {i: b_inv @ rep.generator(i) for i in image}
    else:
        coords = {}
        for i in image:
            x = solve_right(b, rep.generator(i))
            if x is None:
                raise ExtractionError(f"generator {i} leaves the span of the source generators")
            coords[i] = x

    globals_ = {}
    for pos, msg in enumerate(net.messages, start=1):
        globals_[net.input_for(msg).id] = selector(pos, k, rep.field)
    for e in net.edges:
        g = coords[f[e.id]]
        if g.cols > n:
            g = column_basis(g)
        globals_[e.id] = pad_columns(g, n)

    sol = FncSolution(field=rep.field, k=k, n=n, globals=globals_)
    check = verify_solution(net, sol)
    if not check.verified:
        raise ExtractionError(f"extracted solution fails {len(check.failures)} checks")
    logger.debug("extracted a (%s; %d) solution over F_%d", k, n, rep.field.q)
    return sol


# ==================== Solution -> polymatroid ====================


def polymatroid_from_solution(
    net: Network, sol: FncSolution
) -> tuple[Representation, PolymatroidMap]:
    """One ground element per edge (ancestral order), generated by that edge's global matrix."""
    report = verify_solution(net, sol)
    if not report.verified:
        raise UnverifiedSolutionError("solution does not verify", report)
    order = net.ancestral_order()
    rep = Representation(sol.field, sol.total, [sol.globals[e] for e in order])
    return rep, PolymatroidMap({e: i for i, e in enumerate(order, start=1)})


# ==================== Specialisations ====================


def scalar_specialisation(net: Network, rep: Representation, f: PolymatroidMap) -> FncSolution:
    """
    Scalar solution through the column matroid of a one-column-per-element
    representation: every k_i and n equal 1.
    """
    matroid = Matroid.from_representation(rep)
    if not is_matroidal(net, matroid, f):
        report = check_dpn(net, matroid.to_polymatroid(), f, [1] * net.m, 1)
        raise DpnViolationError("network is not matroidal under this map", report)
    return extract_solution(net, rep, f, n=1)


def _candidate_maps(net: Network, r: int) -> Iterator[dict[str, int]]:
    inputs = [e.id for e in net.inputs]
    edges = [e.id for e in net.edges]
    for srcs in itertools.permutations(range(1, r + 1), len(inputs)):
        for rest in itertools.product(range(1, r + 1), repeat=len(edges)):
            yield dict(zip(inputs, srcs)) | dict(zip(edges, rest))


def find_maps(
    net: Network,
    d: RankOracle,
    k: Sequence[int],
    n: int,
    limit: Optional[int] = None,
    config: Optional[MapSearchConfig] = None,
) -> list[PolymatroidMap]:
    """
    Every map under which the network is discrete polymatroidal, in enumeration order.

    Exponential in the number of edges; refused beyond the configured bounds.
    """
    config = config or get_config().maps
    edges = len(net.edge_ids)
    if d.r > config.max_ground_set:
        raise BudgetError(
            f"ground set {d.r} exceeds the map-search bound", d.r, config.max_ground_set
        )
    if edges > config.max_edges:
        raise BudgetError(f"{edges} edges exceed the map-search bound", edges, config.max_edges)

    found = []
    for candidate in _candidate_maps(net, d.r):
        f = PolymatroidMap(candidate)
        if check_dpn(net, d, f, k, n).holds:
            found.append(f)
            if limit is not None and len(found) >= limit:
                break
    logger.info("map search found %d maps", len(found))
    return found
