"""
Bounded exhaustive search for linear (k_1, ..., k_m; n) solutions over F_q.

Every verdict here concerns linear solutions only.

Reduced search space. An intermediate edge whose origin receives at most
n dimensions carries everything it receives (zero-padded); so does an
edge whose origin can span at most n dimensions, through a canonical
basis. Every other edge is a coding edge: its candidates are the
n-dimensional subspaces of its origin's incoming space. Enlarging an
edge's column space never breaks a later local encoding or a decoder,
so this loses no solvable instance.

Coding edges into nodes without outgoing intermediate edges only matter
to that node; they are resolved per node once everything else is fixed.
The remaining coding edges are enumerated depth-first in ancestral order,
and each demand is checked as soon as all edges into its node are known.
The witness returned is the first one in that order.
"""

import itertools
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Optional, Sequence

import numpy as np

from .codec import FncSolution, selector, verify_solution
from .config import SearchConfig, get_config
from .errors import DimensionError, NetworkError, UnverifiedSolutionError
from .linalg import Field, Mat, batch_rank, batch_rref, gaussian_binomial
from .models import RateReport, Verdict, fraction_str
from .network import Network

logger = logging.getLogger(__name__)


# ==================== Candidate spaces ====================


def subspace_candidates(dim: int, n: int, q: int) -> np.ndarray:
    """
    Right factors of shape (count, dim, n), one per n-dimensional subspace
    of F_q^dim: transposed n x dim reduced echelon forms, pivot sets in
    lexicographic order, free entries as base-q digits.
    """
    blocks = []
    for pivots in itertools.combinations(range(dim), n):
        free = [
            (row, col)
            for row, p in enumerate(pivots)
            for col in range(p + 1, dim)
            if col not in pivots
        ]
        base = np.zeros((n, dim), dtype=np.int64)
        base[np.arange(n), list(pivots)] = 1
        block = np.broadcast_to(base, (q ** len(free), n, dim)).copy()
        if free:
            digits = np.array(list(itertools.product(range(q), repeat=len(free))), dtype=np.int64)
            rows, cols = zip(*free)
            block[:, list(rows), list(cols)] = digits
        blocks.append(block)
    return np.concatenate(blocks).transpose(0, 2, 1).copy()


def matrix_candidates(rows: int, cols: int, q: int) -> np.ndarray:
    """Every rows x cols matrix over F_q, first entry most significant."""
    size = rows * cols
    if size == 0:
        return np.zeros((1, rows, cols), dtype=np.int64)
    digits = np.array(list(itertools.product(range(q), repeat=size)), dtype=np.int64)
    return digits.reshape(-1, rows, cols)


# ==================== Results ====================


@dataclass
class SearchOutcome:
    verdict: Verdict
    k: list[int]
    n: int
    q: int
    examined: int
    space_size: int
    budget: int
    reduced: bool = True
    solution: Optional[FncSolution] = None

    @property
    def found(self) -> bool:
        return self.verdict == Verdict.FOUND

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "linear": True,
            "k": list(self.k),
            "n": self.n,
            "q": self.q,
            "examined": self.examined,
            "space_size": self.space_size,
            "budget": self.budget,
            "reduced": self.reduced,
            "solution": self.solution.to_dict() if self.solution else None,
        }


@dataclass
class RateCell:
    """One (k; n) point of a rate grid and its search verdict."""

    k: list[int]
    n: int
    verdict: Verdict
    examined: int
    space_size: int

    @property
    def average(self) -> Fraction:
        return Fraction(sum(self.k), len(self.k) * self.n)

    def to_dict(self) -> dict:
        return {
            "k": list(self.k),
            "n": self.n,
            "average": fraction_str(self.average),
            "verdict": self.verdict.value,
            "examined": self.examined,
            "space_size": self.space_size,
        }

    @classmethod
    def of(cls, outcome: SearchOutcome) -> "RateCell":
        return cls(
            k=list(outcome.k),
            n=outcome.n,
            verdict=outcome.verdict,
            examined=outcome.examined,
            space_size=outcome.space_size,
        )


@dataclass
class SymmetricRateTable:
    cells: list[RateCell] = field(default_factory=list)
    best: Optional[Fraction] = None

    def to_dict(self) -> dict:
        return {
            "linear": True,
            "best": fraction_str(self.best) if self.best is not None else None,
            "cells": [c.to_dict() for c in self.cells],
        }


@dataclass
class AverageRateResult:
    cells: list[RateCell] = field(default_factory=list)
    best: Optional[RateCell] = None
    solution: Optional[FncSolution] = None

    def to_dict(self) -> dict:
        best = None
        if self.best is not None:
            best = {
                "k": list(self.best.k),
                "n": self.best.n,
                **RateReport.of(list(self.best.k), self.best.n).to_dict(),
            }
        return {
            "linear": True,
            "best": best,
            "cells": [c.to_dict() for c in self.cells],
            "solution": self.solution.to_dict() if self.solution else None,
        }


# ==================== Search plan ====================


@dataclass
class _EdgePlan:
    id: str
    kind: str  # "pad", "basis" or "coding"
    sources: list[str]
    in_width: int
    cap: int
    count: int = 1
    level: int = 0
    deferred: bool = False
    candidates: Optional[np.ndarray] = None


@dataclass
class _NodePlan:
    node: str
    edges: list[str]
    deferred: list[_EdgePlan]
    wanted: np.ndarray
    level: int = 0

    @property
    def combos(self) -> int:
        return prod(ep.count for ep in self.deferred)


class _SearchPlan:
    """Edge kinds, levels and demand checks for one (k; n; q) cell."""

    def __init__(self, net: Network, k: Sequence[int], n: int, q: int, reduce: bool):
        self.net = net.with_dims(k)
        report = self.net.validate()
        if not report.valid:
            raise NetworkError(f"invalid network: {report.issues[0].detail}")
        self.k = list(k)
        self.n = n
        self.q = q
        self.reduce = reduce
        self.field = Field(q)
        self.total = sum(self.k)

        position = {msg: p for p, msg in enumerate(self.net.messages, start=1)}
        self.inputs = {
            e.id: selector(position[e.msg], self.k, self.field).data for e in self.net.inputs
        }
        width = {e.id: e.k for e in self.net.inputs}

        self.edges: list[_EdgePlan] = []
        for eid in self.net.ancestral_order():
            if eid in self.inputs:
                continue
            e = self.net.edge(eid)
            sources = self.net.in_edges(e.origin)
            in_width = sum(width[s] for s in sources)
            cap = min(in_width, self.total)
            if not reduce:
                ep = _EdgePlan(eid, "coding", sources, in_width, in_width, q ** (in_width * n))
            elif in_width <= n:
                ep = _EdgePlan(eid, "pad", sources, in_width, cap)
            elif cap <= n:
                ep = _EdgePlan(eid, "basis", sources, in_width, cap)
            else:
                ep = _EdgePlan(eid, "coding", sources, in_width, cap, gaussian_binomial(cap, n, q))
                ep.deferred = not self.net.out_edges(e.dest)
            width[eid] = n
            self.edges.append(ep)

        self.core: list[_EdgePlan] = []
        level = {eid: 0 for eid in self.inputs}
        for ep in self.edges:
            base = max((level[s] for s in ep.sources), default=0)
            if ep.kind == "coding" and not ep.deferred:
                self.core.append(ep)
                ep.level = len(self.core)
            else:
                ep.level = base
            level[ep.id] = ep.level

        by_id = {ep.id: ep for ep in self.edges}
        self.checks: list[_NodePlan] = []
        for node in self.net.nodes:
            wanted = self.net.demanded(node)
            if not wanted:
                continue
            ins = self.net.in_edges(node)
            deferred = [by_id[e] for e in ins if e in by_id and by_id[e].deferred]
            plain = [e for e in ins if not (e in by_id and by_id[e].deferred)]
            sel = np.concatenate(
                [selector(position[msg], self.k, self.field).data for msg in wanted], axis=1
            )
            lvl = max([level[e] for e in plain] + [ep.level for ep in deferred], default=0)
            self.checks.append(_NodePlan(node, plain, deferred, sel, lvl))

        self.space_size = prod(ep.count for ep in self.core) * prod(c.combos for c in self.checks)

    def materialise(self) -> None:
        """Generate candidate arrays for every edge that is enumerated."""
        wanted = list(self.core) + [ep for c in self.checks for ep in c.deferred]
        for ep in wanted:
            if ep.candidates is not None:
                continue
            if self.reduce:
                ep.candidates = subspace_candidates(ep.cap, self.n, self.q)
            else:
                ep.candidates = matrix_candidates(ep.in_width, self.n, self.q)


# ==================== Enumeration ====================


class _Searcher:
    def __init__(
        self,
        plan: _SearchPlan,
        chunk_size: int,
        first: Optional[tuple[int, int]] = None,
    ):
        self.plan = plan
        self.q = plan.q
        self.chunk = max(1, chunk_size)
        self.first = first
        self.examined = 0
        self.fixed_at: dict[int, list[_EdgePlan]] = defaultdict(list)
        for ep in plan.edges:
            if ep.kind != "coding":
                self.fixed_at[ep.level].append(ep)
        self.checks_at: dict[int, list[_NodePlan]] = defaultdict(list)
        for check in plan.checks:
            self.checks_at[check.level].append(check)

    # ---------- batched matrix helpers ----------

    def _gather(self, ids: Sequence[str], state: dict, batch: int) -> np.ndarray:
        parts = []
        for eid in ids:
            if eid in self.plan.inputs:
                sel = self.plan.inputs[eid]
                parts.append(np.broadcast_to(sel, (batch,) + sel.shape))
            else:
                parts.append(state[eid])
        if not parts:
            return np.zeros((batch, self.plan.total, 0), dtype=np.int64)
        return np.concatenate(parts, axis=2)

    def _frame(self, ep: _EdgePlan, state: dict, batch: int) -> np.ndarray:
        received = self._gather(ep.sources, state, batch)
        if not self.plan.reduce:
            return received
        reduced, _ = batch_rref(received.transpose(0, 2, 1), self.q)
        return reduced[:, : ep.cap, :].transpose(0, 2, 1)

    def _pad(self, g: np.ndarray) -> np.ndarray:
        missing = self.plan.n - g.shape[2]
        if missing == 0:
            return g
        zeros = np.zeros(g.shape[:2] + (missing,), dtype=np.int64)
        return np.concatenate([g, zeros], axis=2)

    def _fixed(self, ep: _EdgePlan, state: dict, batch: int) -> np.ndarray:
        if ep.kind == "basis":
            return self._pad(self._frame(ep, state, batch))
        return self._pad(self._gather(ep.sources, state, batch))

    def _decodable(self, g: np.ndarray, wanted: np.ndarray) -> np.ndarray:
        sel = np.broadcast_to(wanted, (g.shape[0],) + wanted.shape)
        before = batch_rank(g, self.q)
        after = batch_rank(np.concatenate([g, sel], axis=2), self.q)
        return before == after

    # ---------- demand checks ----------

    def _sink_block(
        self,
        check: _NodePlan,
        base: np.ndarray,
        frames: list[np.ndarray],
        digits: tuple,
    ) -> np.ndarray:
        """Decodability for every (state, combo) pair: shape (states, combos)."""
        states, combos = base.shape[0], len(digits[0])
        parts = [np.broadcast_to(base[:, None], (states, combos) + base.shape[1:])]
        for frame, ep, dig in zip(frames, check.deferred, digits):
            parts.append(np.matmul(frame[:, None], ep.candidates[dig][None]) % self.q)
        g = np.concatenate(parts, axis=3).reshape(states * combos, self.plan.total, -1)
        self.examined += states * combos
        return self._decodable(g, check.wanted).reshape(states, combos)

    def _sink_ok(self, check: _NodePlan, state: dict, batch: int, idx: np.ndarray) -> np.ndarray:
        base = self._gather(check.edges, state, batch)[idx]
        frames = [self._frame(ep, state, batch)[idx] for ep in check.deferred]
        counts = tuple(ep.count for ep in check.deferred)
        ok = np.zeros(len(idx), dtype=bool)
        step = max(1, self.chunk // max(1, len(idx)))
        for start in range(0, check.combos, step):
            pending = np.flatnonzero(~ok)
            if pending.size == 0:
                break
            combos = np.arange(start, min(check.combos, start + step))
            digits = np.unravel_index(combos, counts)
            good = self._sink_block(check, base[pending], [f[pending] for f in frames], digits)
            ok[pending[good.any(axis=1)]] = True
        return ok

    def _first_combo(self, check: _NodePlan, state: dict) -> tuple[int, ...]:
        base = self._gather(check.edges, state, 1)
        frames = [self._frame(ep, state, 1) for ep in check.deferred]
        counts = tuple(ep.count for ep in check.deferred)
        for start in range(0, check.combos, self.chunk):
            combos = np.arange(start, min(check.combos, start + self.chunk))
            digits = np.unravel_index(combos, counts)
            good = self._sink_block(check, base, frames, digits)[0]
            if good.any():
                hit = int(np.argmax(good))
                return tuple(int(d[hit]) for d in digits)
        raise RuntimeError(f"no decodable combination at {check.node!r} for an accepted state")

    def _check(self, state: dict, batch: int, level: int) -> np.ndarray:
        alive = np.ones(batch, dtype=bool)
        for check in self.checks_at[level]:
            idx = np.flatnonzero(alive)
            if idx.size == 0:
                break
            if check.deferred:
                ok = self._sink_ok(check, state, batch, idx)
            else:
                ok = self._decodable(self._gather(check.edges, state, batch)[idx], check.wanted)
            alive[idx[~ok]] = False
        return alive

    # ---------- depth-first enumeration ----------

    def _expand(self, state: dict, picks: np.ndarray, ep: _EdgePlan, lo: int, hi: int, t: int):
        batch, width = len(picks), hi - lo
        frame = self._frame(ep, state, batch)
        g = np.matmul(frame[:, None], ep.candidates[lo:hi][None]) % self.q
        size = batch * width
        new = {eid: np.repeat(arr, width, axis=0) for eid, arr in state.items()}
        new[ep.id] = g.reshape(size, self.plan.total, self.plan.n)
        new_picks = np.concatenate(
            [np.repeat(picks, width, axis=0), np.tile(np.arange(lo, hi), batch)[:, None]], axis=1
        )
        for fixed in self.fixed_at[t]:
            new[fixed.id] = self._fixed(fixed, new, size)
        return new, new_picks

    def _descend(self, state: dict, picks: np.ndarray, t: int) -> Optional[list[int]]:
        if t > len(self.plan.core):
            return [int(x) for x in picks[0]]
        ep = self.plan.core[t - 1]
        lo, hi = (self.first if t == 1 and self.first else (0, ep.count))
        if hi <= lo:
            return None
        span = hi - lo
        prefix_step = max(1, self.chunk // span)
        cand_step = min(span, self.chunk)
        for p0 in range(0, len(picks), prefix_step):
            p1 = min(len(picks), p0 + prefix_step)
            sub = {eid: arr[p0:p1] for eid, arr in state.items()}
            for c0 in range(lo, hi, cand_step):
                c1 = min(hi, c0 + cand_step)
                new, new_picks = self._expand(sub, picks[p0:p1], ep, c0, c1, t)
                self.examined += len(new_picks)
                alive = self._check(new, len(new_picks), t)
                if not alive.any():
                    continue
                survivors = {eid: arr[alive] for eid, arr in new.items()}
                found = self._descend(survivors, new_picks[alive], t + 1)
                if found is not None:
                    return found
        return None

    def run(self) -> Optional[list[int]]:
        """Indices of the first surviving core assignment, or None."""
        state: dict = {}
        for ep in self.fixed_at[0]:
            state[ep.id] = self._fixed(ep, state, 1)
        if not self._check(state, 1, 0)[0]:
            return None
        return self._descend(state, np.zeros((1, 0), dtype=np.int64), 1)

    # ---------- witness ----------

    def assemble(self, picks: Sequence[int]) -> dict[str, np.ndarray]:
        state: dict = {}
        for ep in self.fixed_at[0]:
            state[ep.id] = self._fixed(ep, state, 1)
        for t, ep in enumerate(self.plan.core, start=1):
            frame = self._frame(ep, state, 1)
            state[ep.id] = np.matmul(frame, ep.candidates[picks[t - 1]]) % self.q
            for fixed in self.fixed_at[t]:
                state[fixed.id] = self._fixed(fixed, state, 1)
        for check in self.plan.checks:
            if not check.deferred:
                continue
            combo = self._first_combo(check, state)
            for ep, idx in zip(check.deferred, combo):
                state[ep.id] = np.matmul(self._frame(ep, state, 1), ep.candidates[idx]) % self.q
        for ep in self.plan.edges:
            if ep.id not in state:
                # deferred into a node nobody reads: first candidate
                state[ep.id] = self._frame(ep, state, 1)[:, :, : self.plan.n]
        return state

    def solution(self, picks: Sequence[int]) -> FncSolution:
        plan = self.plan
        state = self.assemble(picks)
        globals_ = {eid: Mat(plan.field, sel) for eid, sel in plan.inputs.items()}
        for ep in plan.edges:
            globals_[ep.id] = Mat(plan.field, state[ep.id][0])
        sol = FncSolution(field=plan.field, k=list(plan.k), n=plan.n, globals=globals_)
        report = verify_solution(plan.net, sol)
        if not report.verified:
            raise UnverifiedSolutionError("search produced a solution that does not verify", report)
        return sol


def _search_block(payload: tuple) -> tuple[Optional[list[int]], int]:
    """Worker entry point: search one contiguous block of the first core edge's candidates."""
    net_data, k, n, q, reduce, chunk, lo, hi = payload
    plan = _SearchPlan(Network.from_dict(net_data), k, n, q, reduce)
    plan.materialise()
    searcher = _Searcher(plan, chunk, first=(lo, hi))
    return searcher.run(), searcher.examined


def _search_parallel(
    net: Network, plan: _SearchPlan, chunk: int, jobs: int
) -> tuple[Optional[list[int]], int]:
    count = plan.core[0].count
    blocks = min(count, jobs * 4)
    bounds = [count * i // blocks for i in range(blocks + 1)]
    payloads = [
        (net.to_dict(), plan.k, plan.n, plan.q, plan.reduce, chunk, lo, hi)
        for lo, hi in zip(bounds, bounds[1:])
    ]
    examined = 0
    picks = None
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_search_block, p) for p in payloads]
        for fut in futures:
            found, seen = fut.result()
            examined += seen
            if found is not None:
                picks = found
                break
        for fut in futures:
            fut.cancel()
    return picks, examined


# ==================== Public API ====================


def search_linear(
    net: Network,
    k: Sequence[int],
    n: int,
    q: int,
    budget: Optional[int] = None,
    jobs: Optional[int] = None,
    reduce: Optional[bool] = None,
    config: Optional[SearchConfig] = None,
) -> SearchOutcome:
    """Decide whether a linear (k; n) solution over F_q exists, within the budget."""
    config = config or get_config().search
    budget = config.budget if budget is None else budget
    jobs = config.jobs if jobs is None else jobs
    reduce = config.reduce if reduce is None else reduce
    if len(k) != net.m:
        raise DimensionError(f"expected {net.m} message dimensions, got {len(k)}")
    if n < 1 or any(x < 1 for x in k):
        raise DimensionError(f"dimensions must be positive: k={list(k)}, n={n}")

    plan = _SearchPlan(net, k, n, q, reduce)
    logger.info(
        "search k=%s n=%d q=%d: %d core coding edges, %d demand checks, space %d",
        list(k),
        n,
        q,
        len(plan.core),
        len(plan.checks),
        plan.space_size,
    )

    def outcome(verdict: Verdict, examined: int, sol: Optional[FncSolution] = None):
        return SearchOutcome(
            verdict=verdict,
            k=list(k),
            n=n,
            q=q,
            examined=examined,
            space_size=plan.space_size,
            budget=budget,
            reduced=reduce,
            solution=sol,
        )

    if plan.space_size > budget:
        logger.warning("search space %d exceeds the budget %d", plan.space_size, budget)
        return outcome(Verdict.BUDGET_EXCEEDED, 0)

    plan.materialise()
    if jobs > 1 and plan.core and plan.core[0].count > 1:
        picks, examined = _search_parallel(net, plan, config.chunk_size, jobs)
    else:
        searcher = _Searcher(plan, config.chunk_size)
        picks = searcher.run()
        examined = searcher.examined

    if picks is None:
        logger.info("no linear solution for k=%s n=%d q=%d", list(k), n, q)
        return outcome(Verdict.EXHAUSTED_NONE, examined)

    sol = _Searcher(plan, config.chunk_size).solution(picks)
    logger.info("found a linear solution for k=%s n=%d q=%d", list(k), n, q)
    return outcome(Verdict.FOUND, examined, sol)


def symmetric_grid(k_max: int, n_max: int) -> list[tuple[int, int]]:
    """Every (k, n) in the grid, largest ratio k/n first; within a ratio, smaller n first."""
    cells = [(k, n) for k in range(1, k_max + 1) for n in range(1, n_max + 1)]
    return sorted(cells, key=lambda kn: (-Fraction(*kn), kn[1]))


def max_symmetric_rate(
    net: Network,
    q: int,
    k_max: int,
    n_max: int,
    budget: Optional[int] = None,
    jobs: Optional[int] = None,
) -> SymmetricRateTable:
    """
    Search the symmetric grid one ratio at a time; the best is the largest ratio found.

    A ratio is tried at each of its (k, n) pairs until one has a solution, so a
    ratio that only admits a vector solution is still found. It counts as
    unsolved only once every pair for it is exhausted or over budget.
    """
    if k_max < 1 or n_max < 1:
        raise DimensionError(f"grid bounds must be positive: k_max={k_max}, n_max={n_max}")
    table = SymmetricRateTable()
    for ratio, pairs in itertools.groupby(
        symmetric_grid(k_max, n_max), key=lambda kn: Fraction(*kn)
    ):
        for k, n in pairs:
            out = search_linear(net, [k] * net.m, n, q, budget=budget, jobs=jobs)
            table.cells.append(RateCell.of(out))
            if out.found:
                if table.best is None:
                    table.best = ratio
                break
    return table


def average_grid(m: int, dim_max: int, n_max: int) -> list[tuple[list[int], int]]:
    """All (k; n) cells, highest average first; ties by smaller n, then larger k."""
    cells = [
        (list(k), n)
        for n in range(1, n_max + 1)
        for k in itertools.product(range(1, dim_max + 1), repeat=m)
    ]
    cells.sort(key=lambda c: (-Fraction(sum(c[0]), m * c[1]), c[1], [-x for x in c[0]]))
    return cells


def best_average_rate(
    net: Network,
    q: int,
    dim_max: int,
    n_max: int,
    budget: Optional[int] = None,
    jobs: Optional[int] = None,
) -> AverageRateResult:
    """Walk the grid from the highest average down and stop at the first cell with a solution."""
    if dim_max < 1 or n_max < 1:
        raise DimensionError(f"grid bounds must be positive: dim_max={dim_max}, n_max={n_max}")
    if net.m == 0:
        raise DimensionError("network has no messages")
    result = AverageRateResult()
    for k, n in average_grid(net.m, dim_max, n_max):
        out = search_linear(net, k, n, q, budget=budget, jobs=jobs)
        cell = RateCell.of(out)
        result.cells.append(cell)
        if out.found:
            result.best = cell
            result.solution = out.solution
            break
    return result
