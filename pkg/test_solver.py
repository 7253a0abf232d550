"""Tests for the bounded linear search and the rate grids."""

import itertools
from fractions import Fraction

import pytest

from fnc_polymatroid.codec import verify_solution
from fnc_polymatroid.errors import DimensionError
from fnc_polymatroid.linalg import Mat, hconcat, rank
from fnc_polymatroid.models import Verdict
from fnc_polymatroid.network import Edge, InputEdge, Network
from fnc_polymatroid.solver import (
    average_grid,
    best_average_rate,
    max_symmetric_rate,
    search_linear,
    symmetric_grid,
)


def _identity_net() -> Network:
    return Network(["s", "t"], [InputEdge("e1", "s", 1, 1)], [Edge("s->t", "s", "t")], {"t": {1}})


def _sources_only() -> Network:
    return Network(["s"], [InputEdge("e1", "s", 1, 1)], [], {"s": {1}})


def _combination_net() -> Network:
    """Two messages at s, four relays, one sink per pair of relays demanding both."""
    relays = ["r1", "r2", "r3", "r4"]
    pairs = list(itertools.combinations(relays, 2))
    sinks = [f"t_{a}{b}" for a, b in pairs]
    edges = [Edge(f"s->{r}", "s", r) for r in relays]
    for (a, b), t in zip(pairs, sinks):
        edges += [Edge(f"{a}->{t}", a, t), Edge(f"{b}->{t}", b, t)]
    inputs = [InputEdge("e1", "s", 1, 1), InputEdge("e2", "s", 2, 1)]
    return Network(["s"] + relays + sinks, inputs, edges, {t: {1, 2} for t in sinks})


# ==================== Single cells ====================


@pytest.mark.parametrize("q", [2, 3])
def test_r4_scalar_impossible(r4_net, q):
    out = search_linear(r4_net, [1, 1, 1], 1, q)
    assert out.verdict == Verdict.EXHAUSTED_NONE
    assert out.examined <= out.space_size
    assert out.to_dict()["linear"] is True


def test_r4_half_rate(r4_net):
    out = search_linear(r4_net, [1, 1, 1], 2, 2)
    assert out.found
    sol = out.solution
    assert verify_solution(r4_net, sol).verified
    w4 = sol.globals["4'->4"]
    target = Mat(sol.field, [[1, 0], [0, 1], [0, 1]])
    assert rank(w4) == 2
    assert rank(hconcat([w4, target])) == 2


def test_r4_two_thirds_impossible(r4_net):
    out = search_linear(r4_net, [2, 2, 2], 3, 2)
    assert out.verdict == Verdict.EXHAUSTED_NONE
    assert out.space_size == 1395


def test_budget_refused_up_front(r4_net):
    out = search_linear(r4_net, [2, 2, 2], 3, 2, budget=10)
    assert out.verdict == Verdict.BUDGET_EXCEEDED
    assert out.examined == 0
    assert out.solution is None


def test_r5_cells(r5_build):
    net, _, _ = r5_build
    assert search_linear(net, [1, 1, 1], 1, 2).verdict == Verdict.EXHAUSTED_NONE
    assert search_linear(net, [1, 1, 1], 2, 2).found
    assert search_linear(net, [2, 2, 2], 3, 2).verdict == Verdict.EXHAUSTED_NONE


def test_unreduced_agrees(u23_net):
    net, _, _ = u23_net
    reduced = search_linear(net, [1, 1], 1, 2)
    full = search_linear(net, [1, 1], 1, 2, reduce=False)
    assert reduced.found and full.found
    assert not full.reduced
    assert verify_solution(net, full.solution).verified


def test_unreduced_search_agrees_when_exhausted(r4_net):
    full = search_linear(r4_net, [1, 1, 1], 1, 2, reduce=False)
    assert full.verdict == Verdict.EXHAUSTED_NONE
    assert full.space_size == 2048
    assert search_linear(r4_net, [1, 1, 1], 1, 2).verdict == Verdict.EXHAUSTED_NONE


def test_parallel_witness_matches_serial(r4_net):
    serial = search_linear(r4_net, [1, 1, 1], 2, 2, jobs=1)
    parallel = search_linear(r4_net, [1, 1, 1], 2, 2, jobs=2)
    assert parallel.found
    assert parallel.solution.to_dict() == serial.solution.to_dict()


def test_bad_dimensions(r4_net):
    with pytest.raises(DimensionError):
        search_linear(r4_net, [1, 1], 2, 2)
    with pytest.raises(DimensionError):
        search_linear(r4_net, [1, 1, 1], 0, 2)


def test_sources_only_network():
    out = search_linear(_sources_only(), [3], 1, 2)
    assert out.found
    assert out.space_size == 1


# ==================== Grids ====================


def test_symmetric_grid_order():
    assert symmetric_grid(2, 4) == [(2, 1), (1, 1), (2, 2), (2, 3), (1, 2), (2, 4), (1, 3), (1, 4)]


def test_average_grid_order():
    cells = average_grid(2, 2, 2)
    assert cells[0] == ([2, 2], 1)
    assert cells[-1] == ([1, 1], 2)
    averages = [Fraction(sum(k), 2 * n) for k, n in cells]
    assert averages == sorted(averages, reverse=True)


def test_identity_capacity():
    table = max_symmetric_rate(_identity_net(), 2, 2, 2)
    assert table.best == Fraction(1)
    assert [c.verdict for c in table.cells][:2] == [Verdict.EXHAUSTED_NONE, Verdict.FOUND]


def test_vector_only_ratio_is_found():
    net = _combination_net()
    assert search_linear(net, [1, 1], 1, 2).verdict == Verdict.EXHAUSTED_NONE
    assert search_linear(net, [2, 2], 2, 2).found

    table = max_symmetric_rate(net, 2, 2, 2)
    assert table.best == Fraction(1)
    searched = [(c.k[0], c.n, c.verdict) for c in table.cells]
    assert searched[:3] == [
        (2, 1, Verdict.EXHAUSTED_NONE),
        (1, 1, Verdict.EXHAUSTED_NONE),
        (2, 2, Verdict.FOUND),
    ]
    assert table.to_dict()["best"] == "1"


def test_sources_only_average():
    result = best_average_rate(_sources_only(), 2, 1, 1)
    assert result.best.average == Fraction(1)
    assert result.solution is not None


@pytest.mark.slow
def test_r4_symmetric_capacity(r4_net):
    table = max_symmetric_rate(r4_net, 2, 2, 4)
    assert table.best == Fraction(1, 2)
    verdicts = {(c.k[0], c.n): c.verdict for c in table.cells}
    assert verdicts[(2, 1)] == Verdict.EXHAUSTED_NONE
    assert verdicts[(1, 1)] == Verdict.EXHAUSTED_NONE
    assert verdicts[(2, 2)] == Verdict.EXHAUSTED_NONE
    assert verdicts[(2, 3)] == Verdict.EXHAUSTED_NONE
    assert verdicts[(1, 2)] == Verdict.FOUND
    assert table.to_dict()["best"] == "1/2"


@pytest.mark.slow
def test_r4_best_average(r4_net):
    result = best_average_rate(r4_net, 2, 2, 2)
    assert result.best.average == Fraction(1, 2)
    assert (result.best.k, result.best.n) == ([1, 1, 1], 2)


@pytest.mark.slow
def test_r5_best_average(r5_build):
    net, _, _ = r5_build
    result = best_average_rate(net, 2, 2, 2)
    assert (result.best.k, result.best.n) == ([2, 1, 1], 2)
    assert result.best.average == Fraction(2, 3)
    assert verify_solution(net, result.solution).verified


@pytest.mark.slow
def test_r5_symmetric_capacity(r5_build):
    net, _, _ = r5_build
    table = max_symmetric_rate(net, 2, 2, 3)
    assert table.best == Fraction(1, 2)
