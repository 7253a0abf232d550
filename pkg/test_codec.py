"""Tests for solution verification and rates."""

from fractions import Fraction

import pytest

from fnc_polymatroid.codec import (
    FncSolution,
    incoming,
    rates,
    restrict_solution,
    selector,
    verify_solution,
)
from fnc_polymatroid.errors import DimensionError, FieldError, UnverifiedSolutionError
from fnc_polymatroid.formats import load_solution
from fnc_polymatroid.linalg import Field, Mat
from fnc_polymatroid.models import FailureKind


@pytest.fixture
def r4_sol(data_dir):
    return load_solution(data_dir / "r4_solution.json")


def _with(sol: FncSolution, **changes) -> FncSolution:
    globals_ = dict(sol.globals)
    for key, rows in changes.items():
        globals_[key.replace("__", "->")] = Mat(sol.field, rows)
    return FncSolution(sol.field, list(sol.k), sol.n, globals_)


def test_selector():
    s = selector(2, [1, 2, 1], Field(3))
    assert s.to_rows() == [[0, 0], [1, 0], [0, 1], [0, 0]]
    with pytest.raises(DimensionError):
        selector(4, [1, 2, 1])


def test_r4_solution_verifies(r4_net, r4_sol):
    report = verify_solution(r4_net, r4_sol)
    assert report.verified
    assert set(report.local) == {e.id for e in r4_net.edges}
    assert set(report.decoders) == {("d1_1", 1), ("d2_1", 2), ("d3_1", 3)}


def test_witnesses_reproduce_the_solution(r4_net, r4_sol):
    report = verify_solution(r4_net, r4_sol)
    for (node, msg), decoder in report.decoders.items():
        received = incoming(r4_net, r4_sol, node)
        assert received @ decoder == r4_sol.globals[f"e{msg}"]


def test_rates(r4_net, r4_sol):
    report = rates(r4_net, r4_sol)
    assert report.rates == [Fraction(1, 2)] * 3
    assert report.average == Fraction(1, 2)
    assert report.symmetric
    assert report.to_dict() == {"rates": ["1/2", "1/2", "1/2"], "average": "1/2", "symmetric": True}


def test_source_failure(r4_net, r4_sol):
    bad = _with(r4_sol, e1=[[1], [1], [0]])
    report = verify_solution(r4_net, bad)
    kinds = {(f.kind, f.edge) for f in report.failures}
    assert (FailureKind.SOURCE, "e1") in kinds


def test_decoding_failure(r4_net, r4_sol):
    bad = _with(r4_sol, **{"4__d1_1": [[0, 0], [0, 1], [0, 1]]})
    report = verify_solution(r4_net, bad)
    assert [(f.kind, f.node, f.message) for f in report.failures] == [
        (FailureKind.DECODING, "d1_1", 1)
    ]
    with pytest.raises(UnverifiedSolutionError) as exc:
        rates(r4_net, bad)
    assert exc.value.report.failures == report.failures


def test_local_failure(r4_net, r4_sol):
    bad = _with(r4_sol, **{"3__d2_1": [[1, 0], [0, 0], [0, 0]]})
    report = verify_solution(r4_net, bad)
    assert [(f.kind.value, f.edge, f.node) for f in report.failures] == [
        ("decoding", None, "d2_1"),
        ("local", "3->d2_1", "3"),
    ]


def _rebased(sol: FncSolution, edge_id: str, t: Mat) -> FncSolution:
    globals_ = dict(sol.globals)
    globals_[edge_id] = sol.globals[edge_id] @ t
    return FncSolution(sol.field, list(sol.k), sol.n, globals_)


@pytest.mark.parametrize("t", [[[1, 1], [0, 1]], [[0, 1], [1, 0]], [[1, 0], [1, 1]]])
def test_verification_ignores_edge_basis(r4_net, r4_sol, t):
    change = Mat(r4_sol.field, t)
    for e in r4_net.edges:
        assert verify_solution(r4_net, _rebased(r4_sol, e.id, change)).verified

    bad = _with(r4_sol, **{"3__d2_1": [[1, 0], [0, 0], [0, 0]]})
    expected = [(f.kind, f.edge, f.node) for f in verify_solution(r4_net, bad).failures]
    rebased = verify_solution(r4_net, _rebased(bad, "4'->4", change))
    assert [(f.kind, f.edge, f.node) for f in rebased.failures] == expected


def test_shape_errors(r4_net, r4_sol):
    with pytest.raises(DimensionError):
        verify_solution(r4_net, _with(r4_sol, e1=[[1, 0], [0, 0], [0, 0]]))
    missing = dict(r4_sol.globals)
    del missing["4'->4"]
    with pytest.raises(DimensionError):
        verify_solution(r4_net, FncSolution(r4_sol.field, [1, 1, 1], 2, missing))
    other = dict(r4_sol.globals)
    other["e1"] = Mat(Field(3), [[1], [0], [0]])
    with pytest.raises(FieldError):
        verify_solution(r4_net, FncSolution(r4_sol.field, [1, 1, 1], 2, other))


def test_restrict_solution(r4_net, r4_sol):
    sub, part = restrict_solution(r4_net, r4_sol, "d1_1")
    assert set(part.globals) == set(sub.edge_ids)
    assert verify_solution(sub, part).verified


def test_solution_serialisation(r4_sol):
    assert FncSolution.from_dict(r4_sol.to_dict()).globals == r4_sol.globals
