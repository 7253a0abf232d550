"""Tests for the polymatroid <-> solution correspondence."""

from fractions import Fraction

import pytest

from fnc_polymatroid.bridge import (
    PolymatroidMap,
    check_dpn,
    dpn_edge_dim,
    extract_solution,
    find_maps,
    is_discrete_polymatroidal,
    is_matroidal,
    polymatroid_from_solution,
    scalar_specialisation,
)
from fnc_polymatroid.codec import FncSolution, rates, verify_solution
from fnc_polymatroid.config import MapSearchConfig
from fnc_polymatroid.errors import (
    BudgetError,
    DpnViolationError,
    ExtractionError,
    MapError,
    UnverifiedSolutionError,
)
from fnc_polymatroid.formats import load_solution
from fnc_polymatroid.linalg import Mat, hconcat, rank
from fnc_polymatroid.matroid import Matroid
from fnc_polymatroid.models import DpnCondition
from fnc_polymatroid.network import Edge, InputEdge, Network
from fnc_polymatroid.polymatroid import free_polymatroid, polymatroid_of
from fnc_polymatroid.solver import search_linear


def _relabel(f: PolymatroidMap, **changes) -> PolymatroidMap:
    out = dict(f.f)
    for key, value in changes.items():
        out[key.replace("__", "->")] = value
    return PolymatroidMap(out)


def _identity_net() -> Network:
    return Network(["s", "t"], [InputEdge("e1", "s", 1, 1)], [Edge("s->t", "s", "t")], {"t": {1}})


# ==================== Discrete-polymatroidal conditions ====================


def test_r4_is_dpn(r4, r4_rep, r4_net, r4_map):
    assert check_dpn(r4_net, r4, r4_map, [1, 1, 1], 2).holds
    assert check_dpn(r4_net, r4_rep, r4_map, [1, 1, 1], 2).holds
    assert dpn_edge_dim(r4_net, r4, r4_map) == 2


def test_r4_wrong_edge_dim(r4, r4_net, r4_map):
    report = check_dpn(r4_net, r4, r4_map, [1, 1, 1], 1)
    assert [v.condition for v in report.violations] == [DpnCondition.DIMENSIONS]


def test_r4_not_dpn_at_rho_max(r4, r4_net, r4_map):
    report = check_dpn(r4_net, r4, r4_map, [2, 2, 2], 2)
    assert report.failed(DpnCondition.DIMENSIONS)
    assert report.failed(DpnCondition.INDEPENDENT)
    assert not is_discrete_polymatroidal(r4_net, r4, r4_map)


def test_node_rank_violation(r4, r4_net, r4_map):
    f = _relabel(r4_map, **{"4__d1_1": 3})
    report = check_dpn(r4_net, r4, f, [1, 1, 1], 2)
    nodes = {v.node for v in report.violations if v.condition == DpnCondition.NODE_RANK}
    assert nodes == {"4", "d1_1"}


def test_injective_sources(r4, r4_net, r4_map):
    f = _relabel(r4_map, e2=1)
    report = check_dpn(r4_net, r4, f, [1, 1, 1], 2)
    assert report.failed(DpnCondition.INJECTIVE)
    assert report.violations[0].elements == [1]


def test_partial_map_rejected(r4, r4_net, r4_map):
    partial = dict(r4_map.f)
    del partial["4'->4"]
    with pytest.raises(MapError):
        check_dpn(r4_net, r4, PolymatroidMap(partial), [1, 1, 1], 2)
    with pytest.raises(MapError):
        check_dpn(r4_net, r4, _relabel(r4_map, e1=9), [1, 1, 1], 2)


def test_edge_dim_clause_vacuous_without_intermediate_images():
    f = PolymatroidMap({"e1": 1, "s->t": 1})
    d = free_polymatroid(2)
    assert dpn_edge_dim(_identity_net(), d, f) is None
    assert check_dpn(_identity_net(), d, f, [1], 5).holds


def test_r5_dpn_non_symmetric(r5, r5_build):
    net, f, _ = r5_build
    assert check_dpn(net, r5, f, [2, 1, 1], 2).holds


def test_u23_matroidal(u23_net):
    net, f, _ = u23_net
    u23 = Matroid.uniform(2, 3)
    assert is_matroidal(net, u23, f)
    assert check_dpn(net, u23.to_polymatroid(), f, [1, 1], 1).holds


# ==================== Extraction ====================


def test_r4_extraction(r4_rep, r4_net, r4_map, data_dir):
    sol = extract_solution(r4_net, r4_rep, r4_map)
    expected = load_solution(data_dir / "r4_solution.json")
    assert sol.to_dict() == expected.to_dict()
    assert rates(r4_net, sol).average == Fraction(1, 2)


def test_extraction_pads_to_requested_width(r4_rep, r4_net, r4_map):
    sol = extract_solution(r4_net, r4_rep, r4_map, n=3)
    assert sol.n == 3
    assert verify_solution(r4_net, sol).verified
    with pytest.raises(ExtractionError):
        extract_solution(r4_net, r4_rep, r4_map, n=1)


def test_extraction_agrees_with_search(r4_rep, r4_net, r4_map):
    extracted = extract_solution(r4_net, r4_rep, r4_map)
    out = search_linear(r4_net, extracted.k, extracted.n, extracted.q)
    assert out.found
    assert verify_solution(r4_net, extracted).verified
    assert verify_solution(r4_net, out.solution).verified
    a, b = extracted.globals["4'->4"], out.solution.globals["4'->4"]
    assert rank(a) == rank(b) == rank(hconcat([a, b])) == 2


def test_extraction_refuses_non_dpn(r4_rep, r4_net, r4_map):
    with pytest.raises(DpnViolationError) as exc:
        extract_solution(r4_net, r4_rep, _relabel(r4_map, **{"4__d1_1": 3}))
    assert exc.value.report.failed(DpnCondition.NODE_RANK)


def test_r5_extraction(r5_rep, r5_build):
    net, f, _ = r5_build
    sol = extract_solution(net, r5_rep, f)
    assert (sol.k, sol.n) == ([2, 1, 1], 2)
    report = rates(net, sol)
    assert report.rates == [Fraction(1), Fraction(1, 2), Fraction(1, 2)]
    assert report.average == Fraction(2, 3)
    assert not report.symmetric


def test_u23_scalar(u23_rep, u23_net):
    net, f, _ = u23_net
    sol = scalar_specialisation(net, u23_rep, f)
    assert (sol.k, sol.n) == ([1, 1], 1)
    assert verify_solution(net, sol).verified


def test_u23_scalar_edges_are_the_generators(u23_rep, u23_net):
    net, f, _ = u23_net
    sol = scalar_specialisation(net, u23_rep, f)
    for eid in net.edge_ids:
        assert sol.globals[eid] == u23_rep.generator(f[eid])


def test_scalar_needs_matroidal_map(u23_rep, u23_net):
    net, f, _ = u23_net
    with pytest.raises(DpnViolationError):
        scalar_specialisation(net, u23_rep, _relabel(f, **{"3->d1_1": 1}))


# ==================== Solution -> polymatroid ====================


def test_polymatroid_of_solution(r4_net, data_dir):
    sol = load_solution(data_dir / "r4_solution.json")
    rep, f = polymatroid_from_solution(r4_net, sol)
    assert rep.r == len(r4_net.edge_ids)
    assert rep.ambient == 3
    assert f["e1"] == 1 and f["4'->4"] == 9
    assert polymatroid_of(rep).validate_axioms().valid
    assert check_dpn(r4_net, rep, f, sol.k, dpn_edge_dim(r4_net, rep, f)).holds

    again = extract_solution(r4_net, rep, f)
    assert verify_solution(r4_net, again).verified
    assert again.n == sol.n


def test_polymatroid_of_unverified(r4_net, data_dir):
    sol = load_solution(data_dir / "r4_solution.json")
    globals_ = dict(sol.globals)
    globals_["4->d1_1"] = Mat(sol.field, [[0, 0], [0, 0], [0, 0]])
    with pytest.raises(UnverifiedSolutionError):
        polymatroid_from_solution(r4_net, FncSolution(sol.field, sol.k, sol.n, globals_))


# ==================== Map search ====================


def test_find_maps_identity_network():
    found = find_maps(_identity_net(), free_polymatroid(2), [1], 1)
    assert [m.f for m in found] == [{"e1": 1, "s->t": 1}, {"e1": 2, "s->t": 2}]
    assert len(find_maps(_identity_net(), free_polymatroid(2), [1], 1, limit=1)) == 1


def test_find_maps_refuses_large_instances(r4_net, r4):
    with pytest.raises(BudgetError):
        find_maps(r4_net, r4, [1, 1, 1], 2, config=MapSearchConfig(max_edges=4))
