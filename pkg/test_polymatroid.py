"""Tests for rank tables, bases, C-sets and representations."""

import itertools

import numpy as np
import pytest

from fnc_polymatroid.config import PolymatroidConfig
from fnc_polymatroid.constructor import eligible_bases
from fnc_polymatroid.errors import BudgetError, PolymatroidError
from fnc_polymatroid.linalg import Field, Mat, random_invertible
from fnc_polymatroid.models import Axiom
from fnc_polymatroid.polymatroid import (
    DiscretePolymatroid,
    Representation,
    free_polymatroid,
    polymatroid_of,
    subvector_closure_violations,
    validate_exchange,
)
from fnc_polymatroid.vectors import restrict

R4_RANKS = [0, 1, 1, 2, 1, 2, 2, 3, 2, 2, 3, 3, 3, 3, 3, 3]

R5_RANKS = [
    0, 2, 1, 3, 1, 3, 2, 4, 2, 4, 3, 4, 3, 4, 4, 4,
    2, 4, 3, 4, 2, 4, 3, 4, 4, 4, 4, 4, 4, 4, 4, 4,
]  # fmt: skip


def test_r4_rank_table(r4):
    assert list(r4.table) == R4_RANKS


def test_r5_rank_table(r5):
    assert list(r5.table) == R5_RANKS


def test_rank_of_set(r4_rep):
    assert r4_rep.rank_of_set([]) == 0
    assert r4_rep.rank_of_set([4]) == 2
    assert r4_rep.rank_of_set([1, 4]) == 2
    assert r4_rep.rank_of_set([2, 4]) == 3
    with pytest.raises(PolymatroidError):
        r4_rep.rank_of_set([5])


def test_axioms_hold_for_representable(r4, r5):
    assert r4.validate_axioms().valid
    assert r5.validate_axioms().valid


@pytest.mark.parametrize(
    "ranks,axiom",
    [
        ([1, 1, 1, 2], Axiom.NORMALIZED),
        ([0, 2, 1, 1], Axiom.MONOTONE),
        ([0, 1, 1, 3], Axiom.SUBMODULAR),
    ],
)
def test_axiom_violations_reported(ranks, axiom):
    report = DiscretePolymatroid(2, ranks).validate_axioms()
    assert not report.valid
    assert axiom in {v.axiom for v in report.violations}


def test_rank_table_shape_checked():
    with pytest.raises(PolymatroidError):
        DiscretePolymatroid(2, [0, 1, 1])
    with pytest.raises(PolymatroidError):
        DiscretePolymatroid(2, [0, -1, 1, 1])


def test_r4_bases(r4):
    assert r4.bases() == [
        (0, 0, 1, 2),
        (0, 1, 0, 2),
        (0, 1, 1, 1),
        (1, 0, 1, 1),
        (1, 1, 0, 1),
        (1, 1, 1, 0),
    ]
    assert r4.rank_of() == 3


def test_r4_eligible_bases(r4):
    assert eligible_bases(r4) == [(0, 0, 1, 2), (0, 1, 0, 2), (1, 1, 1, 0)]


def test_r4_c_sets(r4):
    assert r4.c_set(1) == [(1, 0, 0, 2)]
    assert r4.c_set(2) == [(0, 1, 1, 2)]
    assert r4.c_set(3) == [(0, 1, 1, 2)]
    assert r4.c_set(4) == [(1, 1, 1, 1)]


def test_r4_excluded_at(r4):
    assert r4.excluded_at(1) == [
        (1, 0, 0, 2), (1, 0, 1, 2), (1, 1, 0, 2), (1, 1, 1, 1), (1, 1, 1, 2),
    ]  # fmt: skip
    assert r4.excluded_at(2) == [(0, 1, 1, 2), (1, 1, 0, 2), (1, 1, 1, 1), (1, 1, 1, 2)]
    assert r4.excluded_at(3) == [(0, 1, 1, 2), (1, 0, 1, 2), (1, 1, 1, 1), (1, 1, 1, 2)]
    assert r4.excluded_at(4) == [(1, 1, 1, 1)]


def test_r5_c_sets(r5):
    assert r5.c_set(1) == [(1, 0, 0, 2, 2), (1, 1, 1, 2, 0)]
    assert r5.c_set(2) == [(0, 1, 0, 2, 2), (2, 1, 0, 0, 2), (2, 1, 0, 2, 0)]
    assert r5.c_set(3) == [(0, 0, 1, 0, 2), (2, 0, 1, 2, 0)]
    assert r5.c_set(4) == [(2, 0, 0, 1, 2), (2, 1, 1, 1, 0)]
    assert r5.c_set(5) == [(0, 1, 1, 2, 1), (2, 0, 0, 2, 1), (2, 1, 1, 0, 1)]


def test_c_set_vectors_are_minimal_excluded(r5):
    for i in range(1, r5.r + 1):
        for u in r5.c_set(i):
            assert u[i - 1] == 1
            assert not r5.contains(u)
            below = list(u)
            below[i - 1] -= 1
            assert r5.contains(below)


def test_phi(r4):
    assert r4.phi((1, 1, 1, 0)) == 2
    assert r4.phi((0, 0, 1, 2)) == 1
    with pytest.raises(PolymatroidError):
        r4.phi((1, 0, 0, 0))


def test_rho_max(r4, r5, r4_rep, r5_rep):
    assert r4.rho_max() == 2
    assert r5.rho_max() == 2
    assert r4_rep.rho_max() == 2
    assert r5_rep.rho_max() == 2
    assert free_polymatroid(3).rho_max() == 1
    assert free_polymatroid(2, unit_rank=3).rho_max() == 3


def test_phi_undefined_on_full_support():
    d = free_polymatroid(3)
    with pytest.raises(PolymatroidError):
        d.phi((1, 1, 1))


def test_free_polymatroid():
    d = free_polymatroid(3, unit_rank=2)
    assert d.bases() == [(2, 2, 2)]
    assert all(d.c_set(i) == [] for i in range(1, 4))


def test_membership_on_a_large_ground_set():
    d = free_polymatroid(16)
    assert d.contains([1] * 16)
    assert not d.contains([2] + [0] * 15)
    assert not d.contains([1] * 15 + [2])


def test_membership_agrees_between_oracles(r4, r4_rep):
    bounds = r4.singleton_ranks()
    for u in itertools.product(*(range(b + 1) for b in bounds)):
        assert r4_rep.contains(u) == r4.contains(u) == r4.is_member(u)


def test_members_are_subvector_closed(r5):
    assert subvector_closure_violations(r5.members()) == []


def test_exchange_on_members(r4):
    assert validate_exchange(r4.members())


def test_exchange_failure():
    assert not validate_exchange([(0, 0), (1, 0), (0, 1), (2, 0)])


def test_member_budget():
    d = DiscretePolymatroid(3, [0, 2, 2, 4, 2, 4, 4, 6], PolymatroidConfig(member_budget=8))
    with pytest.raises(BudgetError) as exc:
        d.members()
    assert exc.value.required == 27


def test_representation_rows_checked():
    f = Field(2)
    with pytest.raises(PolymatroidError):
        Representation(f, 3, [Mat(f, [[1], [0]])])
    with pytest.raises(PolymatroidError):
        Representation(f, 2, [])


def test_change_of_basis_keeps_polymatroid(r5_rep):
    m = random_invertible(r5_rep.field, r5_rep.ambient, np.random.default_rng(3))
    assert polymatroid_of(r5_rep.transformed(m)) == polymatroid_of(r5_rep)


def test_restricted(r4_rep):
    d = polymatroid_of(r4_rep.restricted([4, 1]))
    assert list(d.table) == [0, 2, 1, 2]


def test_rank_cache_hits(r4_rep):
    polymatroid_of(r4_rep)
    polymatroid_of(r4_rep)
    assert r4_rep.cache_stats.hits > 0


def test_rank_table_serialisation(r4):
    assert DiscretePolymatroid.from_dict(r4.to_dict()) == r4


def test_excluded_vectors_complement_members(r4):
    members = set(r4.members())
    excluded = r4.excluded_vectors()
    assert len(members) + len(excluded) == 2 * 2 * 2 * 3
    assert not members & set(excluded)
    assert (1, 1, 1, 1) in excluded
    assert all(not r4.is_member(u) for u in excluded)


def test_restrict():
    assert restrict((3, 1, 4, 1), [4, 1]) == (3, 1)
    assert restrict((3, 1, 4, 1), []) == ()
    with pytest.raises(PolymatroidError):
        restrict((3, 1), [3])
