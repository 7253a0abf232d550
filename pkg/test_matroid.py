"""Tests for matroids and their polymatroid embedding."""

import pytest

from fnc_polymatroid.errors import PolymatroidError
from fnc_polymatroid.matroid import Matroid
from fnc_polymatroid.models import MatroidAxiom
from fnc_polymatroid.polymatroid import polymatroid_of


def test_uniform_is_valid():
    m = Matroid.uniform(2, 3)
    assert m.validate().valid
    assert m.rank([1, 2, 3]) == 2
    assert m.rank([3]) == 1
    assert m.bases() == [[1, 2], [1, 3], [2, 3]]


def test_column_matroid(u23_rep):
    assert Matroid.from_representation(u23_rep) == Matroid.uniform(2, 3)


def test_column_matroid_needs_single_columns(r4_rep):
    with pytest.raises(PolymatroidError):
        Matroid.from_representation(r4_rep)


def test_embedding_matches_representation(u23_rep):
    assert Matroid.uniform(2, 3).to_polymatroid() == polymatroid_of(u23_rep)


def test_embedding_bases_are_indicators():
    d = Matroid.uniform(2, 3).to_polymatroid()
    assert d.bases() == [(0, 1, 1), (1, 0, 1), (1, 1, 0)]


def test_missing_empty_set():
    report = Matroid.from_sets(2, [[1]]).validate()
    assert MatroidAxiom.EMPTY in {v.axiom for v in report.violations}


def test_not_hereditary():
    report = Matroid.from_sets(2, [[], [1, 2], [2]]).validate()
    assert not report.valid
    assert [v.axiom for v in report.violations] == [MatroidAxiom.HEREDITARY]
    assert report.violations[0].sets == [[1, 2], [1]]


def test_augmentation_fails():
    m = Matroid.from_sets(3, [[], [1], [2], [3], [1, 2]])
    report = m.validate()
    assert [v.axiom for v in report.violations] == [MatroidAxiom.AUGMENTATION]
    assert report.violations[0].sets == [[1, 2], [3]]


def test_masks_outside_ground_set():
    with pytest.raises(PolymatroidError):
        Matroid(2, [0, 4])


def test_free_matroid():
    m = Matroid.free(3)
    assert m.validate().valid
    assert m.bases() == [[1, 2, 3]]
