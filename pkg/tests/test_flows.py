import pytest

import sullivan.flows as flows_module
from sullivan.diagram import Diagram, fan_length, is_fan_chamber
from sullivan.flows import (
    DegenTuple,
    classify,
    degeneracy,
    fan_profile,
    fence_length,
    fence_profile,
)
from sullivan.models import CellStatus, Flavor
from sullivan.operations import class_zeta

# Genus-1 cell of SD_1^1 whose second surface ends with a fence of length 1
FENCE_CELL = ("(0)(1)(2)", [(0, 0, "(0)"), (0, 0, "(1),(2)")])


@pytest.fixture
def fence_cell() -> Diagram:
    return Diagram.build(Flavor.UNPAR_UNEN, *FENCE_CELL)


@pytest.fixture
def sigma() -> Diagram:
    return Diagram.build(Flavor.UNPAR_UNEN, "(0)(1)", [(0, 0, "(0)"), (0, 1, "(1)")])


# --- Fans and fences ---


@pytest.mark.parametrize("m", [2, 3, 4])
def test_zeta_is_one_fan(m):
    d = class_zeta(m)
    assert fan_profile(d) == [(0, m)]
    assert degeneracy(d) == DegenTuple(m - 1, 1, 0, -m, 0, 0)


def test_parametrized_fan_chambers():
    d = class_zeta(2, Flavor.PAR_ENUM)
    assert is_fan_chamber(d, 0) and is_fan_chamber(d, 1)
    assert fan_length(d, 0) == 2


def test_fence_of_length_one(fence_cell):
    assert fan_profile(fence_cell) == [(0, 0), (1, 0)]
    assert fence_length(fence_cell, 1) == 1
    assert fence_profile(fence_cell) == [(2, 1)]
    assert degeneracy(fence_cell).as_tuple() == (2, 2, 0, 0, 0, -1)


def test_surface_at_zero_has_no_fence(two_surface_diagram):
    assert fence_length(two_surface_diagram, 0) == 0
    assert fence_length(two_surface_diagram, 1) == 0


def test_degeneracy_order_is_lexicographic():
    assert DegenTuple(1, 1, 0, -2) < DegenTuple(1, 1, 1, -5)
    assert DegenTuple(1, 2, 0, 0) > DegenTuple(1, 1, 3, 0)


# --- Classification ---


def test_even_fan_without_punctures_is_essential(zeta2):
    assert classify(zeta2).is_essential


def test_odd_fan_is_collapsible():
    result = classify(class_zeta(3))
    assert result.status is CellStatus.COLLAPSIBLE
    assert (result.kind, result.index) == (0, 0)


def test_puncture_behind_even_fan_is_redundant(sigma):
    result = classify(sigma)
    assert result.status is CellStatus.REDUNDANT
    assert (result.kind, result.index) == (0, 1)


def test_suspension_collapses_onto_its_punctured_face(eta2):
    result = classify(eta2)
    assert result.status is CellStatus.COLLAPSIBLE
    assert result.index == 1


def test_degree_zero_cells_are_essential():
    d = Diagram.build(Flavor.UNPAR_UNEN, "(0)", [(0, 1, "(0)")])
    assert classify(d).is_essential


def test_odd_fence_is_collapsible(fence_cell):
    result = classify(fence_cell)
    assert result.status is CellStatus.COLLAPSIBLE
    assert (result.kind, result.index) == (1, 1)


def test_type_zero_takes_precedence(two_surface_diagram):
    result = classify(two_surface_diagram)
    assert result.status is CellStatus.REDUNDANT
    assert (result.kind, result.index) == (0, 0)


def test_enumerated_cells_use_the_sentence_flow(monkeypatch):
    seen = []
    real = flows_module.sentence

    def spy(d):
        seen.append(d)
        return real(d)

    monkeypatch.setattr(flows_module, "sentence", spy)
    d = class_zeta(2, Flavor.UNPAR_ENUM)
    classify(d)
    assert seen == [d]
