import pytest

import orbit_space
from errors import ConfigurationError
from orbit_space import Cell, OrbitSpaceModel
from sectors import Character


def test_cell_labels():
    assert Cell(0.0, 0.0).label() == "{0}"
    assert Cell(0.0, 1.0, include_lo=False, include_hi=False).label() == "(0, 1)"
    assert Cell(0.0, 1.0, include_hi=False).label() == "[0, 1)"


def test_point_touches_open_interval():
    assert Cell(0.0, 0.0).touches(Cell(0.0, 1.0, include_lo=False))
    assert not Cell(0.0, 0.5).touches(Cell(0.7, 1.0))


def test_empty_model_rejected():
    with pytest.raises(ConfigurationError):
        OrbitSpaceModel((), {})


def test_interval_with_fixed_points():
    characters = [Character.of(k) for k in range(-2, 3)]
    model = orbit_space.interval(0.0, 1.0, characters, include_ends=True)
    assert model.describe() == ["{0}", "(0, 1)", "{1}"]
    assert model.support(Character.of(0)) == model.full
    assert model.support(Character.of(1)) == frozenset({1})
    assert not model.is_clopen(model.support(Character.of(1)))
    assert model.is_clopen(model.full)


def test_interior_only_selector():
    characters = [Character.of(k) for k in range(-2, 3)]
    model = orbit_space.interval(0.0, 1.0, characters, include_ends=True, interior_only=lambda chi: chi.k[0] > 1)
    assert model.support(Character.of(1)) == model.full
    assert model.support(Character.of(2)) == frozenset({1})


def test_punctured_interval_and_circle_are_connected_single_cells():
    punctured = orbit_space.interval(0.0, 1.0, [Character.of(1)], include_ends=False)
    assert punctured.is_clopen(punctured.support(Character.of(1)))
    circle = orbit_space.circle()
    assert circle.adjacent_pairs() == []
    assert circle.is_clopen(circle.support(Character.of(3)))


def test_periodic_gluing_adds_wrap_pair():
    cells = (Cell(0.0, 0.5, include_hi=False), Cell(0.5, 1.0, include_hi=False))
    model = OrbitSpaceModel(cells, {Character.of(1): frozenset({0})}, periodic=True)
    assert (0, 1) in model.adjacent_pairs()
    assert not model.is_clopen(model.support(Character.of(1)))
