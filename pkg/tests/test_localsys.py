# tests/test_localsys.py

import pytest

from core.backend.geometry.localsys import (
    MonodromyData,
    NotACocycle,
    OrderMismatch,
    SimplicialModel,
    covering_decomposition_check,
    cyclic_cover,
    euler_characteristic,
    gauge_transform,
    grid_torus,
    point,
    seam_monodromy,
    triangle_circle,
    twisted_cohomology,
)


def _circle_monodromy(order, exponent=1):
    return MonodromyData(order, {(0, 2): exponent})


# ------------------ комплексы ------------------ #

def test_models_and_euler_characteristic():
    assert euler_characteristic(point()) == 1
    assert euler_characteristic(triangle_circle()) == 0
    torus = grid_torus(3)
    assert (torus.count(0), torus.count(1), torus.count(2)) == (9, 27, 18)
    assert euler_characteristic(torus) == 0
    torus.check()


def test_degenerate_simplex_rejected():
    with pytest.raises(ValueError):
        SimplicialModel.from_facets([(0, 0, 1)])


def test_small_torus_grid_rejected():
    with pytest.raises(ValueError):
        grid_torus(2)


# ------------------ монодромия ------------------ #

def test_monodromy_exponents():
    lsys = MonodromyData(4, {(0, 1): 1})
    assert lsys.exponent(1, 0) == 3
    assert lsys.exponent(1, 2) == 0
    assert MonodromyData(6, {(0, 1): 2}).exact_order() == 3
    assert MonodromyData(6, {(0, 1): 2}).power(3).exact_order() == 1


def test_filled_triangle_needs_cocycle():
    disk = SimplicialModel.from_facets([(0, 1, 2)])
    with pytest.raises(NotACocycle):
        twisted_cohomology(disk, MonodromyData(2, {(0, 1): 1}))


def test_seam_monodromy_is_cocycle():
    assert twisted_cohomology(grid_torus(4), seam_monodromy(4, 3)) == {0: 0, 1: 0, 2: 0}


# ------------------ когомологии ------------------ #

def test_point_cohomology():
    assert twisted_cohomology(point(), MonodromyData.trivial()) == {0: 1}


def test_circle_trivial_and_twisted():
    circle = triangle_circle()
    assert twisted_cohomology(circle, MonodromyData.trivial()) == {0: 1, 1: 1}
    assert twisted_cohomology(circle, _circle_monodromy(2)) == {0: 0, 1: 0}


def test_torus_trivial_and_twisted():
    torus = grid_torus(3)
    assert twisted_cohomology(torus, MonodromyData.trivial()) == {0: 1, 1: 2, 2: 1}
    assert twisted_cohomology(torus, seam_monodromy(3, 2)) == {0: 0, 1: 0, 2: 0}


def test_gauge_transform_preserves_cohomology():
    torus = grid_torus(3)
    lsys = seam_monodromy(3, 2)
    moved = gauge_transform(torus, lsys, {0: 1, 4: 1})
    assert moved.exponents != lsys.exponents
    assert twisted_cohomology(torus, moved) == twisted_cohomology(torus, lsys)


# ------------------ накрытия ------------------ #

def test_cyclic_cover_of_circle_is_circle():
    cover = cyclic_cover(triangle_circle(), _circle_monodromy(3), 3)
    assert cover.vertex_count == 9
    assert cover.count(1) == 9
    assert twisted_cohomology(cover, MonodromyData.trivial()) == {0: 1, 1: 1}


def test_cover_of_trivial_system_is_disconnected():
    cover = cyclic_cover(triangle_circle(), MonodromyData.trivial(), 2)
    assert twisted_cohomology(cover, MonodromyData.trivial()) == {0: 2, 1: 2}


@pytest.mark.parametrize("n", [2, 4])
def test_circle_covering_decomposition(n):
    report = covering_decomposition_check(triangle_circle(), _circle_monodromy(2), n)
    assert report.ok
    assert report.cover_dims == report.summed
    assert report.euler_cover == n * report.euler_base


def test_torus_covering_decomposition():
    report = covering_decomposition_check(grid_torus(3), seam_monodromy(3, 2), 2)
    assert report.ok
    assert report.cover_dims == {0: 1, 1: 2, 2: 1}
    assert report.summands[1] == {0: 0, 1: 0, 2: 0}


def test_cover_order_must_divide():
    with pytest.raises(OrderMismatch):
        cyclic_cover(triangle_circle(), _circle_monodromy(4), 2)
