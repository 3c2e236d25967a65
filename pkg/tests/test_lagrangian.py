# tests/test_lagrangian.py

from dataclasses import replace
from fractions import Fraction

import pytest

from core.backend.algebra.koszul import Window
from core.backend.geometry.lagrangian import (
    Character,
    DegenerateHessian,
    IntersectionNotClean,
    LagrangianDescriptor,
    NonConstantMoment,
    NotClosedForm,
    NotIsotropic,
    OddCanonicalCharacter,
    SymplecticModel,
    UnsupportedScenario,
    WrongDimension,
    build_scenario,
    canonical_char_check,
    closed_form_ext_dims,
    compare_with_oracle,
    duality_ext_from_tor,
    equivariant_ext_dims,
    half_canonical,
    hessian_torsion_check,
    moment_value,
    validate_lagrangian,
)

ZERO = LagrangianDescriptor("zero_section")


def _graph(potential):
    return LagrangianDescriptor("graph", potential=potential)


@pytest.fixture
def line():
    return SymplecticModel.cotangent(["x"])


@pytest.fixture
def weighted_plane():
    return SymplecticModel.cotangent(["x", "y"], base_weights=[[1], [-1]])


# ------------------ модель и характеры ------------------ #

def test_cotangent_model_pairs_and_weights(weighted_plane):
    ring = weighted_plane.ring
    assert weighted_plane.pairs == (("x", "w_x"), ("y", "w_y"))
    assert ring.weights[ring.index("w_x")] == (-1,)
    assert weighted_plane.omega == Character(2, (0,))


def test_moment_polynomial(weighted_plane):
    (mu,) = weighted_plane.moment_polynomials()
    assert mu == weighted_plane.ring.parse("x*w_x - y*w_y")


def test_poisson_bracket_of_darboux_pair(line):
    ring = line.ring
    assert line.poisson(ring.var("x"), ring.var("w_x")) == ring.one()


def test_character_arithmetic():
    a = Character(2, (4, -2))
    assert (a - a).is_zero()
    assert a.half() == Character(1, (2, -1))
    assert half_canonical(a) == a.half()
    assert a.scale(3).as_text() == "(6; 12, -6)"


def test_odd_character_has_no_square_root():
    with pytest.raises(OddCanonicalCharacter):
        half_canonical(Character(1))


# ------------------ лагранжианы ------------------ #

def test_zero_section_is_lagrangian(line):
    v = validate_lagrangian(line, ZERO)
    assert v.dim == 1
    assert v.ideal.generators == (line.ring.var("w_x"),)


def test_graph_of_closed_form(weighted_plane):
    v = validate_lagrangian(weighted_plane, _graph("x*y"))
    ring = weighted_plane.ring
    assert set(v.ideal.generators) == {ring.parse("w_x - y"), ring.parse("w_y - x")}


def test_nonclosed_form_rejected():
    model = SymplecticModel.cotangent(["x", "y"])
    with pytest.raises(NotClosedForm):
        validate_lagrangian(model, LagrangianDescriptor("graph", components=("y", "-x")))


def test_non_isotropic_plane_rejected():
    model = SymplecticModel.cotangent(["x", "y"])
    lag = LagrangianDescriptor("linear", basis=((("x", Fraction(1)),), (("w_x", Fraction(1)),)))
    with pytest.raises(NotIsotropic):
        validate_lagrangian(model, lag)


def test_point_is_not_lagrangian(line):
    with pytest.raises(WrongDimension):
        validate_lagrangian(line, LagrangianDescriptor("linear"))


def test_moment_value_on_invariant_lagrangians(weighted_plane):
    assert moment_value(weighted_plane, ZERO) == (Fraction(0),)
    conormal = LagrangianDescriptor("conormal", vanishing=("x",))
    assert moment_value(weighted_plane, conormal) == (Fraction(0),)


def test_moment_not_constant_on_noninvariant_graph():
    model = SymplecticModel.cotangent(["x"], base_weights=[[1]])
    with pytest.raises(NonConstantMoment):
        moment_value(model, _graph("x**2"))


# ------------------ сценарии ------------------ #

def test_zero_section_against_itself(line):
    s = build_scenario(line, ZERO, ZERO)
    assert s.dim_b == 1
    assert s.m == 0
    assert s.excess_rank == 1
    assert s.free_coords == ("x",)
    assert compare_with_oracle(s, Window(2, 4)).ok


def test_transverse_graph(line):
    s = build_scenario(line, ZERO, _graph("x**2"))
    assert s.dim_b == 0
    assert s.m == 1
    report = compare_with_oracle(s, Window(2, 4))
    assert report.ok
    assert {"closed_form_ext_c2", "closed_form_ext_c1"} <= {c.name for c in report.checks}

    cert = hessian_torsion_check(s)
    assert cert.rank == cert.codim == 1
    assert cert.det_normal_squared == Character(-2)
    assert cert.hessian_character == Character(2)


def test_morse_bott_potential_on_plane():
    plane = SymplecticModel.cotangent(["x", "y"])
    s = build_scenario(plane, ZERO, _graph("x**2"))
    assert (s.dim_b, s.m, s.excess_rank) == (1, 1, 1)
    assert s.free_coords == ("y",)
    assert compare_with_oracle(s, Window(2, 4)).ok

    ext = closed_form_ext_dims(s, Window(2, 4))
    assert ext.table.row(0) == [0, 0, 0, 0, 0]
    assert ext.table.row(1) == [0, 1, 1, 1, 1]
    assert ext.table.row(2) == [1, 1, 1, 1, 1]

    cert = hessian_torsion_check(s)
    assert (cert.rank, cert.codim) == (1, 1)


def test_hessian_of_saddle(weighted_plane):
    s = build_scenario(weighted_plane, ZERO, _graph("x*y"))
    cert = hessian_torsion_check(s)
    assert (cert.rank, cert.codim) == (2, 2)
    assert cert.det_normal_squared == Character(-4, (0,))
    assert cert.hessian_character == Character(4, (0,))


def test_hessian_rank_is_checked_over_whole_intersection():
    plane = SymplecticModel.cotangent(["x", "y"])
    s = build_scenario(plane, ZERO, _graph("x**2"))
    # тот же B, но с заявленной коразмерностью 2: миноры порядка 2 все нулевые
    pretend_point = replace(s, dim_b=0, free_coords=())
    with pytest.raises(DegenerateHessian):
        hessian_torsion_check(pretend_point)


def test_transverse_conormal_pair(weighted_plane):
    s = build_scenario(
        weighted_plane,
        LagrangianDescriptor("conormal", vanishing=("x",)),
        LagrangianDescriptor("conormal", vanishing=("y",)),
    )
    assert (s.dim_b, s.m, s.excess_rank) == (0, 2, 0)
    assert s.det_n_b_c2 == Character(-2, (-2,))

    report = compare_with_oracle(s, Window(6, 6))
    checks = {c.name: c for c in report.checks}
    assert checks["tate_vs_sym_two_term"].ok
    assert checks["equivariant_ext_vs_point"].ok
    assert report.ok

    closed = closed_form_ext_dims(s, Window(3, 4))
    assert closed.per_total_degree() == {0: 0, 1: 0, 2: 1, 3: 0}
    assert closed.table.get(2, -2) == 1

    totals = equivariant_ext_dims(s, Window(6, 10)).per_total_degree()
    assert all(v == 0 for v in totals.values())


def test_cubic_potential_is_not_clean():
    model = SymplecticModel.cotangent(["x"], fiber_degrees=[2])
    with pytest.raises(IntersectionNotClean):
        build_scenario(model, ZERO, _graph("x**3"))


def test_closed_form_agrees_with_duality_in_both_orientations(weighted_plane):
    s = build_scenario(weighted_plane, ZERO, LagrangianDescriptor("conormal", vanishing=("x",)))
    w = Window(3, 6)
    for orientation in ("c2", "c1"):
        closed = closed_form_ext_dims(s, w, orientation)
        dual = duality_ext_from_tor(s, w, orientation)
        assert closed.table.mismatches(dual.table) == []
    assert closed_form_ext_dims(s, w).m == 1


def test_conormal_moment_scenario(weighted_plane):
    s = build_scenario(weighted_plane, ZERO, LagrangianDescriptor("conormal", vanishing=("x",)))
    assert s.moment == (Fraction(0),)
    assert s.dim_b == 1
    assert s.reduced_dimension == 0
    report = compare_with_oracle(s, Window(6, 8))
    names = {c.name: c.ok for c in report.checks}
    assert names["tate_vs_sym_two_term"]
    assert report.ok


def test_canonical_identity(weighted_plane):
    s = build_scenario(weighted_plane, ZERO, LagrangianDescriptor("conormal", vanishing=("x",)))
    cert = canonical_char_check(s)
    assert cert.ok
    assert [name for name, _ in cert.summands] == ["K_C1^v", "K_C2", "det N_B/C2 ^2", "omega^m"]


def test_equivariant_ext_of_point(weighted_plane):
    s = build_scenario(weighted_plane, ZERO, _graph("x*y"))
    assert s.dim_b == 0 and s.m == 2
    ext = equivariant_ext_dims(s, Window(9, 10))
    totals = ext.per_total_degree()
    assert [totals[n] for n in range(10)] == [0, 0, 1, 0, 1, 0, 1, 0, 1, 0]


def test_point_oracle_does_not_depend_on_internal_window(weighted_plane):
    s = build_scenario(weighted_plane, ZERO, _graph("x*y"))
    narrow = equivariant_ext_dims(s, Window(9, 4)).per_total_degree()
    assert narrow[6] == 0
    for window in (Window(9, 4), Window(9, 10)):
        checks = {c.name: c for c in compare_with_oracle(s, window).checks}
        assert checks["equivariant_ext_vs_point"].ok


def test_equivariant_self_intersection_keeps_invariants(weighted_plane):
    s = build_scenario(weighted_plane, ZERO, ZERO)
    ext = equivariant_ext_dims(s, Window(1, 6))
    assert ext.twist.is_zero()
    assert ext.table.row(0) == [0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1]


def test_canonical_identity_without_omega_term(weighted_plane):
    s = build_scenario(weighted_plane, ZERO, ZERO)
    cert = canonical_char_check(s)
    assert s.m == 0
    assert [name for name, _ in cert.summands] == ["K_C1^v", "K_C2", "det N_B/C2 ^2"]


def test_spin_twist_needs_even_canonical(line):
    with pytest.raises(OddCanonicalCharacter):
        build_scenario(line, ZERO, ZERO, spin=True)


def test_spin_twist_on_plane():
    model = SymplecticModel.cotangent(["x", "y"])
    s = build_scenario(model, ZERO, ZERO, spin=True)
    assert s.f1 == half_canonical(s.k_c1)
    assert s.twist.is_zero()


def test_nonzero_level_unsupported(weighted_plane):
    with pytest.raises(UnsupportedScenario):
        build_scenario(weighted_plane, ZERO, ZERO, level=[Fraction(1)])


def test_zero_level_accepted(weighted_plane):
    s = build_scenario(weighted_plane, ZERO, ZERO, level=[0])
    assert s.moment == (Fraction(0),)
