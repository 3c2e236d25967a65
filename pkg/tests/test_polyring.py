# tests/test_polyring.py

from fractions import Fraction

import pytest
import sympy

from core.backend.algebra.linalg import Scalar
from core.backend.algebra.polyring import (
    IdealPresentation,
    NotInIdeal,
    PolyRing,
    buchberger,
    hilbert_series,
    is_regular_sequence,
    lift_coefficients,
    monomials_of_degree,
    normal_form,
    standard_monomials,
)


def _to_sympy(p, symbols):
    expr = sympy.Integer(0)
    for exp, c in p.terms.items():
        f = c.to_fraction()
        term = sympy.Rational(f.numerator, f.denominator)
        for s, e in zip(symbols, exp):
            term *= s ** e
        expr += term
    return sympy.expand(expr)


@pytest.fixture
def xyz():
    return PolyRing.standard(["x", "y", "z"])


# ------------------ кольцо и разбор ------------------ #

def test_parse_and_arithmetic(xyz):
    p = xyz.parse("x*y - 2*z + 1/2")
    x, y, z = xyz.var("x"), xyz.var("y"), xyz.var("z")
    assert p == x * y - z * 2 + xyz.const(Fraction(1, 2))
    assert p.degree() == 2
    assert not p.is_homogeneous()


def test_parse_rejects_unknown_variable(xyz):
    with pytest.raises(ValueError):
        xyz.parse("x + q")


def test_parse_rejects_irrational_coefficient(xyz):
    with pytest.raises(ValueError):
        xyz.parse("sqrt(2)*x")


def test_duplicate_names_rejected():
    with pytest.raises(ValueError):
        PolyRing.standard(["x", "x"])


def test_zero_polynomial_degree(xyz):
    assert xyz.zero().degree() == -1


def test_diff_and_substitute(xyz):
    p = xyz.parse("x^2*y")
    assert p.diff(0) == xyz.parse("2*x*y")
    assert p.diff(2).is_zero()
    q = p.substitute({1: xyz.parse("z + 1")})
    assert q == xyz.parse("x^2*z + x^2")


def test_torus_weight_of_polynomial():
    ring = PolyRing.standard(["x", "w_x"], weights=[[1], [-1]])
    assert ring.parse("x*w_x").weight() == (0,)
    assert ring.parse("x + w_x").weight() is None
    assert ring.zero().weight() == (0,)


def test_weighted_degrees_enumerate_monomials():
    ring = PolyRing.standard(["x", "y"], degrees=[1, 2])
    assert monomials_of_degree(ring, 2) == [(2, 0), (0, 1)]
    assert monomials_of_degree(ring, -1) == []
    assert len(monomials_of_degree(PolyRing.standard(["x", "y"]), 2)) == 3


# ------------------ базисы Грёбнера ------------------ #

def test_normal_form_reduces_by_leading_term(xyz):
    ideal = IdealPresentation.of(xyz, ["x^2 - y"])
    assert normal_form(xyz.parse("x^3"), ideal.groebner()) == xyz.parse("x*y")


@pytest.mark.parametrize(
    "gens",
    [
        ["x^2 - y*z", "x*y - z^2"],
        ["x*y", "y*z", "x*z"],
        ["x^2 + y^2 + z^2", "x*y*z", "x - y"],
    ],
)
def test_groebner_matches_sympy(xyz, gens):
    ideal = IdealPresentation.of(xyz, gens)
    gb = buchberger(ideal)
    syms = sympy.symbols("x y z")
    oracle = sympy.groebner([sympy.sympify(g.replace("^", "**")) for g in gens], *syms, order="grlex")

    # одинаковые идеалы: каждый элемент одного базиса лежит в другом
    for g in gb:
        assert oracle.contains(_to_sympy(g, syms))
    for g in oracle.exprs:
        assert ideal.contains(xyz.parse(str(g)))
    assert len(gb) == len(oracle.exprs)


def test_groebner_is_reduced(xyz):
    ideal = IdealPresentation.of(xyz, ["x^2 - y*z", "x*y - z^2"])
    gb = ideal.groebner()
    leads = [g.leading("grlex") for g in gb]
    for e, c in leads:
        assert c == Scalar(1)
    for i, (a, _) in enumerate(leads):
        for j, (b, _) in enumerate(leads):
            if i != j:
                assert not all(x <= y for x, y in zip(a, b))


def test_unit_ideal(xyz):
    assert IdealPresentation.of(xyz, ["x", "x + 1"]).is_unit()
    assert not IdealPresentation.of(xyz, ["x", "y"]).is_unit()


def test_standard_monomials(xyz):
    ring = PolyRing.standard(["x", "y"])
    ideal = IdealPresentation.of(ring, ["x^2", "y"])
    assert standard_monomials(ideal, 1) == [(1, 0)]
    assert standard_monomials(ideal, 2) == []


# ------------------ ряды Гильберта и регулярность ------------------ #

def test_hilbert_series_of_hypersurface():
    ring = PolyRing.standard(["x", "y"])
    data = hilbert_series(IdealPresentation.of(ring, ["x*y"]))
    assert data.numerator == (1, 0, -1)
    assert data.hilbert_function(3) == [1, 2, 2, 2]


def test_hilbert_series_weighted():
    ring = PolyRing.standard(["x", "y"], degrees=[1, 2])
    data = hilbert_series(IdealPresentation.of(ring, ["y"]))
    assert data.hilbert_function(3) == [1, 1, 1, 1]


def test_hilbert_rejects_inhomogeneous(xyz):
    with pytest.raises(ValueError):
        hilbert_series(IdealPresentation.of(xyz, ["x^2 - y"]))


def test_regular_sequence(xyz):
    cert = is_regular_sequence([xyz.parse("x"), xyz.parse("y^2")], xyz)
    assert cert
    assert cert.degrees == (1, 2)


def test_zero_divisor_is_not_regular(xyz):
    cert = is_regular_sequence([xyz.parse("x*y"), xyz.parse("x*z")], xyz)
    assert not cert
    assert cert.actual_numerator != cert.expected_numerator


def test_constant_is_not_regular(xyz):
    assert not is_regular_sequence([xyz.one()], xyz)


# ------------------ разложение по образующим ------------------ #

def test_lift_coefficients_recombine(xyz):
    gens = [xyz.parse("x*y"), xyz.parse("y*z")]
    a = xyz.parse("x*y*z + y*z^2")
    coeffs = lift_coefficients(a, gens)
    total = xyz.zero()
    for c, g in zip(coeffs, gens):
        total = total + c * g
    assert total == a


def test_lift_outside_ideal(xyz):
    with pytest.raises(NotInIdeal):
        lift_coefficients(xyz.parse("x"), [xyz.parse("x*y"), xyz.parse("y*z")])
