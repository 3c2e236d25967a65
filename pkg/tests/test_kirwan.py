# tests/test_kirwan.py

from fractions import Fraction

import pytest

from core.backend.algebra.linalg import PoincareSeries, series_truncate
from core.backend.geometry.kirwan import (
    CertificateFailed,
    HKKNStratum,
    TorusRepresentation,
    atiyah_bott_certificate,
    cone_projection,
    cotangent_representation,
    cotangent_weights,
    hkkn_stratification,
    kkt_holds,
    known_semistable_series,
    morse_equality_check,
    optimal_destabilizer,
    primitive,
    semistable_locus,
    stratum_poincare_series,
)

F = Fraction


def _rep(weights, chi, names=()):
    return TorusRepresentation(len(chi), tuple(tuple(w) for w in weights), tuple(chi), tuple(names))


P1 = _rep([[1], [1]], [1])
C2 = _rep([[1], [-1]], [1], ["z_1", "z_2"])
PLANE = _rep([[1, 0], [0, 1]], [1, 1])


# ------------------ проекция на конус ------------------ #

@pytest.mark.parametrize(
    "target, cone, expected",
    [
        ((-1, -1), [(1, 0)], (0, -1)),
        ((-1, -1), [(1, 0), (0, 1)], (0, 0)),
        ((2, -1), [(1, 0)], (2, -1)),
        ((-1,), [], (-1,)),
        ((-2, 0), [(1, 1)], (-1, 1)),
    ],
)
def test_cone_projection(target, cone, expected):
    got = cone_projection(target, cone)
    assert got == tuple(F(x) for x in expected)
    assert kkt_holds(target, cone, got)


def test_kkt_rejects_wrong_point():
    assert not kkt_holds((-1, -1), [(1, 0)], (0, 0))
    assert not kkt_holds((-1, -1), [(1, 0)], (-1, -1))


def test_primitive_direction():
    assert primitive((F(-1, 2), F(-1, 2))) == (-1, -1)
    assert primitive((F(0), F(-3))) == (0, -1)
    assert primitive((F(0),)) == (0,)


def test_optimal_destabilizer():
    assert optimal_destabilizer(P1, []) == (F(-1),)
    assert optimal_destabilizer(P1, [0]) == (F(0),)
    assert optimal_destabilizer(C2, [1]) == (F(-1),)
    assert optimal_destabilizer(PLANE, [0]) == (F(0), F(-1))


# ------------------ представления ------------------ #

def test_representation_validation():
    with pytest.raises(ValueError):
        _rep([[1, 0]], [1])
    with pytest.raises(ValueError):
        _rep([[1]], [1], ["a", "b"])


def test_cotangent_weights_and_names():
    assert cotangent_weights([[1], [-1]]) == ((1,), (-1,), (-1,), (1,))
    cot = cotangent_representation(C2)
    assert cot.names == ("z_1", "z_2", "w_1", "w_2")
    assert cotangent_representation(P1).names == ()


# ------------------ полустабильные точки ------------------ #

def test_semistable_loci():
    assert semistable_locus(P1).description == "{x1 ≠ 0} ∪ {x2 ≠ 0}"
    assert semistable_locus(C2).description == "{z_1 ≠ 0}"
    assert semistable_locus(PLANE).description == "{x1·x2 ≠ 0}"
    assert semistable_locus(cotangent_representation(C2)).description == "{z_1 ≠ 0} ∪ {w_2 ≠ 0}"


def test_trivial_character_and_empty_locus():
    everything = semistable_locus(_rep([[1], [1]], [0]))
    assert everything.everything
    assert everything.description == "everything"
    empty = semistable_locus(_rep([[-1]], [1]))
    assert empty.empty
    assert empty.description == "∅"


def test_locus_invariant_under_scaling_chi():
    for rep in (P1, C2, PLANE):
        assert semistable_locus(rep.scaled(3)) == semistable_locus(rep)
        assert [s.direction for s in hkkn_stratification(rep.scaled(2))] == \
            [s.direction for s in hkkn_stratification(rep)]


# ------------------ стратификация ------------------ #

def test_strata_of_projective_line():
    (st,) = hkkn_stratification(P1)
    assert st.direction == (-1,)
    assert st.normal_indices == (0, 1)
    assert st.r_beta == 2
    assert st.supports == ((),)


def test_strata_of_c2_weights():
    (st,) = hkkn_stratification(C2)
    assert st.direction == (-1,)
    assert st.z_indices == ()
    assert st.normal_indices == (0,)
    assert st.supports == ((), (1,))


def test_strata_of_plane():
    strata = hkkn_stratification(PLANE)
    assert [s.direction for s in strata] == [(-1, -1), (-1, 0), (0, -1)]
    series = {s.direction: series_truncate(stratum_poincare_series(PLANE, s), 4) for s in strata}
    assert series[(-1, -1)] == [1, 0, 2, 0, 3]
    assert series[(0, -1)] == [1, 0, 1, 0, 1]


def test_no_strata_for_trivial_character():
    assert hkkn_stratification(_rep([[1], [-1]], [0])) == []


# ------------------ равенство Морса ------------------ #

@pytest.mark.parametrize(
    "rep, residual",
    [
        (P1, [1, 0, 1, 0, 0, 0, 0]),
        (C2, [1, 0, 0, 0, 0, 0, 0]),
        (PLANE, [1, 0, 0, 0, 0, 0, 0]),
        (cotangent_representation(C2), [1, 0, 1, 0, 0, 0, 0]),
        (_rep([[1], [-1]], [0]), [1, 0, 1, 0, 1, 0, 1]),
    ],
)
def test_morse_equality(rep, residual):
    report = morse_equality_check(rep, 6)
    assert report.residual == residual
    assert report.nonnegative
    assert report.matches_known is True
    assert report.ok


def test_known_series_for_weighted_line():
    series = known_semistable_series(_rep([[1], [2], [-1]], [1]))
    assert series_truncate(series, 4) == [1, 0, 1, 0, 0]
    assert known_semistable_series(_rep([[1, 1]], [1, 0])) is None
    assert known_semistable_series(PLANE.scaled(0)) == PoincareSeries.torus_point(2)


# ------------------ сертификаты ------------------ #

def test_atiyah_bott_on_every_stratum():
    for rep in (P1, C2, PLANE, cotangent_representation(C2)):
        for st in hkkn_stratification(rep):
            cert = atiyah_bott_certificate(rep, st, orders=(1, 2))
            assert cert.ok
            assert cert.local_system_orders == (1, 2)
            assert all(p < 0 for _, p in cert.normal_pairings)


def test_vacuous_certificate_without_unstable_points():
    cert = atiyah_bott_certificate(_rep([[1]], [0]), None)
    assert cert.vacuous
    assert cert.ok


def test_certificate_fails_on_positive_normal_pairing():
    fake = HKKNStratum(beta=(F(-1),), direction=(-1,), z_indices=(), normal_indices=(0, 1))
    with pytest.raises(CertificateFailed):
        atiyah_bott_certificate(C2, fake)


def test_certificate_fails_when_beta_moves_fixed_part():
    fake = HKKNStratum(beta=(F(-1),), direction=(-1,), z_indices=(1,), normal_indices=(0,))
    with pytest.raises(CertificateFailed):
        atiyah_bott_certificate(C2, fake)


def test_certificate_rederives_normal_directions():
    fake = HKKNStratum(beta=(F(-1),), direction=(-1,), z_indices=(), normal_indices=(0,), supports=((),))
    with pytest.raises(CertificateFailed):
        atiyah_bott_certificate(P1, fake)
