import random

import pytest
from hypothesis import given, settings, strategies as st

from campana_toric.campana import INF, CampanaOrbifold, ContactOrderSet, scrc_check
from campana_toric.fan import (
    classify_cone,
    hirzebruch,
    p11p,
    product_of_lines,
    projective_space,
    star_subdivide,
)
from campana_toric.samples import random_surface_fan
from campana_toric.witness import (
    NotRefinementError,
    Status,
    crit_sing,
    crit_sing_via_blowdown,
    decide,
    qualifying_smooth_cones,
    witness_smooth,
    witness_surface,
    wps_repair,
    wps_verdict,
)
from campana_toric.wps import recover_weights, wps_fan

absolute = CampanaOrbifold.absolute


def coeffs(v, n):
    return v.witness.coefficients(n)


def assert_sound(v, orb, p):
    if v.status is Status.CERTIFIED:
        assert v.witness is not None
        assert scrc_check(v.witness, orb, p) == v.certificate
        assert v.certificate.certified
    else:
        assert v.witness is None


# --- witness_smooth --------------------------------------------------------


def test_witness_smooth_p2():
    v = witness_smooth(absolute(projective_space(2)), 2)
    assert v.certified and coeffs(v, 3) == (1, 1, 1)
    assert v.certificate.good_contact_orders


def test_witness_smooth_finite_multiplicities():
    orb = CampanaOrbifold(projective_space(2), (3, 3, 3))
    v = witness_smooth(orb, 2)
    c = coeffs(v, 3)
    assert v.certified and all(x >= 3 and x % 2 == 1 for x in c)


def test_witness_smooth_precondition_fails_on_p11p():
    for p in (2, 3, 5):
        assert qualifying_smooth_cones(p11p(p), p) == []
        v = witness_smooth(absolute(p11p(p)), p)
        assert v.status is Status.INCONCLUSIVE and v.reason == "smooth:precondition"


@pytest.mark.parametrize(
    "fan",
    [projective_space(n) for n in (1, 2, 3, 4)]
    + [hirzebruch(a) for a in range(6)]
    + [product_of_lines(3)],
)
@pytest.mark.parametrize("p", [2, 3, 5])
def test_witness_smooth_smooth_fans(fan, p):
    orb = absolute(fan)
    v = witness_smooth(orb, p)
    assert v.certified
    assert_sound(v, orb, p)
    c = coeffs(v, fan.n_rays)
    assert sum(1 for x in c if x % p) >= fan.dim


def test_witness_smooth_is_deterministic():
    orb = CampanaOrbifold(hirzebruch(3), (2, INF, 5, 3))
    assert witness_smooth(orb, 3) == witness_smooth(orb, 3)
    big = absolute(product_of_lines(3))
    assert witness_smooth(big, 7, exhaustive_limit=1, seed=4) == witness_smooth(
        big, 7, exhaustive_limit=1, seed=4
    )


# --- witness_surface / crit_sing ------------------------------------------


def test_witness_surface_p112_at_3():
    v = witness_surface(absolute(p11p(2)), 3)
    assert v.certified and coeffs(v, 3) == (1, 2, 1)
    assert v.certificate.elementary_divisors == (1, 2)


def test_witness_surface_fails_on_p11p_at_p():
    for p in (2, 3, 5):
        v = witness_surface(absolute(p11p(p)), p)
        assert v.status is Status.INCONCLUSIVE and v.reason == "surface:hypothesis-fails"


def test_witness_surface_p2_at_2():
    assert witness_surface(absolute(projective_space(2)), 2).certified


def test_witness_surface_rejects_other_dimensions():
    v = witness_surface(absolute(projective_space(3)), 2)
    assert v.reason == "surface:not-a-surface"


def test_crit_sing_examples():
    v = crit_sing(absolute(p11p(2)), 3)
    assert v.certified and v.reason == "crit_sing:holds"
    for p in (2, 3, 5):
        v = crit_sing(absolute(p11p(p)), p)
        assert v.status is Status.INCONCLUSIVE and v.reason == "crit_sing-fails"
    for a in range(4):
        for p in (2, 3, 5):
            assert crit_sing(absolute(hirzebruch(a)), p).certified


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]), st.data())
@settings(max_examples=120, deadline=None)
def test_surface_soundness(seed, p, data):
    fan = random_surface_fan(random.Random(seed))
    mults = tuple(data.draw(st.sampled_from([1, 2, 3, 7, INF])) for _ in fan.rays)
    orb = CampanaOrbifold(fan, mults)
    for route in (witness_smooth, witness_surface, crit_sing):
        assert_sound(route(orb, p), orb, p)
    if crit_sing(orb, p).certified:
        assert witness_surface(orb, p).certified


# --- blow-downs ------------------------------------------------------------


def test_blowdown_examples():
    P2 = projective_space(2)
    fine = star_subdivide(P2, (1, 1))
    v = crit_sing_via_blowdown(absolute(fine), P2, 2)
    assert v.certified and v.reason == "blowdown:certified"
    assert v.witness.coefficients(fine.n_rays)[3] == 0
    coarse = p11p(2)
    fine = star_subdivide(coarse, (0, -1))
    assert crit_sing_via_blowdown(absolute(fine), coarse, 3).certified
    with pytest.raises(NotRefinementError):
        crit_sing_via_blowdown(absolute(P2), p11p(2), 2)


# --- weighted projective spaces -------------------------------------------


def test_wps_verdict_examples():
    for p in (2, 3, 5):
        v = wps_verdict((1, 1, p), p)
        assert v.status is Status.NOT_SCRC and v.reason == "wps:p-divides-weight"
        assert p in v.certificate.elementary_divisors and v.witness is None
    v = wps_verdict((1, 2, 3), 5)
    assert v.certified and v.certificate.index == 6
    assert v.witness.coefficients(3) == (1, 2, 3)
    for p in (2, 3, 7):
        assert wps_verdict((1, 1, 1), p).certified
        assert wps_verdict((1, 1, 1, 1), p).certified


def test_wps_verdict_non_absolute():
    v = wps_verdict((1, 1, 2), 2, (2, INF, INF))
    assert v.status is Status.INCONCLUSIVE and v.reason == "wps:absolute-only"
    v = wps_verdict((1, 2, 3), 5, (4, 4, INF))
    assert v.certified and min(v.witness.coefficients(3)[:2]) >= 4


def test_wps_verdict_errors():
    with pytest.raises(ValueError):
        wps_verdict((2, 2, 1), 3)
    with pytest.raises(ValueError):
        wps_verdict((1, 1, 2), 4)


def test_wps_repair_case_one():
    fine, sigma, cert = wps_repair((1, 1, 2), 2)
    assert fine.n_rays == 4
    assert all(classify_cone(fine, c, 2).is_smooth for c in fine.max_cones)
    assert sigma.coefficients(4) == (1, 1, 3, 1)
    assert cert.certified and cert.good_contact_orders
    fine, sigma, cert = wps_repair((1, 1, 1, 3), 3)
    assert sigma.coefficients(5)[3] == 4 and cert.certified


@pytest.mark.parametrize("Q,p", [((1, 2, 2, 5), 2), ((1, 2, 2, 5), 5), ((1, 2, 3), 2), ((1, 2, 3), 3)])
def test_wps_repair_case_two(Q, p):
    fine, sigma, cert = wps_repair(Q, p)
    assert fine.n_rays == len(Q) + 1
    assert sigma.coefficients(fine.n_rays)[: len(Q)] == (1,) * len(Q)
    assert cert.certified and cert.good_contact_orders
    assert cert == scrc_check(sigma, absolute(fine), p)


def test_wps_repair_rejects_coprime():
    with pytest.raises(ValueError):
        wps_repair((1, 2, 3), 5)


# --- dispatcher ------------------------------------------------------------


def test_decide_routes():
    assert decide(absolute(projective_space(2)), 2).reason == "smooth:certified"
    v = decide(absolute(p11p(2)), 3)
    assert v.certified and v.witness.coefficients(3) == (1, 2, 1)
    for p in (2, 3, 5):
        v = decide(absolute(p11p(p)), p)
        assert v.status is Status.NOT_SCRC
    v = decide(absolute(wps_fan((1, 2, 3))), 5)
    assert v.certified
    assert recover_weights(wps_fan((1, 2, 3))) == (1, 2, 3)


def test_decide_inconclusive_without_criterion():
    v = decide(CampanaOrbifold(p11p(2), (3, INF, INF)), 2)
    assert v.status is Status.INCONCLUSIVE and v.reason == "no-criterion-applies"
