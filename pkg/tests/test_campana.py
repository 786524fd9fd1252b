import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from campana_toric import linalg
from campana_toric.campana import (
    INF,
    CampanaOrbifold,
    ContactOrderSet,
    Marking,
    balancing_check,
    campana_type_check,
    orbifold_from_json,
    orbifold_to_json,
    scrc_check,
    sigma_from_json,
    sigma_to_json,
)
from campana_toric.fan import p11p, projective_space
from campana_toric.samples import random_surface_fan
from campana_toric.witness import wps_repair

from .oracles import elementary_divisors_by_minors

P2 = projective_space(2)
unit = ContactOrderSet.from_coefficients((1, 1, 1))


def test_orbifold_flags():
    orb = CampanaOrbifold(P2, (2, 3, INF))
    assert not orb.is_absolute and not orb.is_klt
    assert CampanaOrbifold.absolute(P2).is_absolute
    assert CampanaOrbifold(P2, (1, 2, 2)).is_klt
    assert orb.floor(0) == 2 and orb.floor(2) == 1
    with pytest.raises(ValueError):
        CampanaOrbifold(P2, (1, 2))
    with pytest.raises(ValueError):
        CampanaOrbifold(P2, (0, 1, 1))


def test_contact_order_set_normalizes():
    s = ContactOrderSet.from_pairs([(2, 1), (0, 3), (0, 1)])
    assert s.markings == (Marking(0, 1), Marking(0, 3), Marking(2, 1))
    assert s.coefficients(3) is None
    assert str(unit) == "{1·ρ0, 1·ρ1, 1·ρ2}"
    with pytest.raises(ValueError):
        ContactOrderSet.from_pairs([(0, 0)])


def test_balancing_examples():
    assert balancing_check(unit, P2)
    assert not balancing_check(ContactOrderSet.from_pairs([(0, 2), (1, 1)]), P2)
    for p in (2, 3, 5):
        assert balancing_check(ContactOrderSet.from_coefficients((1, p, 1)), p11p(p))
    with pytest.raises(ValueError):
        balancing_check(ContactOrderSet.from_pairs([(5, 1)]), P2)


def test_campana_type_examples():
    assert campana_type_check(
        ContactOrderSet.from_coefficients((2, 3, 5)), CampanaOrbifold(P2, (2, 3, INF))
    )
    assert not campana_type_check(unit, CampanaOrbifold(P2, (2, INF, INF)))
    two_on_first = ContactOrderSet.from_pairs([(0, 1), (0, 1), (1, 2), (2, 2)])
    assert not campana_type_check(two_on_first, CampanaOrbifold.absolute(P2))
    # several markings are fine on a finite-multiplicity ray
    assert campana_type_check(two_on_first, CampanaOrbifold(P2, (1, 2, 2)))


def test_scrc_check_examples():
    cert = scrc_check(unit, CampanaOrbifold.absolute(P2), 2)
    assert cert.certified and cert.elementary_divisors == (1, 1) and cert.good_contact_orders
    for p in (2, 3, 5):
        cert = scrc_check(ContactOrderSet.from_coefficients((1, p, 1)), CampanaOrbifold.absolute(p11p(p)), p)
        assert cert.rank == 2 and cert.balanced and cert.campana_type
        assert p in cert.elementary_divisors and not cert.p_torsion_free and not cert.certified
    fine, sigma, cert = wps_repair((1, 1, 2), 2)
    assert cert.certified and cert.good_contact_orders
    assert cert == scrc_check(sigma, CampanaOrbifold.absolute(fine), 2)


def test_scrc_check_rank_deficient_and_bad_prime():
    cert = scrc_check(ContactOrderSet.from_pairs([(0, 1)]), CampanaOrbifold.absolute(P2), 3)
    assert cert.rank == 1 and not cert.certified and cert.index is None
    with pytest.raises(ValueError):
        scrc_check(unit, CampanaOrbifold.absolute(P2), 6)


def test_certificate_json():
    data = scrc_check(unit, CampanaOrbifold.absolute(P2), 2).to_json()
    assert data["certified"] is True and data["index"] == 1 and data["elementary_divisors"] == [1, 1]


def test_json_round_trips():
    orb = CampanaOrbifold(p11p(3), (2, INF, 5))
    assert orbifold_from_json(orbifold_to_json(orb)) == orb
    s = ContactOrderSet.from_pairs([(0, 3), (2, 1), (0, 1)])
    assert sigma_from_json(sigma_to_json(s)) == s
    data = orbifold_to_json(orb)
    del data["multiplicities"]
    assert orbifold_from_json(data).is_absolute


markings = st.lists(st.tuples(st.integers(0, 20), st.integers(1, 9)), min_size=1, max_size=6)


@given(st.integers(0, 10**6), markings, markings, st.sampled_from([2, 3, 5]))
@settings(max_examples=150, deadline=None)
def test_appending_markings_is_monotone(seed, base, extra, p):
    fan = random_surface_fan(random.Random(seed))
    n = fan.n_rays
    a = ContactOrderSet.from_pairs((r % n, c) for r, c in base)
    b = ContactOrderSet.from_pairs([(r % n, c) for r, c in base] + [(r % n, c) for r, c in extra])
    orb = CampanaOrbifold.absolute(fan)
    ca, cb = scrc_check(a, orb, p), scrc_check(b, orb, p)
    assert cb.rank >= ca.rank
    # divisors agree with the minors oracle on the generator matrix
    assert cb.elementary_divisors == elementary_divisors_by_minors(b.points(fan))[: cb.rank]
    if ca.rank == 2:
        # a superlattice has index dividing the old one
        assert ca.index % cb.index == 0
        if ca.p_torsion_free:
            assert cb.p_torsion_free


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]), st.integers(1, 15))
@settings(max_examples=100, deadline=None)
def test_scaling_certified_witness(seed, p, k):
    fan = random_surface_fan(random.Random(seed))
    rel = linalg.positive_relation(fan.ray_matrix())
    mults = tuple(random.Random(seed + 1).choice([1, 2, 3, INF]) for _ in rel)
    orb = CampanaOrbifold(fan, mults)
    sigma = ContactOrderSet.from_coefficients(rel)
    cert = scrc_check(sigma, CampanaOrbifold.absolute(fan), p)
    k *= max((m for m in mults if m != INF), default=1)
    if not cert.certified or k % p == 0:
        return
    scaled = ContactOrderSet.from_coefficients([k * c for c in rel])
    c2 = scrc_check(scaled, orb, p)
    assert c2.balanced and c2.rank == 2 and c2.campana_type
    # torsion is recomputed: index scales by k^2
    assert c2.index == cert.index * k * k
    assert c2.p_torsion_free == (c2.index % p != 0)


@given(markings, st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=100, deadline=None)
def test_good_contact_orders_iff_no_coefficient_divisible(ms, p):
    sigma = ContactOrderSet.from_pairs((r % 3, c) for r, c in ms)
    cert = scrc_check(sigma, CampanaOrbifold.absolute(P2), p)
    assert cert.good_contact_orders == all(mk.coeff % p for mk in sigma.markings)
    # internal consistency of the torsion flag
    assert cert.p_torsion_free == (cert.rank == 2 and math.prod(cert.elementary_divisors) % p != 0)
