import itertools
import math

import pytest

from campana_toric.campana import INF, CampanaOrbifold, ContactOrderSet
from campana_toric.fan import p11p, projective_space
from campana_toric.oracle import (
    BudgetExhausted,
    SearchBudget,
    brute_force_witnesses,
    minor_index,
    verify_sigma_m_structure,
)
from campana_toric.witness import witness_smooth, witness_surface

from .oracles import det

absolute = CampanaOrbifold.absolute


def keys(found):
    return [s.key() for s in found]


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(0)
    with pytest.raises(ValueError):
        SearchBudget(3, max_markings_per_ray=0)
    with pytest.raises(ValueError):
        SearchBudget(3, max_steps=0)


def test_minor_index():
    assert minor_index([(1, 0), (0, 2), (-1, -2)], 2) == 2
    assert minor_index([(1, 1), (2, 2)], 2) == 0


def test_p2_bound_3():
    found = brute_force_witnesses(absolute(projective_space(2)), 2, SearchBudget(3))
    assert ContactOrderSet.from_coefficients((1, 1, 1)) in found
    assert ContactOrderSet.from_coefficients((3, 3, 3)) in found
    assert ContactOrderSet.from_coefficients((2, 2, 2)) not in found
    assert keys(found) == sorted(keys(found))


def test_p11p_empty_at_2p():
    for p in (2, 3, 5):
        assert brute_force_witnesses(absolute(p11p(p)), p, SearchBudget(2 * p)) == []


def test_p112_at_3_contains_surface_witness():
    found = brute_force_witnesses(absolute(p11p(2)), 3, SearchBudget(4))
    assert ContactOrderSet.from_coefficients((1, 2, 1)) in found


def test_infinite_ray_with_two_markings_is_filtered():
    fan = projective_space(2)
    two = ContactOrderSet.from_pairs([(0, 1), (0, 1), (1, 2), (2, 2)])
    assert two not in brute_force_witnesses(absolute(fan), 3, SearchBudget(2, max_markings_per_ray=2))
    assert two in brute_force_witnesses(CampanaOrbifold(fan, (1, 1, 1)), 3, SearchBudget(2, max_markings_per_ray=2))


def _nested_loop_count(rays, mults, p, bound):
    # fixed three rays, at most one marking each, written out by hand
    n = 0
    for c0 in range(bound + 1):
        for c1 in range(bound + 1):
            for c2 in range(bound + 1):
                cs = (c0, c1, c2)
                if not any(cs):
                    continue
                if any(c and m != INF and c < m for c, m in zip(cs, mults)):
                    continue
                if any(sum(c * r[a] for c, r in zip(cs, rays)) for a in range(2)):
                    continue
                pts = [tuple(c * x for x in r) for c, r in zip(cs, rays) if c]
                g = 0
                for a, b in itertools.combinations(pts, 2):
                    g = math.gcd(g, det([a, b]))
                if g and g % p:
                    n += 1
    return n


@pytest.mark.parametrize("fan", [projective_space(2), p11p(2), p11p(3)])
@pytest.mark.parametrize("mults", [(INF, INF, INF), (2, 1, 3)])
@pytest.mark.parametrize("p", [2, 3])
def test_enumeration_count_matches_nested_loops(fan, mults, p):
    bound = 7
    orb = CampanaOrbifold(fan, mults)
    found = brute_force_witnesses(orb, p, SearchBudget(bound))
    assert len(found) == _nested_loop_count(fan.rays, mults, p, bound)


def test_budget_exhaustion_carries_partial_results():
    orb = absolute(projective_space(2))
    full = brute_force_witnesses(orb, 2, SearchBudget(5))
    with pytest.raises(BudgetExhausted) as exc:
        brute_force_witnesses(orb, 2, SearchBudget(5, max_steps=100))
    assert exc.value.steps == 100
    assert set(keys(exc.value.partial)) <= set(keys(full))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_constructor_witnesses_appear_in_oracle(p):
    bound = 8
    for fan in (projective_space(2), p11p(2)):
        orb = absolute(fan)
        found = brute_force_witnesses(orb, p, SearchBudget(bound))
        for route in (witness_smooth, witness_surface):
            v = route(orb, p)
            if v.certified and max(mk.coeff for mk in v.witness.markings) <= bound:
                assert v.witness in found


def test_sigma_m_structure_examples():
    assert verify_sigma_m_structure((1, 1, 2), 8)
    assert verify_sigma_m_structure((1, 1, 1), 5)
    assert verify_sigma_m_structure((1, 2, 3), 12)
    with pytest.raises(ValueError):
        verify_sigma_m_structure((2, 2, 1), 4)
