"""Constructive witnesses for separable Campana rational connectedness.

Each constructor returns a :class:`Verdict`. A ``CERTIFIED`` verdict always
carries a ray-supported contact-order set that has just passed
:func:`~campana_toric.campana.scrc_check`; ``NOT_SCRC`` is only produced for
absolute weighted projective spaces in a characteristic dividing a weight,
which is the one case where a negative answer is known. Everything else is
``INCONCLUSIVE`` with a machine-readable reason.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from . import linalg
from .campana import (
    CampanaOrbifold,
    Certificate,
    ContactOrderSet,
    scrc_check,
    sigma_to_json,
)
from .fan import Fan, Kind, adjacency, classify_all, cone_adjacency, is_refinement, star_subdivide
from .wps import relation_weights, well_formed, wps_fan


class Status(str, Enum):
    CERTIFIED = "certified_scrc"
    NOT_SCRC = "not_scrc"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    status: Status
    reason: str
    message: str = ""
    witness: Optional[ContactOrderSet] = None
    certificate: Optional[Certificate] = None

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED

    def to_json(self) -> dict:
        out = {"status": self.status.value, "reason": self.reason, "message": self.message}
        if self.witness is not None:
            out["witness"] = sigma_to_json(self.witness)
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


class NotRefinementError(ValueError):
    pass


def _inconclusive(reason: str, message: str = "", **kw) -> Verdict:
    return Verdict(Status.INCONCLUSIVE, reason, message, **kw)


def _certify(orb: CampanaOrbifold, sigma: ContactOrderSet, p: int, reason: str, message: str) -> Verdict:
    cert = scrc_check(sigma, orb, p)
    if not cert.certified:
        raise AssertionError(f"constructed witness {sigma} failed the certificate: {cert}")
    return Verdict(Status.CERTIFIED, reason, message, sigma, cert)


def shift_positive(
    c: Sequence[int], relation: Sequence[int], p: int, orb: CampanaOrbifold
) -> tuple[int, ...]:
    """``c + p*m*relation`` for the least ``m >= 0`` meeting every ray's floor."""
    m = 0
    for i, (ci, ri) in enumerate(zip(c, relation)):
        need = orb.floor(i) - ci
        if need > 0:
            m = max(m, -(-need // (p * ri)))
    return tuple(ci + p * m * ri for ci, ri in zip(c, relation))


# --------------------------------------------------------------------------
# smooth cone with smooth neighbours


def qualifying_smooth_cones(fan: Fan, p: int) -> list[int]:
    """Smooth maximal cones all of whose facet neighbours are smooth."""
    classes = classify_all(fan, p)
    adj = cone_adjacency(fan)
    return [
        k
        for k, cls in enumerate(classes)
        if cls.is_smooth and all(classes[j].is_smooth for j in adj[k])
    ]


def _smooth_cone_relation(
    fan: Fan, cone: Sequence[int], p: int, **search
) -> Optional[tuple[int, ...]]:
    """Integer relation ``c`` whose entries on ``cone`` are all prime to ``p``.

    The non-cone coefficients ``c_A`` are chosen in ``[0, p)`` so that
    ``-B^{-1} A c_A`` has no coordinate divisible by ``p``; the cone
    coefficients are then forced to ``c_B = -B^{-1} A c_A``.
    """
    d = fan.dim
    others = [i for i in range(fan.n_rays) if i not in cone]
    B = fan.cone_matrix(cone)
    A_cols = [fan.rays[i] for i in others]
    phi_cols = []
    for a in A_cols:
        x = linalg.solve_mod_p(B, a, p)
        phi_cols.append(tuple(-t % p for t in x))
    Phi = linalg.columns_to_matrix(phi_cols, d)
    image = linalg.column_space_basis_mod_p(Phi, p)
    v = linalg.find_all_nonzero_in_span(image, d, **search)
    if v is None:
        return None
    c_A = linalg.solve_mod_p(Phi, v, p)
    rhs = tuple(-t for t in linalg.matvec(linalg.columns_to_matrix(A_cols, d), c_A))
    c_B = linalg.solve_rational(B, rhs)
    if c_B is None or any(t.denominator != 1 for t in c_B):
        raise AssertionError(f"cone {tuple(cone)} is not unimodular")
    c = [0] * fan.n_rays
    for i, t in zip(cone, c_B):
        c[i] = int(t)
    for i, t in zip(others, c_A):
        c[i] = t
    assert all(c[i] % p for i in cone)
    return tuple(c)


def witness_smooth(orb: CampanaOrbifold, p: int, **search) -> Verdict:
    """Witness from a smooth maximal cone whose facet neighbours are smooth.

    Qualifying cones are tried in input order; the first one for which an
    all-nonzero vector exists in the image of the mod-``p`` coefficient map
    wins. ``search`` is forwarded to
    :func:`~campana_toric.linalg.find_all_nonzero_in_span`.
    """
    linalg.require_prime(p)
    fan = orb.fan
    cones = qualifying_smooth_cones(fan, p)
    if not cones:
        return _inconclusive("smooth:precondition", "no smooth cone with all neighbours smooth")
    relation = linalg.positive_relation(fan.ray_matrix())
    undecided = []
    for k in cones:
        cone = fan.max_cones[k]
        try:
            c = _smooth_cone_relation(fan, cone, p, **search)
        except linalg.UndecidedError as exc:
            undecided.append(f"cone {k}: {exc}")
            continue
        if c is None:
            continue
        coeffs = shift_positive(c, relation, p, orb)
        return _certify(
            orb,
            ContactOrderSet.from_coefficients(coeffs),
            p,
            "smooth:certified",
            f"built from smooth cone {k} = {cone}",
        )
    detail = "; ".join(undecided) or "no qualifying cone admits an all-nonzero vector"
    return _inconclusive("smooth:no-all-nonzero-vector", detail)


# --------------------------------------------------------------------------
# surfaces


def _mod_p_relation(fan: Fan, p: int) -> Optional[tuple[dict, str]]:
    """Sparse mod-``p`` relation among the rays from a basis pair of reductions.

    Returns ``({index: coefficient}, description)`` or ``None`` when neither
    pattern applies to any basis pair.
    """
    bar = [tuple(x % p for x in r) for r in fan.rays]
    n = len(bar)

    def det(i, j):
        return (bar[i][0] * bar[j][1] - bar[i][1] * bar[j][0]) % p

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if det(i, j)]

    def coords(i, j, k):
        B = ((bar[i][0], bar[j][0]), (bar[i][1], bar[j][1]))
        return linalg.solve_mod_p(B, bar[k], p)

    for i, j in pairs:
        for k in range(n):
            if k in (i, j):
                continue
            a, b = coords(i, j, k)
            if a and b:
                rel = {i: -a % p, j: -b % p, k: 1}
                return rel, f"ray {k} = {a}·ray {i} + {b}·ray {j} mod {p}"
    for i, j in pairs:
        along_u = [k for k in range(n) if k not in (i, j) and coords(i, j, k)[1] == 0]
        along_v = [k for k in range(n) if k not in (i, j) and coords(i, j, k)[0] == 0]
        if along_u and along_v:
            s, t = along_u[0], along_v[0]
            a_s, a_t = coords(i, j, s)[0], coords(i, j, t)[1]
            rel = {i: -a_s % p, j: -a_t % p, s: 1, t: 1}
            return rel, f"rays {s} ∥ ray {i} and {t} ∥ ray {j} mod {p}"
    return None


def witness_surface(orb: CampanaOrbifold, p: int) -> Verdict:
    """Witness for a toric surface from a good basis pair of reduced rays.

    The sparse mod-``p`` relation is lifted through the Smith form of the ray
    matrix and shifted by ``p`` times a positive relation.
    """
    linalg.require_prime(p)
    fan = orb.fan
    if fan.dim != 2:
        return _inconclusive("surface:not-a-surface", f"dimension {fan.dim}")
    found = _mod_p_relation(fan, p)
    if found is None:
        return _inconclusive(
            "surface:hypothesis-fails", "no basis pair of reduced rays admits a good relation"
        )
    rel, how = found
    cbar = tuple(rel.get(i, 0) for i in range(fan.n_rays))
    R = fan.ray_matrix()
    y = linalg.lift_modp_kernel_vector(R, cbar, p)
    coeffs = shift_positive(y, linalg.positive_relation(R), p, orb)
    return _certify(orb, ContactOrderSet.from_coefficients(coeffs), p, "surface:certified", how)


def crit_sing_failures(fan: Fan, p: int) -> list[int]:
    """Rays all of whose non-containing maximal cones are wildly singular."""
    classes = classify_all(fan, p)
    adj = adjacency(fan)
    return [
        r
        for r in range(fan.n_rays)
        if not any(classes[k].kind is not Kind.WILD for k in adj.non_adjacent(r))
    ]


def crit_sing(orb: CampanaOrbifold, p: int) -> Verdict:
    """Singularity criterion: every ray misses some smooth or tame cone."""
    linalg.require_prime(p)
    if orb.fan.dim != 2:
        return _inconclusive("crit_sing:not-a-surface", f"dimension {orb.fan.dim}")
    bad = crit_sing_failures(orb.fan, p)
    if bad:
        return _inconclusive(
            "crit_sing-fails", f"rays {bad} have only wild cones among the cones avoiding them"
        )
    v = witness_surface(orb, p)
    if not v.certified:
        return _inconclusive("crit_sing:holds-but-witness-failed", v.message)
    return dataclasses.replace(v, reason="crit_sing:holds")


def crit_sing_via_blowdown(orb: CampanaOrbifold, coarse: Fan, p: int) -> Verdict:
    """Run the singularity criterion on a blow-down and reuse its witness.

    The coarse orbifold inherits the multiplicities of the shared rays, so the
    reused markings stay of Campana type on the fine fan.
    """
    linalg.require_prime(p)
    fine = orb.fan
    if not is_refinement(fine, coarse):
        raise NotRefinementError("the orbifold's fan does not refine the given coarse fan")
    to_fine = [fine.ray_index(r) for r in coarse.rays]
    coarse_orb = CampanaOrbifold(coarse, tuple(orb.multiplicities[i] for i in to_fine))
    v = crit_sing(coarse_orb, p)
    if not v.certified:
        return _inconclusive("blowdown:" + v.reason, v.message)
    sigma = ContactOrderSet.from_pairs((to_fine[mk.ray], mk.coeff) for mk in v.witness.markings)
    cert = scrc_check(sigma, orb, p)
    if not cert.certified:
        return _inconclusive("blowdown:lift-failed", "coarse witness does not certify the fine fan")
    return Verdict(Status.CERTIFIED, "blowdown:certified", "witness of the coarse fan", sigma, cert)


# --------------------------------------------------------------------------
# weighted projective spaces


def _wps_verdict_on_fan(orb: CampanaOrbifold, weights: Sequence[int], p: int) -> Verdict:
    """``weights[i]`` is the weight of ray ``i`` (``Σ q_i ray_i = 0``)."""
    sigma_1 = ContactOrderSet.from_coefficients(weights)
    index = math.prod(weights)
    if index % p == 0:
        cert = scrc_check(sigma_1, CampanaOrbifold.absolute(orb.fan), p)
        dividing = sorted({q for q in weights if q % p == 0})
        if not orb.is_absolute:
            return _inconclusive(
                "wps:absolute-only",
                f"p={p} divides weights {dividing}, but the negative result needs every "
                "multiplicity infinite",
                certificate=cert,
            )
        n = orb.fan.dim
        return Verdict(
            Status.NOT_SCRC,
            "wps:p-divides-weight",
            f"p={p} divides weights {dividing}; every balanced Campana-type set is "
            f"σ_m = m·σ_1 with index m^{n}·{index}, always divisible by {p}",
            None,
            cert,
        )
    m = 1
    while m % p == 0 or any(m * q < orb.floor(i) for i, q in enumerate(weights)):
        m += 1
    sigma = ContactOrderSet.from_coefficients([m * q for q in weights])
    return _certify(
        orb, sigma, p, "wps:coprime-index", f"σ_{m} has index {m ** orb.fan.dim * index}, prime to {p}"
    )


def wps_verdict(
    Q: Sequence[int], p: int, multiplicities: Optional[Sequence] = None
) -> Verdict:
    linalg.require_prime(p)
    if not well_formed(Q):
        raise ValueError(f"weights {tuple(Q)} are not well-formed")
    fan = wps_fan(Q)
    if multiplicities is None:
        orb = CampanaOrbifold.absolute(fan)
    else:
        orb = CampanaOrbifold(fan, tuple(multiplicities))
    return _wps_verdict_on_fan(orb, tuple(Q), p)


def as_weighted_projective_space(fan: Fan) -> Optional[tuple[int, ...]]:
    """Weights in ray order when ``fan`` is the fan of a weighted projective
    space (``dim + 1`` rays generating the lattice), else ``None``."""
    if fan.n_rays != fan.dim + 1:
        return None
    r, divisors = linalg.elementary_divisors_of_sublattice(fan.rays, fan.dim)
    if r != fan.dim or any(x != 1 for x in divisors):
        return None
    weights = relation_weights(fan)
    return weights if well_formed(weights) else None


def wps_repair(Q: Sequence[int], p: int) -> tuple[Fan, ContactOrderSet, Certificate]:
    """Blow up ``P(Q)`` so that the absolute orbifold gets a certified witness.

    With a single weight ``q > 1`` the ray opposite to its generator is
    inserted and that generator gets coefficient ``q + 1``; otherwise the ray
    ``-Σ e_i`` is inserted and every old ray gets coefficient 1.
    """
    linalg.require_prime(p)
    Q = tuple(Q)
    if not well_formed(Q):
        raise ValueError(f"weights {Q} are not well-formed")
    if all(q % p for q in Q):
        raise ValueError(f"p={p} divides no weight of {Q}; no repair needed, use wps_verdict")
    fan = wps_fan(Q)
    big = [i for i, q in enumerate(Q) if q > 1]
    coeffs = [1] * len(Q)
    if len(big) == 1:
        j = big[0]
        fine = star_subdivide(fan, tuple(-x for x in fan.rays[j]))
        coeffs[j] = Q[j] + 1
        coeffs.append(1)
    else:
        s = [-sum(r[a] for r in fan.rays) for a in range(fan.dim)]
        g = math.gcd(*s)
        fine = star_subdivide(fan, tuple(x // g for x in s))
        coeffs.append(g)
    sigma = ContactOrderSet.from_coefficients(coeffs)
    return fine, sigma, scrc_check(sigma, CampanaOrbifold.absolute(fine), p)


# --------------------------------------------------------------------------
# dispatcher


def decide(orb: CampanaOrbifold, p: int, coarse: Optional[Fan] = None, **search) -> Verdict:
    """Try every available route and return the first conclusive verdict."""
    linalg.require_prime(p)
    tried = []
    v = witness_smooth(orb, p, **search)
    if v.certified:
        return v
    tried.append(v.reason)
    if orb.fan.dim == 2:
        for route in (crit_sing, witness_surface):
            v = route(orb, p)
            if v.certified:
                return v
            tried.append(v.reason)
    if coarse is not None:
        v = crit_sing_via_blowdown(orb, coarse, p)
        if v.certified:
            return v
        tried.append(v.reason)
    weights = as_weighted_projective_space(orb.fan)
    if weights is not None:
        v = _wps_verdict_on_fan(orb, weights, p)
        if v.status is not Status.INCONCLUSIVE:
            return v
        tried.append(v.reason)
    return _inconclusive("no-criterion-applies", "tried: " + ", ".join(tried))
