"""Campana toric orbifolds, ray-supported contact orders and the
rank / torsion certificate."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from . import linalg
from .fan import Fan, fan_from_json, fan_to_json

INF = math.inf
Multiplicity = Union[int, float]  # positive int, or INF


@dataclass(frozen=True)
class CampanaOrbifold:
    fan: Fan
    multiplicities: tuple[Multiplicity, ...]

    def __post_init__(self):
        if len(self.multiplicities) != self.fan.n_rays:
            raise ValueError(
                f"{len(self.multiplicities)} multiplicities for {self.fan.n_rays} rays"
            )
        for m in self.multiplicities:
            if m != INF and (not isinstance(m, int) or m < 1):
                raise ValueError(f"multiplicity must be a positive integer or inf, got {m!r}")

    @classmethod
    def absolute(cls, fan: Fan) -> "CampanaOrbifold":
        return cls(fan, (INF,) * fan.n_rays)

    @property
    def is_absolute(self) -> bool:
        return all(m == INF for m in self.multiplicities)

    @property
    def is_klt(self) -> bool:
        return all(m != INF for m in self.multiplicities)

    def floor(self, ray: int) -> int:
        """Smallest admissible coefficient of a marking on ``ray``."""
        m = self.multiplicities[ray]
        return 1 if m == INF else max(1, m)


@dataclass(frozen=True, order=True)
class Marking:
    ray: int
    coeff: int


@dataclass(frozen=True)
class ContactOrderSet:
    """Markings ``coeff * u_ray``; kept sorted by ``(ray, coeff)``."""

    markings: tuple[Marking, ...]

    def __post_init__(self):
        object.__setattr__(self, "markings", tuple(sorted(self.markings)))
        for mk in self.markings:
            if mk.coeff < 1:
                raise ValueError(f"coefficient must be positive, got {mk}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "ContactOrderSet":
        return cls(tuple(Marking(int(r), int(c)) for r, c in pairs))

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int]) -> "ContactOrderSet":
        """One marking per ray with a positive coefficient; zeros are skipped."""
        return cls.from_pairs((i, c) for i, c in enumerate(coeffs) if c)

    def points(self, fan: Fan) -> list[linalg.IntVector]:
        return [tuple(mk.coeff * x for x in fan.rays[mk.ray]) for mk in self.markings]

    def coefficients(self, n_rays: int) -> Optional[tuple[int, ...]]:
        """Per-ray coefficients when each ray carries at most one marking."""
        out = [0] * n_rays
        for mk in self.markings:
            if out[mk.ray]:
                return None
            out[mk.ray] = mk.coeff
        return tuple(out)

    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple((mk.ray, mk.coeff) for mk in self.markings)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{mk.coeff}·ρ{mk.ray}" for mk in self.markings) + "}"


def _check_indices(sigma: ContactOrderSet, fan: Fan) -> None:
    for mk in sigma.markings:
        if not 0 <= mk.ray < fan.n_rays:
            raise ValueError(f"marking {mk} references unknown ray")


def balancing_check(sigma: ContactOrderSet, fan: Fan) -> bool:
    _check_indices(sigma, fan)
    total = [0] * fan.dim
    for pt in sigma.points(fan):
        for a, x in enumerate(pt):
            total[a] += x
    return not any(total)


def campana_type_check(sigma: ContactOrderSet, orb: CampanaOrbifold) -> bool:
    _check_indices(sigma, orb.fan)
    per_ray = Counter(mk.ray for mk in sigma.markings)
    for mk in sigma.markings:
        m = orb.multiplicities[mk.ray]
        if m == INF:
            if per_ray[mk.ray] > 1:
                return False
        elif mk.coeff < m:
            return False
    return True


@dataclass(frozen=True)
class Certificate:
    rank: int
    elementary_divisors: tuple[int, ...]
    p_torsion_free: bool
    good_contact_orders: bool
    balanced: bool
    campana_type: bool
    dim: int
    p: int

    @property
    def certified(self) -> bool:
        return self.balanced and self.campana_type and self.rank == self.dim and self.p_torsion_free

    @property
    def index(self) -> Optional[int]:
        """``[N : Z·σ]``, or ``None`` when the rank is deficient."""
        return math.prod(self.elementary_divisors) if self.rank == self.dim else None

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "dim": self.dim,
            "char": self.p,
            "elementary_divisors": list(self.elementary_divisors),
            "index": self.index,
            "p_torsion_free": self.p_torsion_free,
            "good_contact_orders": self.good_contact_orders,
            "balanced": self.balanced,
            "campana_type": self.campana_type,
            "certified": self.certified,
        }


def scrc_check(sigma: ContactOrderSet, orb: CampanaOrbifold, p: int) -> Certificate:
    """Evaluate the sufficient criterion for separable Campana rational
    connectedness.

    A certified result means ``σ`` is balanced, of Campana type, spans a
    sublattice of full rank, and the quotient has no ``p``-torsion. Failing
    the check only means ``σ`` does not certify anything.
    """
    linalg.require_prime(p)
    fan = orb.fan
    d = fan.dim
    r, divisors = linalg.elementary_divisors_of_sublattice(sigma.points(fan), d)
    return Certificate(
        rank=r,
        elementary_divisors=divisors,
        p_torsion_free=r == d and all(x % p for x in divisors),
        good_contact_orders=all(mk.coeff % p for mk in sigma.markings),
        balanced=balancing_check(sigma, fan),
        campana_type=campana_type_check(sigma, orb),
        dim=d,
        p=p,
    )


# --------------------------------------------------------------------------
# JSON


def multiplicities_to_json(ms: Sequence[Multiplicity]) -> list:
    return ["inf" if m == INF else m for m in ms]


def multiplicities_from_json(data: Sequence) -> tuple[Multiplicity, ...]:
    return tuple(INF if m == "inf" else int(m) for m in data)


def orbifold_to_json(orb: CampanaOrbifold) -> dict:
    return {**fan_to_json(orb.fan), "multiplicities": multiplicities_to_json(orb.multiplicities)}


def orbifold_from_json(data: dict) -> CampanaOrbifold:
    fan = fan_from_json(data)
    if data.get("multiplicities") is None:
        return CampanaOrbifold.absolute(fan)
    return CampanaOrbifold(fan, multiplicities_from_json(data["multiplicities"]))


def sigma_to_json(sigma: ContactOrderSet) -> dict:
    return {"markings": [{"ray": mk.ray, "coeff": mk.coeff} for mk in sigma.markings]}


def sigma_from_json(data: dict) -> ContactOrderSet:
    return ContactOrderSet.from_pairs((m["ray"], m["coeff"]) for m in data["markings"])
