"""Complete simplicial fans: validation, singularity classes, adjacency and
star subdivision."""

from __future__ import annotations

import functools
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .linalg import IntVector

Cone = tuple[int, ...]


class FanError(ValueError):
    """Invalid fan data. ``rays`` / ``cones`` carry the offending indices."""

    def __init__(self, message: str, *, rays: Sequence[int] = (), cones: Sequence[int] = ()):
        super().__init__(message)
        self.rays = tuple(rays)
        self.cones = tuple(cones)


class NonPrimitiveRayError(FanError):
    pass


class NonSimplicialConeError(FanError):
    pass


class OverlappingConesError(FanError):
    pass


class IncompleteFanError(FanError):
    pass


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[IntVector, ...]
    max_cones: tuple[Cone, ...]

    @classmethod
    def from_data(cls, dim: int, rays, max_cones) -> "Fan":
        return cls(
            int(dim),
            tuple(tuple(int(x) for x in r) for r in rays),
            tuple(tuple(sorted(int(i) for i in c)) for c in max_cones),
        )

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> linalg.IntMatrix:
        """``dim x n`` matrix whose columns are the rays."""
        return linalg.columns_to_matrix(self.rays, self.dim)

    def cone_matrix(self, cone: Sequence[int]) -> linalg.IntMatrix:
        return linalg.columns_to_matrix([self.rays[i] for i in cone], self.dim)

    def ray_index(self, ray: Sequence[int]) -> Optional[int]:
        ray = tuple(ray)
        return next((i for i, r in enumerate(self.rays) if r == ray), None)

    def canonical_key(self):
        """Order-independent key: sorted rays and cones as sets of rays."""
        cones = sorted(tuple(sorted(self.rays[i] for i in c)) for c in self.max_cones)
        return self.dim, tuple(sorted(self.rays)), tuple(cones)


# --------------------------------------------------------------------------
# validation


def validate(fan: Fan) -> Fan:
    """Check primitivity, simpliciality, the face property and completeness.

    Returns the fan unchanged so calls can be chained.
    """
    d = fan.dim
    if d < 1:
        raise FanError("dimension must be at least 1")
    for i, r in enumerate(fan.rays):
        if len(r) != d:
            raise FanError(f"ray {i} has length {len(r)}, expected {d}", rays=[i])
        if not any(r):
            raise FanError(f"ray {i} is zero", rays=[i])
        if math.gcd(*r) != 1:
            raise NonPrimitiveRayError(f"ray {i} = {r} is not primitive", rays=[i])
    if len(set(fan.rays)) != len(fan.rays):
        dup = [i for i, r in enumerate(fan.rays) if fan.rays.index(r) != i]
        raise FanError(f"duplicate rays {dup}", rays=dup)
    if not fan.max_cones:
        raise IncompleteFanError("fan has no maximal cones")
    for k, c in enumerate(fan.max_cones):
        if any(not 0 <= i < fan.n_rays for i in c):
            raise FanError(f"cone {k} references an unknown ray", cones=[k])
        if len(set(c)) != len(c) or len(c) != d:
            raise NonSimplicialConeError(
                f"cone {k} = {c} is not a full-dimensional simplicial cone", cones=[k]
            )
        if linalg.det(fan.cone_matrix(c)) == 0:
            raise NonSimplicialConeError(f"cone {k} = {c} has dependent rays", cones=[k])
    if len(set(fan.max_cones)) != len(fan.max_cones):
        raise OverlappingConesError("repeated maximal cone")
    used = {i for c in fan.max_cones for i in c}
    unused = [i for i in range(fan.n_rays) if i not in used]
    if unused:
        raise FanError(f"rays {unused} lie in no maximal cone", rays=unused)

    if d == 1:
        if sorted(fan.rays) != [(-1,), (1,)]:
            raise IncompleteFanError("a complete 1-dimensional fan has rays +1 and -1")
    elif d == 2:
        _validate_planar(fan)
    else:
        _validate_facet_pairing(fan)
    return fan


def angular_order(rays: Sequence[Sequence[int]]) -> list[int]:
    """Indices of planar vectors sorted counterclockwise from the +x axis."""

    def half(v):
        return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1

    def cmp(i, j):
        a, b = rays[i], rays[j]
        if half(a) != half(b):
            return half(a) - half(b)
        cross = a[0] * b[1] - a[1] * b[0]
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(range(len(rays)), key=functools.cmp_to_key(cmp))


def _validate_planar(fan: Fan) -> None:
    order = angular_order(fan.rays)
    n = len(order)
    if n < 3:
        raise IncompleteFanError("a complete planar fan needs at least three rays")
    consecutive = set()
    for k in range(n):
        a, b = order[k], order[(k + 1) % n]
        u, v = fan.rays[a], fan.rays[b]
        if u[0] * v[1] - u[1] * v[0] <= 0:
            raise IncompleteFanError(
                f"rays {a} and {b} leave a gap of angle >= pi", rays=[a, b]
            )
        consecutive.add(tuple(sorted((a, b))))
    cones = set(fan.max_cones)
    bad = [k for k, c in enumerate(fan.max_cones) if c not in consecutive]
    if bad:
        raise OverlappingConesError(
            f"cones {bad} contain other rays in their interior", cones=bad
        )
    missing = sorted(consecutive - cones)
    if missing:
        raise IncompleteFanError(f"no cone between consecutive rays {missing}")


def _validate_facet_pairing(fan: Fan) -> None:
    facets = defaultdict(list)
    for k, c in enumerate(fan.max_cones):
        for i in c:
            facets[tuple(j for j in c if j != i)].append((k, i))
    for facet, owners in facets.items():
        ks = [k for k, _ in owners]
        if len(owners) == 1:
            raise IncompleteFanError(
                f"facet {facet} of cone {ks[0]} is not shared", cones=ks, rays=facet
            )
        if len(owners) > 2:
            raise OverlappingConesError(f"facet {facet} lies in cones {ks}", cones=ks)
        (k1, v1), (k2, v2) = owners
        s1 = linalg.det(fan.cone_matrix(facet + (v1,)))
        s2 = linalg.det(fan.cone_matrix(facet + (v2,)))
        if (s1 > 0) == (s2 > 0):
            raise OverlappingConesError(
                f"cones {k1} and {k2} lie on the same side of facet {facet}", cones=[k1, k2]
            )
    adj = cone_adjacency(fan)
    seen = {0}
    stack = [0]
    while stack:
        for k in adj[stack.pop()]:
            if k not in seen:
                seen.add(k)
                stack.append(k)
    if len(seen) != len(fan.max_cones):
        raise OverlappingConesError("facet adjacency graph is disconnected")
    degree = _covering_degree(fan)
    if degree != 1:
        raise OverlappingConesError(f"cones cover a generic point {degree} times")


def _covering_degree(fan: Fan) -> int:
    """Number of maximal cones whose interior holds a generic point of cone 0."""
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53]
    first = fan.max_cones[0]
    for shift in range(len(primes) - fan.dim + 1):
        weights = [1000 + primes[shift + i] * (i + 1) for i in range(fan.dim)]
        x = tuple(sum(w * fan.rays[r][a] for w, r in zip(weights, first)) for a in range(fan.dim))
        count = 0
        degenerate = False
        for c in fan.max_cones:
            lam = linalg.solve_rational(fan.cone_matrix(c), x)
            if all(t > 0 for t in lam):
                count += 1
            elif all(t >= 0 for t in lam):
                degenerate = True
                break
        if not degenerate:
            return count
    raise FanError("could not find a generic test point")  # pragma: no cover


# --------------------------------------------------------------------------
# singularities


class Kind(str, Enum):
    SMOOTH = "smooth"
    TAME = "tame"
    WILD = "wild"


@dataclass(frozen=True)
class SingularityClass:
    kind: Kind
    index: int

    @property
    def is_smooth(self) -> bool:
        return self.kind is Kind.SMOOTH

    def __str__(self) -> str:
        return self.kind.value if self.is_smooth else f"{self.kind.value}({self.index})"


def cone_index(fan: Fan, cone: Sequence[int]) -> int:
    """Index of the ray sublattice in its saturation (``|det|`` for full cones)."""
    r, divisors = linalg.elementary_divisors_of_sublattice(
        [fan.rays[i] for i in cone], fan.dim
    )
    if r != len(cone):
        raise NonSimplicialConeError(f"cone {tuple(cone)} is not simplicial")
    return math.prod(divisors)


def classify_cone(fan: Fan, cone: Sequence[int], p: int) -> SingularityClass:
    linalg.require_prime(p)
    m = cone_index(fan, cone)
    if m == 1:
        return SingularityClass(Kind.SMOOTH, 1)
    return SingularityClass(Kind.WILD if m % p == 0 else Kind.TAME, m)


def classify_all(fan: Fan, p: int) -> list[SingularityClass]:
    return [classify_cone(fan, c, p) for c in fan.max_cones]


# --------------------------------------------------------------------------
# adjacency


def cone_adjacency(fan: Fan) -> list[list[int]]:
    """For each maximal cone, the maximal cones sharing a facet with it."""
    owners = defaultdict(list)
    for k, c in enumerate(fan.max_cones):
        for i in c:
            owners[tuple(j for j in c if j != i)].append(k)
    adj: list[set[int]] = [set() for _ in fan.max_cones]
    for ks in owners.values():
        for a, b in itertools.permutations(ks, 2):
            adj[a].add(b)
    return [sorted(s) for s in adj]


@dataclass(frozen=True)
class Adjacency:
    cone_neighbors: tuple[tuple[int, ...], ...]
    ray_cones: tuple[tuple[int, ...], ...]

    def non_adjacent(self, ray: int) -> tuple[int, ...]:
        """Maximal cones that do not contain ``ray``."""
        inside = set(self.ray_cones[ray])
        return tuple(k for k in range(len(self.cone_neighbors)) if k not in inside)


def adjacency(fan: Fan) -> Adjacency:
    ray_cones = tuple(
        tuple(k for k, c in enumerate(fan.max_cones) if i in c) for i in range(fan.n_rays)
    )
    return Adjacency(tuple(tuple(a) for a in cone_adjacency(fan)), ray_cones)


# --------------------------------------------------------------------------
# membership, subdivision, refinement


def cone_coordinates(fan: Fan, cone: Sequence[int], x: Sequence[int]) -> tuple[Fraction, ...]:
    lam = linalg.solve_rational(fan.cone_matrix(cone), x)
    if lam is None:
        raise NonSimplicialConeError(f"cone {tuple(cone)} is not full-dimensional")
    return lam


def in_cone(fan: Fan, cone: Sequence[int], x: Sequence[int]) -> bool:
    return all(t >= 0 for t in cone_coordinates(fan, cone, x))


def star_subdivide(fan: Fan, new_ray: Sequence[int]) -> Fan:
    """Insert ``new_ray`` and cone over the faces around its carrier face.

    The new ray gets index ``n_rays``. Cones away from it keep their position;
    each cone containing it is replaced in place by its pieces.
    """
    new_ray = tuple(int(x) for x in new_ray)
    if len(new_ray) != fan.dim or not any(new_ray):
        raise FanError(f"new ray {new_ray} is not a nonzero vector of length {fan.dim}")
    if math.gcd(*new_ray) != 1:
        raise NonPrimitiveRayError(f"new ray {new_ray} is not primitive")
    if fan.ray_index(new_ray) is not None:
        raise FanError(f"{new_ray} is already a ray of the fan", rays=[fan.ray_index(new_ray)])
    carrier = None
    for c in fan.max_cones:
        lam = cone_coordinates(fan, c, new_ray)
        if all(t >= 0 for t in lam):
            carrier = tuple(i for i, t in zip(c, lam) if t > 0)
            break
    if carrier is None:
        raise FanError(f"{new_ray} lies outside the support of the fan")
    if len(carrier) == 1:
        raise FanError(f"{new_ray} lies on ray {carrier[0]}", rays=carrier)
    n = fan.n_rays
    cones = []
    for c in fan.max_cones:
        if set(carrier) <= set(c):
            for i in carrier:
                cones.append(tuple(sorted([j for j in c if j != i] + [n])))
        else:
            cones.append(c)
    return validate(Fan(fan.dim, fan.rays + (new_ray,), tuple(cones)))


def is_refinement(fine: Fan, coarse: Fan) -> bool:
    """Every coarse ray is a fine ray and every fine cone sits in a coarse cone."""
    if fine.dim != coarse.dim:
        raise ValueError(f"dimension mismatch: {fine.dim} vs {coarse.dim}")
    if not set(coarse.rays) <= set(fine.rays):
        return False
    for c in fine.max_cones:
        if not any(
            all(in_cone(coarse, big, fine.rays[i]) for i in c) for big in coarse.max_cones
        ):
            return False
    return True


# --------------------------------------------------------------------------
# JSON


def fan_to_json(fan: Fan) -> dict:
    return {
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [list(c) for c in fan.max_cones],
    }


def fan_from_json(data: dict) -> Fan:
    return Fan.from_data(data["dim"], data["rays"], data["max_cones"])


# --------------------------------------------------------------------------
# fixtures used across tests, scripts and the CLI docs


def projective_space(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return validate(Fan.from_data(n, rays, cones))


def hirzebruch(a: int) -> Fan:
    return validate(Fan.from_data(2, [(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)]))


def product_of_lines(n: int) -> Fan:
    """Fan of ``(P^1)^n``: rays ``±e_i``, one cone per sign pattern."""
    rays = []
    for i in range(n):
        rays.append(tuple(int(i == j) for j in range(n)))
        rays.append(tuple(-int(i == j) for j in range(n)))
    cones = [tuple(2 * i + s for i, s in enumerate(signs)) for signs in itertools.product((0, 1), repeat=n)]
    return validate(Fan.from_data(n, rays, cones))


def p11p(p: int) -> Fan:
    """Planar fan with rays ``(1,0), (0,1), (-1,-p)``."""
    return validate(Fan.from_data(2, [(1, 0), (0, 1), (-1, -p)], [(0, 1), (1, 2), (0, 2)]))
