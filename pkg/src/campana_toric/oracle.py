"""Brute-force ground truth for small instances.

Nothing here goes through the Smith form or the certificate checker: sums are
added up directly and the lattice index is the gcd of the maximal minors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .campana import INF, CampanaOrbifold, ContactOrderSet
from .linalg import det, require_prime
from .wps import well_formed, wps_fan


@dataclass(frozen=True)
class SearchBudget:
    max_coeff: int
    max_markings_per_ray: int = 1
    max_steps: Optional[int] = None

    def __post_init__(self):
        if self.max_coeff < 1 or self.max_markings_per_ray < 1:
            raise ValueError("search bounds must be at least 1")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("step budget must be at least 1")


class BudgetExhausted(RuntimeError):
    def __init__(self, partial: list, steps: int):
        super().__init__(f"step budget exhausted after {steps} candidates ({len(partial)} found)")
        self.partial = partial
        self.steps = steps


def minor_index(points: Sequence[Sequence[int]], d: int) -> int:
    """gcd of all ``d x d`` minors: ``[Z^d : span]``, or 0 if rank < d."""
    g = 0
    for rows in itertools.combinations(points, d):
        g = math.gcd(g, det(rows))
        if g == 1:
            break
    return g


def _ray_options(n_markings: int, max_coeff: int) -> list[tuple[int, ...]]:
    opts = [()]
    for k in range(1, n_markings + 1):
        opts.extend(itertools.combinations_with_replacement(range(1, max_coeff + 1), k))
    return opts


def brute_force_witnesses(
    orb: CampanaOrbifold, p: int, budget: SearchBudget
) -> list[ContactOrderSet]:
    """Every ray-supported witness within ``budget``, sorted lexicographically.

    Each ray carries up to ``budget.max_markings_per_ray`` markings with
    coefficients in ``1..budget.max_coeff``. Candidates with several markings
    on an infinite-multiplicity ray are enumerated too and then rejected.
    """
    require_prime(p)
    fan = orb.fan
    d = fan.dim
    opts = _ray_options(budget.max_markings_per_ray, budget.max_coeff)
    found: list[ContactOrderSet] = []
    steps = 0
    for choice in itertools.product(opts, repeat=fan.n_rays):
        steps += 1
        if budget.max_steps is not None and steps > budget.max_steps:
            found.sort(key=ContactOrderSet.key)
            raise BudgetExhausted(found, steps - 1)
        markings = [(i, c) for i, cs in enumerate(choice) for c in cs]
        if not markings:
            continue
        total = [0] * d
        for i, c in markings:
            for a in range(d):
                total[a] += c * fan.rays[i][a]
        if any(total):
            continue
        ok = True
        for i, cs in enumerate(choice):
            m = orb.multiplicities[i]
            if (m == INF and len(cs) > 1) or (m != INF and any(c < m for c in cs)):
                ok = False
                break
        if not ok:
            continue
        points = [tuple(c * x for x in fan.rays[i]) for i, c in markings]
        index = minor_index(points, d)
        if index == 0 or index % p == 0:
            continue
        found.append(ContactOrderSet.from_pairs(markings))
    found.sort(key=ContactOrderSet.key)
    return found


def verify_sigma_m_structure(Q: Sequence[int], bound: int) -> bool:
    """Is every balanced absolute Campana-type set on ``P(Q)`` a multiple
    ``m·(q_0, …, q_n)`` of the weight relation?

    Coefficients ``c_0 .. c_{n-1}`` range over ``0..bound`` (0 means no
    marking); the last one is then pinned down by balancing.
    """
    if not well_formed(Q):
        raise ValueError(f"weights {tuple(Q)} are not well-formed")
    Q = tuple(Q)
    fan = wps_fan(Q)
    d = fan.dim
    *head, last = fan.rays
    pivot = next(a for a in range(d) if last[a])
    for cs in itertools.product(range(bound + 1), repeat=len(head)):
        s = [sum(c * r[a] for c, r in zip(cs, head)) for a in range(d)]
        t, rem = divmod(-s[pivot], last[pivot])
        if rem or not 0 <= t <= bound:
            continue
        if any(s[a] + t * last[a] for a in range(d)):
            continue
        c = cs + (t,)
        if not any(c):
            continue
        m, rem = divmod(c[0], Q[0])
        if rem or m < 1 or any(ci != m * q for ci, q in zip(c, Q)):
            return False
    return True
