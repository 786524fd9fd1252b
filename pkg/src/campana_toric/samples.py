"""Random instances for sweeps and property tests."""

from __future__ import annotations

import math
import random

from .fan import Fan, angular_order, validate


def random_surface_fan(rng: random.Random, max_rays: int = 8, box: int = 10) -> Fan:
    """Complete planar fan on 3..max_rays distinct primitive rays in ``[-box, box]^2``."""
    while True:
        k = rng.randint(3, max_rays)
        rays = set()
        while len(rays) < k:
            v = (rng.randint(-box, box), rng.randint(-box, box))
            if v != (0, 0) and math.gcd(*v) == 1:
                rays.add(v)
        rays = sorted(rays)
        order = angular_order(rays)
        ok = all(
            rays[a][0] * rays[b][1] - rays[a][1] * rays[b][0] > 0
            for a, b in zip(order, order[1:] + order[:1])
        )
        if ok:
            cones = [(a, b) for a, b in zip(order, order[1:] + order[:1])]
            return validate(Fan.from_data(2, rays, cones))


def random_matrix(rng: random.Random, max_rows: int = 6, max_cols: int = 8, entry: int = 20):
    m, n = rng.randint(1, max_rows), rng.randint(1, max_cols)
    return tuple(tuple(rng.randint(-entry, entry) for _ in range(n)) for _ in range(m))
