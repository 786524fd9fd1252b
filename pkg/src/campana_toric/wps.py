"""Weighted projective spaces as fans."""

from __future__ import annotations

import itertools
import math
from typing import Sequence

from . import linalg
from .fan import Fan, validate

Weights = tuple[int, ...]


def _check(Q: Sequence[int]) -> Weights:
    Q = tuple(int(q) for q in Q)
    if len(Q) < 2:
        raise ValueError("need at least two weights")
    if any(q < 1 for q in Q):
        raise ValueError(f"weights must be positive, got {Q}")
    return Q


def well_formed(Q: Sequence[int]) -> bool:
    """Every choice of ``len(Q) - 1`` weights is coprime."""
    Q = _check(Q)
    return all(math.gcd(*sub) == 1 for sub in itertools.combinations(Q, len(Q) - 1))


def wps_fan(Q: Sequence[int]) -> Fan:
    """Fan of ``P(Q)`` with ray ``i`` carrying weight ``Q[i]``.

    Start from the ``P^n`` vectors ``v_i = ε_i`` (``i < n``), ``v_n = -Σ ε_i``
    and the lattice ``N`` generated by ``e_i = v_i / q_i``. Scaling by
    ``L = lcm(Q)`` puts the generators in ``Z^n``; the Hermite basis of that
    lattice is the coordinate system for the output, so ``Σ q_i ray_i = 0``.
    """
    Q = _check(Q)
    if not well_formed(Q):
        raise ValueError(f"weights {Q} are not well-formed")
    n = len(Q) - 1
    L = math.lcm(*Q)
    v = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    v.append(tuple(-1 for _ in range(n)))
    gens = [tuple(L // q * x for x in vi) for q, vi in zip(Q, v)]
    basis = linalg.hnf_rows(gens)
    assert len(basis) == n
    B = linalg.transpose(basis)  # columns are basis vectors
    rays = []
    for g in gens:
        x = linalg.solve_rational(B, g)
        assert all(t.denominator == 1 for t in x)
        rays.append(tuple(int(t) for t in x))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    fan = validate(Fan.from_data(n, rays, cones))
    assert not any(linalg.matvec(fan.ray_matrix(), Q))
    return fan


def recover_weights(fan: Fan) -> Weights:
    """Sorted weights of a fan with ``dim + 1`` rays, from its unique relation."""
    if fan.n_rays != fan.dim + 1:
        raise ValueError(f"expected {fan.dim + 1} rays, got {fan.n_rays}")
    return tuple(sorted(relation_weights(fan)))


def relation_weights(fan: Fan) -> Weights:
    """The primitive positive relation among the rays, in ray order."""
    kernel = linalg.integer_kernel(fan.ray_matrix())
    if len(kernel) != 1:
        raise ValueError(f"relation among the rays is not unique (kernel rank {len(kernel)})")
    (k,) = kernel
    if all(x < 0 for x in k):
        k = tuple(-x for x in k)
    if not all(x > 0 for x in k):
        raise ValueError(f"relation {k} is not strictly positive")
    return k
