"""Sweep random complete surface fans and tally which route certifies them.

    python scripts/surface_sweep.py --fans 500 --primes 2 3 5 --seed 1
"""

from __future__ import annotations

import argparse
import json
import random
from collections import Counter
from dataclasses import asdict, dataclass, field

from campana_toric.campana import CampanaOrbifold
from campana_toric.samples import random_surface_fan
from campana_toric.witness import crit_sing, decide, witness_smooth, witness_surface


@dataclass
class SweepConfig:
    fans: int = 200
    primes: list[int] = field(default_factory=lambda: [2, 3, 5])
    max_rays: int = 8
    box: int = 10
    seed: int = 0


def sweep(cfg: SweepConfig) -> dict:
    rng = random.Random(cfg.seed)
    tallies = {p: Counter() for p in cfg.primes}
    for _ in range(cfg.fans):
        fan = random_surface_fan(rng, cfg.max_rays, cfg.box)
        orb = CampanaOrbifold.absolute(fan)
        for p in cfg.primes:
            t = tallies[p]
            t["smooth"] += witness_smooth(orb, p).certified
            held = crit_sing(orb, p).certified
            t["crit_sing"] += held
            surface = witness_surface(orb, p).certified
            t["surface"] += surface
            t["surface_without_crit_sing"] += surface and not held
            t[decide(orb, p).status.value] += 1
    return {"config": asdict(cfg), "per_prime": {str(p): dict(t) for p, t in tallies.items()}}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fans", type=int, default=SweepConfig.fans)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--max-rays", type=int, default=SweepConfig.max_rays)
    ap.add_argument("--box", type=int, default=SweepConfig.box)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    a = ap.parse_args()
    cfg = SweepConfig(a.fans, a.primes, a.max_rays, a.box, a.seed)
    print(json.dumps(sweep(cfg), indent=2))


if __name__ == "__main__":
    main()
