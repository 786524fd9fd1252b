"""Verdict table for absolute weighted projective spaces.

For each well-formed weight tuple and prime, print the verdict, and for the
negative cases check that the blow-up repair certifies.

    python scripts/wps_table.py --max-prod 30 --primes 2 3 5
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from campana_toric.oracle import verify_sigma_m_structure
from campana_toric.witness import Status, wps_repair, wps_verdict
from campana_toric.wps import well_formed


@dataclass
class TableConfig:
    min_len: int = 3
    max_len: int = 4
    max_prod: int = 30
    primes: list[int] = field(default_factory=lambda: [2, 3, 5])
    sigma_bound: int = 8


def weight_tuples(cfg: TableConfig):
    def grow(prefix, prod):
        if len(prefix) >= cfg.min_len and well_formed(prefix):
            yield prefix
        if len(prefix) == cfg.max_len:
            return
        for q in range(prefix[-1] if prefix else 1, cfg.max_prod // prod + 1):
            yield from grow(prefix + (q,), prod * q)

    yield from grow((), 1)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-len", type=int, default=TableConfig.max_len)
    ap.add_argument("--max-prod", type=int, default=TableConfig.max_prod)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--sigma-bound", type=int, default=TableConfig.sigma_bound)
    a = ap.parse_args()
    cfg = TableConfig(max_len=a.max_len, max_prod=a.max_prod, primes=a.primes, sigma_bound=a.sigma_bound)

    header = ["weights", "sigma_m"] + [f"p={p}" for p in cfg.primes]
    print("  ".join(f"{h:<20}" for h in header))
    for Q in weight_tuples(cfg):
        row = [str(Q), str(verify_sigma_m_structure(Q, cfg.sigma_bound))]
        for p in cfg.primes:
            v = wps_verdict(Q, p)
            cell = v.status.value
            if v.status is Status.NOT_SCRC:
                _, _, cert = wps_repair(Q, p)
                cell += "/repaired" if cert.certified else "/repair-failed"
            row.append(cell)
        print("  ".join(f"{c:<20}" for c in row))


if __name__ == "__main__":
    main()
