"""Count rings of each small order up to isomorphism and time the search.

    python3 scripts/enumeration_counts.py --max-order 9 --workers 4
"""
import argparse
import json
import time
from dataclasses import asdict, dataclass

from finring.enumeration import HARD_LIMIT, EnumerationConfig, default_workers, enumerate_rings


@dataclass
class CountsConfig:
    max_order: int = 8
    workers: int = 1
    out: str = ""


def run(cfg: CountsConfig) -> list[dict]:
    enum_cfg = EnumerationConfig(max_depth=max(cfg.max_order, 8), workers=cfg.workers)
    rows = []
    for order in range(1, cfg.max_order + 1):
        t0 = time.perf_counter()
        res = enumerate_rings(order, config=enum_cfg)
        row = res.stats()
        row["seconds"] = round(time.perf_counter() - t0, 3)
        rows.append(row)
        c = row["counts"]
        print(f"order {order:2d}: {c['total']:3d} rings, {c['unital']:2d} unital, "
              f"{c['commutative']:3d} commutative, {c['noncommutative_unital']} noncomm. unital "
              f"[{row['search']['candidates_examined']} candidates, {row['seconds']:.2f} s]")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=CountsConfig.max_order,
                    choices=range(1, HARD_LIMIT + 1), metavar="N")
    ap.add_argument("--workers", type=int, default=1, help=f"0 means {default_workers()}")
    ap.add_argument("--out", default="", help="write the rows as JSON here")
    args = ap.parse_args()
    cfg = CountsConfig(args.max_order, args.workers or default_workers(), args.out)
    rows = run(cfg)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
