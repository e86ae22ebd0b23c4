"""Find every noncommutative ring with unity of order at most 9.

Exactly one class turns up; the script prints its zero divisor profile and
checks it against the upper-triangular 2x2 matrices over Z_2.
"""
import argparse
from dataclasses import dataclass

from finring import ring_core as rc
from finring.constructions import compile_spec
from finring.enumeration import EnumerationConfig, enumerate_rings
from finring.zd_analysis import profile

UPPER = "closure(matrix:zmod:2:2; E11,E12,E22)"


@dataclass
class PropositionConfig:
    max_order: int = 9
    workers: int = 1


def run(cfg: PropositionConfig) -> list:
    enum_cfg = EnumerationConfig(max_depth=max(cfg.max_order, 8), workers=cfg.workers)
    found = []
    for order in range(2, cfg.max_order + 1):
        found += enumerate_rings(order, unital_only=True, commutative=False, config=enum_cfg).rings
    return found


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=9)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    found = run(PropositionConfig(args.max_order, args.workers))
    print(f"{len(found)} noncommutative unital class(es) of order <= {args.max_order}")
    upper = compile_spec(UPPER)
    for R in found:
        zd = profile(R)
        iso = rc.is_isomorphic(R, upper)
        print(f"  {R.name}: order {R.order}, additive type {rc.additive_type(R)}, "
              f"n = {zd.n}, m_L = {zd.m_left}, m_R = {zd.m_right}, "
              f"upper triangular: {'yes' if iso else 'no'}")


if __name__ == "__main__":
    main()
