"""Check every bound and proof trace on all rings up to a given order.

Prints the claim table, the branch counts and the rings where a bound is tight.
"""
import argparse
import json
from dataclasses import dataclass

from finring.cli import corpus
from finring.enumeration import EnumerationConfig
from finring.theorem import verify_corpus


@dataclass
class VerifyConfig:
    max_order: int = 6
    workers: int = 1
    builtin: bool = True


def run(cfg: VerifyConfig):
    items = corpus(cfg.max_order, EnumerationConfig(max_depth=max(cfg.max_order, 8)),
                   builtin=cfg.builtin)
    return verify_corpus(items, workers=cfg.workers)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=VerifyConfig.max_order)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--no-builtin", action="store_true")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    summary = run(VerifyConfig(args.max_order, args.workers, not args.no_builtin))
    data = summary.to_dict()
    if args.json:
        print(json.dumps(data, indent=2))
        return
    print(f"{data['rings']} rings checked")
    for claim, row in data["claims"].items():
        print(f"  {claim:20s} {row['status']:8s} checked={row['checked']} failed={row['failed']}")
    print("branches:", data["branches"])
    for case in data["equality_cases"]:
        print(f"  tight: {case['ring_spec']} (order {case['order']}, n = {case['n']})")


if __name__ == "__main__":
    main()
