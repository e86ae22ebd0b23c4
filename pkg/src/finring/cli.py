"""Command-line front end: ``finring analyze|trace|enumerate|verify``.

Exit codes: 0 success, 1 claim failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .constructions import (DEFAULT_CAP, CapExceeded, ConstructionError, SpecParseError,
                            compile_spec)
from .enumeration import (DEFAULT_DEPTH, HARD_LIMIT, DepthExceeded, EnumerationConfig,
                          classify, emit, enumerate_rings)
from .ring_core import (FiniteRing, NotClosed, RingAxiomError, additive_type, characteristic,
                        find_unity, is_commutative)
from .theorem import (CLAIMS, InternalCheckFailed, NoZeroDivisors, VerificationFailure,
                      bound_report, proposition_check, theorem_trace, verify_corpus)
from .zd_analysis import NotALeftZeroDivisor, coset_partition, profile

EXIT_OK, EXIT_CLAIM, EXIT_INPUT = 0, 1, 2

INPUT_ERRORS = (SpecParseError, ConstructionError, CapExceeded, RingAxiomError, NotClosed,
                DepthExceeded, NoZeroDivisors, NotALeftZeroDivisor, OSError)

BUILTIN_CORPUS = (
    "zmod:4", "zmod:6", "zmod:9", "zmod:25", "zmod:49", "zmod:12",
    "closure(matrix:zmod:2:2; E11,E12,E22)",
    "closure(matrix:zmod:2:2; E11,E21)",
    "closure(matrix:zmod:2:2; E11,E12)",
    "matrix:zmod:2:2",
    "poly:2:x^2", "poly:3:x^2", "poly:2:x^2+x+1", "poly:2:x^3",
    "product(zmod:2, zmod:2)", "product(zmod:2, zmod:3)", "product(zmod:4, zmod:4)",
    "zeromul:4", "zeromul:2,2", "zeromul:2,2,2", "zeromul:3,3",
)

PROPOSITION_REFERENCE = "closure(matrix:zmod:2:2; E11,E12,E22)"


@dataclass
class Report:
    """Everything ``analyze`` and ``trace`` know about one ring."""

    command: str
    input_spec: str
    ring: dict
    profile: dict
    bounds: dict
    trace: Optional[dict] = None
    partition: Optional[dict] = None
    message: Optional[str] = None
    timing: Optional[dict] = None
    tool: str = "finring"
    version: str = __version__

    def to_dict(self) -> dict:
        d = {"tool": self.tool, "version": self.version, "command": self.command,
             "input_spec": self.input_spec, "ring": self.ring, "profile": self.profile,
             "bounds": self.bounds}
        for key in ("trace", "partition", "message", "timing"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(command=d["command"], input_spec=d["input_spec"], ring=d["ring"],
                   profile=d["profile"], bounds=d["bounds"], trace=d.get("trace"),
                   partition=d.get("partition"), message=d.get("message"),
                   timing=d.get("timing"), tool=d["tool"], version=d["version"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        r, p, b = self.ring, self.profile, self.bounds
        lines = [
            f"ring: {self.input_spec}",
            f"order: {r['order']}",
            f"additive type: {r['additive_type']}",
            f"characteristic: {r['characteristic']}",
            f"unity: {r['unity'] if r['unity'] is not None else 'none'}",
            f"commutative: {'yes' if r['commutative'] else 'no'}",
            f"left zero divisors: {p['left']} (m_left = {p['m_left']})",
            f"right zero divisors: {p['right']} (m_right = {p['m_right']})",
            f"two-sided zero divisors: {p['two_sided']} (n = {p['n']})",
        ]
        for key, label in (("koh_left_bound", "left one-sided bound"),
                           ("koh_right_bound", "right one-sided bound"),
                           ("ganesan_bound", "combined bound"),
                           ("hirano_bound", "two-sided bound")):
            if b[key] is not None:
                short = key[:-len("_bound")]
                verdict = "holds" if b["holds"][short] else "FAILS"
                if b["equality"][short]:
                    verdict += ", equality"
                lines.append(f"{label}: {r['order']} <= {b[key]} ({verdict})")
        if self.message:
            lines.append(self.message)
        if self.partition:
            lines += _partition_lines(self.partition, "partition")
        if self.trace:
            t = self.trace
            lines.append(f"trace branch: {t['branch']}")
            if t["branch"] == "KOH_LEFT":
                lines.append(f"  c = {t['c']}, d = {t['d']}")
                lines += _partition_lines(t["partition"], "  A")
            else:
                lines.append(f"  a = {t['a']}, b = {t['b']}")
                lines.append(f"  z*a = {t['z_times_a']}")
                lines.append(f"  Ra = {t['Ra']} (|Ra| = {t['Ra_order']})")
                lines.append(f"  right zero divisors of Ra: {t['Ra_right_zero_divisors']}")
            for s in t["steps"]:
                lines.append(f"  [{'ok' if s['ok'] else 'FAIL'}] {s['step']}")
        if self.timing is not None:
            lines.append(f"time: {self.timing['seconds']:.3f}s")
        return "\n".join(lines)


def _partition_lines(part: dict, prefix: str) -> list[str]:
    lines = [f"{prefix} c = {part['c']}: |A0| = {part['A0_size']}, classes = {part['class_count']}",
             f"{prefix}0 = {part['A0']}"]
    for cls in part["classes"]:
        lines.append(f"{prefix}[{cls['target']}] = {cls['members']}")
    return lines


def build_report(command: str, spec: str, R: FiniteRing, with_trace: bool = False,
                 partition_at: Optional[int] = None, timing: bool = True,
                 started: Optional[float] = None) -> Report:
    started = time.perf_counter() if started is None else started
    zd = profile(R)
    unity = find_unity(R)
    rep = Report(
        command=command,
        input_spec=spec,
        ring={"order": R.order, "name": R.name, "unity": unity,
              "commutative": is_commutative(R), "characteristic": characteristic(R),
              "additive_type": additive_type(R)},
        profile=zd.to_dict(),
        bounds=bound_report(R, zd).to_dict(),
    )
    if zd.n == 0 and zd.m_left == 0:
        rep.message = "no zero divisors; theorem vacuous"
    if with_trace:
        rep.trace = theorem_trace(R, zd).to_dict()
    if partition_at is not None:
        c = zd.left[0] if partition_at < 0 and zd.left else partition_at
        rep.partition = coset_partition(R, c, "left", zd).to_dict()
    if timing:
        rep.timing = {"seconds": round(time.perf_counter() - started, 6)}
    return rep


# ------------------------------------------------------------------ commands

def cmd_analyze(args) -> int:
    t0 = time.perf_counter()
    R = compile_spec(args.ring, cap=args.max_ring_order)
    rep = build_report("analyze", args.ring, R, with_trace=args.trace,
                       partition_at=args.partition, timing=not args.no_timing, started=t0)
    print(rep.to_json() if args.json else rep.to_text())
    return EXIT_OK


def cmd_trace(args) -> int:
    t0 = time.perf_counter()
    R = compile_spec(args.ring, cap=args.max_ring_order)
    rep = build_report("trace", args.ring, R, with_trace=True, timing=not args.no_timing,
                       started=t0)
    print(rep.to_json() if args.json else rep.to_text())
    return EXIT_OK


def _depth(args, needed: int) -> int:
    if needed > DEFAULT_DEPTH and not args.deep:
        raise DepthExceeded(f"order {needed} is beyond the default depth {DEFAULT_DEPTH}; "
                            "pass --deep to run it (cost grows quickly)")
    return HARD_LIMIT if args.deep else DEFAULT_DEPTH


def cmd_enumerate(args) -> int:
    t0 = time.perf_counter()
    config = EnumerationConfig(max_depth=_depth(args, args.order), workers=args.workers)
    commutative = True if args.commutative else (False if args.noncommutative else None)
    res = enumerate_rings(args.order, unital_only=args.unital, commutative=commutative,
                          config=config)
    rows = classify(args.order, result=res)
    if args.emit_dir:
        emit(res, args.emit_dir, rows)
    out = dict(res.stats(), classes=rows)
    if not args.no_timing:
        out["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    if args.json:
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        c = out["counts"]
        print(f"order {args.order}: {c['total']} rings up to isomorphism "
              f"({c['unital']} unital, {c['commutative']} commutative, "
              f"{c['noncommutative_unital']} noncommutative unital); {c['emitted']} after filters")
        for row in rows:
            print(f"  {row['name']}  type={row['additive_type']}  "
                  f"unital={'y' if row['unital'] else 'n'}  comm={'y' if row['commutative'] else 'n'}  "
                  f"m_left={row['m_left']} m_right={row['m_right']} n={row['n']}")
        if "timing" in out:
            print(f"time: {out['timing']['seconds']:.3f}s")
    return EXIT_OK


def corpus(max_order: int, config: EnumerationConfig, cap: int = DEFAULT_CAP,
           builtin: bool = True) -> list[tuple[str, FiniteRing]]:
    items = []
    for order in range(1, max_order + 1):
        for R in enumerate_rings(order, config=config).rings:
            items.append((R.name, R))
    if builtin:
        items += [(spec, compile_spec(spec, cap=cap)) for spec in BUILTIN_CORPUS]
    return items


def run_proposition(config: EnumerationConfig, cap: int = DEFAULT_CAP) -> dict:
    found = []
    for order in range(2, 10):
        res = enumerate_rings(order, unital_only=True, commutative=False,
                              config=EnumerationConfig(max_depth=max(9, config.max_depth),
                                                       workers=config.workers))
        found += [(R.name, R) for R in res.rings]
    return proposition_check(found, compile_spec(PROPOSITION_REFERENCE, cap=cap))


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    config = EnumerationConfig(max_depth=_depth(args, args.max_order), workers=args.workers)
    out: dict = {"tool": "finring", "version": __version__, "max_order": args.max_order}
    status = EXIT_OK
    try:
        summary = verify_corpus(corpus(args.max_order, config, args.max_ring_order,
                                       builtin=not args.no_builtin), workers=args.workers)
        out.update(summary.to_dict())
    except VerificationFailure as exc:
        out["failure"] = exc.to_dict()
        out["claims"] = {c: {"status": "fail" if c == exc.claim else "unknown"} for c in CLAIMS}
        status = EXIT_CLAIM
    if status == EXIT_OK:
        if args.include_proposition:
            prop = run_proposition(config, args.max_ring_order)
            out["claims"]["CLAIM_PROPOSITION"] = prop
            if prop["status"] != "pass":
                status = EXIT_CLAIM
        else:
            out["claims"]["CLAIM_PROPOSITION"] = {"status": "skipped"}
    if not args.no_timing:
        out["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    if args.json:
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(f"verified {out.get('rings', 0)} rings (orders 1..{args.max_order} plus built-ins)")
        for claim in CLAIMS:
            info = out["claims"].get(claim, {})
            extra = f" (checked {info['checked']})" if "checked" in info else ""
            print(f"{claim}: {info.get('status', 'unknown')}{extra}")
        if "branches" in out:
            print("branches: " + ", ".join(f"{k}={v}" for k, v in out["branches"].items()))
            for case in out["equality_cases"]:
                print(f"equality: {case['ring_spec']} order={case['order']} n={case['n']}")
        if "failure" in out:
            print("counterexample: " + json.dumps(out["failure"]), file=sys.stderr)
        if "timing" in out:
            print(f"time: {out['timing']['seconds']:.3f}s")
    return status


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--no-timing", action="store_true", help="omit timing for byte-stable output")
    common.add_argument("--max-ring-order", type=int, default=DEFAULT_CAP, metavar="N",
                        help=f"cap on constructed ring order (default {DEFAULT_CAP})")

    parser = argparse.ArgumentParser(prog="finring", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"finring {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="zero-divisor report for one ring")
    p.add_argument("--ring", required=True, help='construction, e.g. "zmod:9"')
    p.add_argument("--trace", action="store_true", help="include the checked proof trace")
    p.add_argument("--partition", nargs="?", type=int, const=-1, default=None, metavar="C",
                   help="include the coset partition for C (default: smallest left zero divisor)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("trace", parents=[common], help="checked proof trace for one ring")
    p.add_argument("--ring", required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("enumerate", parents=[common], help="all rings of one order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--unital", action="store_true")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--commutative", action="store_true")
    g.add_argument("--noncommutative", action="store_true")
    p.add_argument("--up-to-iso", action="store_true",
                   help="list isomorphism classes (always the case; accepted for explicitness)")
    p.add_argument("--emit-dir", metavar="PATH")
    p.add_argument("--deep", action="store_true", help=f"allow orders above {DEFAULT_DEPTH}")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", parents=[common], help="check every claim over a corpus")
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--include-proposition", action="store_true",
                   help="also enumerate unital rings of orders 2..9 and check the proposition")
    p.add_argument("--no-builtin", action="store_true", help="skip the built-in constructions")
    p.add_argument("--deep", action="store_true", help=f"allow orders above {DEFAULT_DEPTH}")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalCheckFailed as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CLAIM


if __name__ == "__main__":
    sys.exit(main())
