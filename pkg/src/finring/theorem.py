"""Bound checks and checked proof traces for the zero-divisor bound |R| <= (n+1)^2.

Three families of bounds are evaluated on a finite ring:

* one-sided (Koh): |R| <= (m+1)^2 where m counts left (or right) zero divisors;
* combined (Ganesan): |R| <= min of the two one-sided bounds;
* two-sided (Hirano): |R| <= (n+1)^2 where n counts two-sided zero divisors.

:func:`theorem_trace` rebuilds the two-case argument for the two-sided bound on a
concrete ring and checks every step, so a returned trace is a certificate.
"""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .ring_core import FiniteRing, canonical_form, find_unity, induced_subring, is_commutative
from .zd_analysis import (
    CosetPartition,
    PartitionCheckFailed,
    ZeroDivisorProfile,
    coset_partition,
    is_right_cancellable,
    lemma2_counterexample,
    profile,
)

KOH_LEFT = "KOH_LEFT"
RA_CONSTRUCTION = "RA_CONSTRUCTION"

CLAIMS = (
    "CLAIM_LEMMA1_L",
    "CLAIM_LEMMA1_R",
    "CLAIM_GANESAN",
    "CLAIM_HIRANO",
    "CLAIM_LEMMA2",
    "CLAIM_KOH_EQ",
    "CLAIM_PROPOSITION",
)


class NoZeroDivisors(ValueError):
    pass


class InternalCheckFailed(AssertionError):
    def __init__(self, step: str, witness=()):
        self.step = step
        self.witness = witness
        super().__init__(f"trace step {step!r} failed (witness {witness!r})")


class VerificationFailure(AssertionError):
    """A claim failed on a specific ring; carries the ring for reproduction."""

    def __init__(self, claim: str, label: str, ring: FiniteRing, detail: str):
        self.claim = claim
        self.label = label
        self.ring = ring
        self.detail = detail
        super().__init__(f"{claim} failed on {label}: {detail}")

    def to_dict(self) -> dict:
        return {"claim": self.claim, "ring_spec": self.label, "detail": self.detail,
                "ring": self.ring.to_dict()}


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


# ------------------------------------------------------------------ bounds

@dataclass(frozen=True)
class BoundReport:
    order: int
    m_left: int
    m_right: int
    n: int

    @property
    def koh_left_bound(self) -> Optional[int]:
        return (self.m_left + 1) ** 2 if self.m_left > 0 else None

    @property
    def koh_right_bound(self) -> Optional[int]:
        return (self.m_right + 1) ** 2 if self.m_right > 0 else None

    @property
    def ganesan_bound(self) -> Optional[int]:
        if self.koh_left_bound is None or self.koh_right_bound is None:
            return None
        return min(self.koh_left_bound, self.koh_right_bound)

    @property
    def hirano_bound(self) -> Optional[int]:
        return (self.n + 1) ** 2 if self.n > 0 else None

    def bounds(self) -> dict[str, int]:
        out = {"koh_left": self.koh_left_bound, "koh_right": self.koh_right_bound,
               "ganesan": self.ganesan_bound, "hirano": self.hirano_bound}
        return {k: v for k, v in out.items() if v is not None}

    @property
    def holds(self) -> dict[str, bool]:
        return {k: self.order <= v for k, v in self.bounds().items()}

    @property
    def equality(self) -> dict[str, bool]:
        return {k: self.order == v for k, v in self.bounds().items()}

    def ordering_ok(self) -> bool:
        """hirano <= ganesan <= each one-sided bound, where defined."""
        b = self.bounds()
        ok = True
        if "ganesan" in b:
            ok &= b["ganesan"] <= b["koh_left"] and b["ganesan"] <= b["koh_right"]
            if "hirano" in b:
                ok &= b["hirano"] <= b["ganesan"]
        return bool(ok)

    def to_dict(self) -> dict:
        return {
            "order": self.order, "m_left": self.m_left, "m_right": self.m_right, "n": self.n,
            "koh_left_bound": self.koh_left_bound, "koh_right_bound": self.koh_right_bound,
            "ganesan_bound": self.ganesan_bound, "hirano_bound": self.hirano_bound,
            "holds": self.holds, "equality": self.equality,
        }


def bound_report(R: FiniteRing, zd: Optional[ZeroDivisorProfile] = None) -> BoundReport:
    zd = zd or profile(R)
    return BoundReport(R.order, zd.m_left, zd.m_right, zd.n)


def koh_equality_check(R: FiniteRing, side: str = "left",
                       zd: Optional[ZeroDivisorProfile] = None) -> bool:
    """If |R| = (m+1)^2 for the one-sided count m, then m+1 must be a prime power."""
    zd = zd or profile(R)
    m = zd.m_left if side == "left" else zd.m_right
    if m == 0 or R.order != (m + 1) ** 2:
        return True
    return is_prime_power(m + 1)


# ------------------------------------------------------------------ trace

@dataclass
class TheoremTrace:
    branch: str
    order: int
    n: int
    m_left: int
    steps: list[tuple[str, bool]] = field(default_factory=list)
    # KOH_LEFT
    c: Optional[int] = None
    d: Optional[int] = None
    partition: Optional[CosetPartition] = None
    # RA_CONSTRUCTION
    a: Optional[int] = None
    b: Optional[int] = None
    z_times_a: Optional[tuple[int, ...]] = None
    ra_elements: Optional[tuple[int, ...]] = None
    ra_order: Optional[int] = None
    ra_right_zero_divisors: Optional[tuple[int, ...]] = None
    ra_partition: Optional[CosetPartition] = None
    bijection: Optional[tuple[int, ...]] = None

    def to_dict(self) -> dict:
        d = {"branch": self.branch, "order": self.order, "n": self.n, "m_left": self.m_left,
             "steps": [{"step": s, "ok": ok} for s, ok in self.steps]}
        if self.branch == KOH_LEFT:
            d.update(c=self.c, d=self.d, partition=self.partition.to_dict())
        else:
            d.update(a=self.a, b=self.b, z_times_a=list(self.z_times_a),
                     Ra=list(self.ra_elements), Ra_order=self.ra_order,
                     Ra_right_zero_divisors=list(self.ra_right_zero_divisors),
                     Ra_partition=self.ra_partition.to_dict(),
                     bijection=list(self.bijection))
        return d


class _Steps:
    def __init__(self, trace: TheoremTrace):
        self.trace = trace

    def __call__(self, step: str, ok, witness=()):
        ok = bool(ok)
        self.trace.steps.append((step, ok))
        if not ok:
            raise InternalCheckFailed(step, witness)


def theorem_trace(R: FiniteRing, zd: Optional[ZeroDivisorProfile] = None) -> TheoremTrace:
    """Replay the two-case argument for |R| <= (n+1)^2 on ``R``, checking each step.

    Case KOH_LEFT: every left zero divisor is two-sided, so the one-sided bound
    applies through the coset partition of the smallest left zero divisor.
    Case RA_CONSTRUCTION: take the smallest left zero divisor ``a`` that is not a
    right zero divisor; then x -> x*a is a bijection of R onto Ra, and the right
    zero divisors of Ra are exactly the products z*a, one for each two-sided z.
    """
    zd = zd or profile(R)
    if zd.n == 0 and zd.m_left == 0:
        raise NoZeroDivisors("ring has no zero divisors; the bound is vacuous")
    left, right, two = set(zd.left), set(zd.right), set(zd.two_sided)
    only_left = sorted(left - right)
    if not only_left or zd.n == 0:
        trace = TheoremTrace(KOH_LEFT, R.order, zd.n, zd.m_left)
        check = _Steps(trace)
        check("left_zero_divisors_are_two_sided", left <= two or zd.n == 0, tuple(only_left))
        c = zd.left[0]
        d = int(np.nonzero(R.mul[c, 1:] == 0)[0][0]) + 1
        trace.c, trace.d = c, d
        check("cd_is_zero", R.mul[c, d] == 0 and d != 0, (c, d))
        # (x c) d = x (c d) = 0, so every product x c is 0 or a left zero divisor
        targets = set(R.mul[:, c].tolist())
        check("xc_in_zero_or_left_zd", targets <= left | {0}, tuple(sorted(targets - left - {0})))
        try:
            trace.partition = coset_partition(R, c, "left", zd)
        except PartitionCheckFailed as exc:
            check(f"partition_{exc.check}", False, exc.witness)
        check("partition_invariants", True)
        check("koh_bound", R.order <= (zd.m_left + 1) ** 2, (R.order, zd.m_left))
        check("theorem_bound", R.order <= (zd.n + 1) ** 2 or zd.n == 0, (R.order, zd.n))
        return trace

    trace = TheoremTrace(RA_CONSTRUCTION, R.order, zd.n, zd.m_left)
    check = _Steps(trace)
    a = only_left[0]
    b = int(np.nonzero(R.mul[a, 1:] == 0)[0][0]) + 1
    trace.a, trace.b = a, b
    check("ab_is_zero", R.mul[a, b] == 0, (a, b))
    check("a_not_right_zero_divisor", a not in right, (a,))
    check("a_right_cancellable", is_right_cancellable(R, a), (a,))
    za = tuple(int(R.mul[z, a]) for z in zd.two_sided)
    trace.z_times_a = za
    check("za_pairwise_distinct", len(set(za)) == len(za), za)
    check("za_two_sided", set(za) <= two, tuple(sorted(set(za) - two)))
    ra = sorted(set(R.mul[:, a].tolist()))
    trace.ra_elements = tuple(int(x) for x in ra)
    S, emb = induced_subring(R, ra)
    trace.ra_order = S.order
    check("Ra_is_subring", True)
    check("Ra_contains_all_two_sided", two <= set(ra), tuple(sorted(two - set(ra))))
    ba = int(R.mul[b, a])
    check("ba_nonzero", ba != 0, (b, a))
    # (xa)(ba) = x(ab)a = 0: a right zero divisor of Ra is also a left one
    zs = profile(S)
    ra_right = tuple(sorted(emb[i] for i in zs.right))
    trace.ra_right_zero_divisors = ra_right
    check("Ra_right_zd_killed_by_ba", all(R.mul[x, ba] == 0 for x in ra_right), ra_right)
    check("Ra_right_zd_equal_za", set(ra_right) == set(za), (ra_right, za))
    try:
        trace.ra_partition = coset_partition(S, zs.right[0], "right", zs)
    except PartitionCheckFailed as exc:
        check(f"Ra_partition_{exc.check}", False, exc.witness)
    check("Ra_koh_right_bound", S.order <= (zs.m_right + 1) ** 2, (S.order, zs.m_right))
    bij = tuple(int(v) for v in R.mul[:, a])
    trace.bijection = bij
    check("x_to_xa_injective", len(set(bij)) == R.order, (a,))
    check("Ra_order_equals_R_order", S.order == R.order, (S.order, R.order))
    check("theorem_bound", R.order <= (zd.n + 1) ** 2, (R.order, zd.n))
    return trace


# ------------------------------------------------------------------ corpus

@dataclass
class RingResult:
    label: str
    order: int
    m_left: int
    m_right: int
    n: int
    unital: bool
    commutative: bool
    branch: Optional[str]
    equality: dict
    key: bytes


@dataclass
class CorpusSummary:
    rings: int = 0
    claims: dict = field(default_factory=lambda: {c: {"checked": 0, "failed": 0} for c in CLAIMS[:-1]})
    branches: Counter = field(default_factory=Counter)
    equality_cases: list = field(default_factory=list)
    results: list = field(default_factory=list)

    def merge(self, other: "CorpusSummary") -> "CorpusSummary":
        out = CorpusSummary(self.rings + other.rings)
        for c in out.claims:
            for k in ("checked", "failed"):
                out.claims[c][k] = self.claims[c][k] + other.claims[c][k]
        out.branches = self.branches + other.branches
        out.results = sorted(self.results + other.results, key=lambda r: (r.order, r.key))
        out.equality_cases = [
            {"ring_spec": r.label, "order": r.order, "n": r.n}
            for r in out.results if r.equality.get("hirano")
        ]
        return out

    def to_dict(self) -> dict:
        return {
            "rings": self.rings,
            "claims": {c: dict(v, status="pass" if v["failed"] == 0 else "fail")
                       for c, v in self.claims.items()},
            "branches": {KOH_LEFT: self.branches.get(KOH_LEFT, 0),
                         RA_CONSTRUCTION: self.branches.get(RA_CONSTRUCTION, 0),
                         "vacuous": self.branches.get("vacuous", 0)},
            "equality_cases": self.equality_cases,
        }


def _fail(claim: str, label: str, R: FiniteRing, detail: str):
    raise VerificationFailure(claim, label, R, detail)


def verify_ring(label: str, R: FiniteRing) -> CorpusSummary:
    """Run every per-ring claim on ``R``; raises :class:`VerificationFailure` on the first failure."""
    s = CorpusSummary(rings=1)
    zd = profile(R)
    rep = bound_report(R, zd)

    def tick(claim):
        s.claims[claim]["checked"] += 1

    # one-sided bounds, checked through the coset partition of every zero divisor
    for side, members, claim, key in (("left", zd.left, "CLAIM_LEMMA1_L", "koh_left"),
                                      ("right", zd.right, "CLAIM_LEMMA1_R", "koh_right")):
        if not members:
            continue
        tick(claim)
        if not rep.holds[key]:
            _fail(claim, label, R, f"|R|={R.order} > {rep.bounds()[key]}")
        for c in members:
            try:
                coset_partition(R, c, side, zd)
            except PartitionCheckFailed as exc:
                _fail(claim, label, R, f"coset partition at c={c}: {exc}")
    if rep.ganesan_bound is not None:
        tick("CLAIM_GANESAN")
        if not rep.holds["ganesan"] or not rep.ordering_ok():
            _fail("CLAIM_GANESAN", label, R, f"bounds {rep.bounds()} for |R|={R.order}")
    if zd.n > 0:
        tick("CLAIM_HIRANO")
        if not rep.holds["hirano"]:
            _fail("CLAIM_HIRANO", label, R, f"|R|={R.order} > {rep.hirano_bound}")
        try:
            trace = theorem_trace(R, zd)
        except InternalCheckFailed as exc:
            _fail("CLAIM_HIRANO", label, R, str(exc))
        s.branches[trace.branch] += 1
    else:
        s.branches["vacuous"] += 1
    tick("CLAIM_LEMMA2")
    bad = lemma2_counterexample(R, zd)
    if bad is not None:
        _fail("CLAIM_LEMMA2", label, R, f"{bad[0]}-sided mismatch at element {bad[1]}")
    for side, m in (("left", zd.m_left), ("right", zd.m_right)):
        if m > 0:
            tick("CLAIM_KOH_EQ")
            if not koh_equality_check(R, side, zd):
                _fail("CLAIM_KOH_EQ", label, R, f"{side} equality with m+1={m + 1} not a prime power")
    s.results.append(RingResult(label, R.order, zd.m_left, zd.m_right, zd.n,
                                find_unity(R) is not None, is_commutative(R),
                                None if zd.n == 0 else trace.branch, rep.equality,
                                canonical_form(R)))
    if rep.equality.get("hirano"):
        s.equality_cases.append({"ring_spec": label, "order": R.order, "n": zd.n})
    return s


def _verify_item(item):
    return verify_ring(*item)


def verify_corpus(rings: Iterable[tuple[str, FiniteRing]], workers: int = 1) -> CorpusSummary:
    """Check all per-ring claims over ``(label, ring)`` pairs and merge the results."""
    items = list(rings)
    total = CorpusSummary()
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_verify_item, items))
    else:
        parts = [verify_ring(label, R) for label, R in items]
    for part in parts:
        total = total.merge(part)
    return total


def proposition_check(unital_noncommutative: list[tuple[str, FiniteRing]],
                      reference: FiniteRing) -> dict:
    """Unital noncommutative rings of order <= 9: exactly one, of order 8, with n = 5."""
    from .ring_core import is_isomorphic

    detail = {"count": len(unital_noncommutative),
              "rings": [{"ring_spec": lbl, "order": R.order, "n": profile(R).n}
                        for lbl, R in unital_noncommutative]}
    ok = len(unital_noncommutative) == 1
    if ok:
        _, R = unital_noncommutative[0]
        iso = is_isomorphic(R, reference)
        detail["isomorphic_to_reference"] = iso is not None
        ok = R.order == 8 and profile(R).n == 5 and iso is not None
    detail["status"] = "pass" if ok else "fail"
    return detail

