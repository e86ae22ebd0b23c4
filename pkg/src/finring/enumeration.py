"""Enumerate all rings of a given order up to isomorphism.

A ring is an abelian group with a bilinear associative multiplication.  On
Z_{d_1} x ... x Z_{d_k} a bilinear map is fixed by the k^2 generator products
c_ij = g_i * g_j, and it is well defined exactly when every c_ij is killed by
gcd(d_i, d_j).  Associativity on generator triples then gives associativity
everywhere, and both distributive laws hold by construction.

The search runs over structure-constant tuples.  The leading constants are
iterated in Python; the remaining ones are checked as one numpy batch, which
is filtered triple by triple so that only associative tuples survive.  Each
survivor is either in the orbit of a class already found (under additive
automorphisms) or opens a new class, whose whole orbit is then marked.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import ring_core
from .ring_core import FiniteRing, find_unity, is_commutative, validate
from .theorem import bound_report
from .zd_analysis import profile

log = logging.getLogger(__name__)

DEFAULT_DEPTH = 8
HARD_LIMIT = 15  # orders >= 16 are out of range


class DepthExceeded(ValueError):
    pass


@dataclass(frozen=True)
class GroupPresentation:
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def generators(self) -> tuple[int, ...]:
        """Indices of the standard basis elements in the mixed-radix encoding."""
        w = np.cumprod([1] + list(self.invariant_factors[:-1])) if self.rank else []
        return tuple(int(x) for x in w)

    def coords(self) -> np.ndarray:
        return ring_core.mixed_radix_coords(self.invariant_factors)

    def add_table(self) -> np.ndarray:
        return ring_core.standard_add_table(self.invariant_factors)


@dataclass(frozen=True)
class EnumerationConfig:
    max_depth: int = DEFAULT_DEPTH
    workers: int = 1
    batch_size: int = 1 << 18


@dataclass
class EnumerationResult:
    order: int
    unital_only: bool = False
    commutative: Optional[bool] = None  # None: no filter; True/False: keep only that kind
    rings: list = field(default_factory=list)
    total: int = 0  # classes before filtering
    unital: int = 0
    commutative_count: int = 0
    noncommutative_unital: int = 0
    candidates: int = 0
    pruned: int = 0
    labeled: int = 0

    def stats(self) -> dict:
        return {
            "order": self.order,
            "filters": {"unital_only": self.unital_only,
                        "commutative": {None: "any", True: "only", False: "exclude"}[self.commutative]},
            "counts": {"total": self.total, "unital": self.unital,
                       "commutative": self.commutative_count,
                       "noncommutative_unital": self.noncommutative_unital,
                       "emitted": len(self.rings)},
            "search": {"candidates_examined": self.candidates, "pruned": self.pruned,
                       "associative_labeled": self.labeled},
        }


def _factorize(n: int) -> dict[int, int]:
    return ring_core._factorize(n)


def _partitions(n: int, largest: Optional[int] = None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield [first] + rest


def abelian_groups(order: int) -> list[GroupPresentation]:
    """One presentation per isomorphism class of abelian groups of the given order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    per_prime = []
    for p, e in sorted(_factorize(order).items()):
        per_prime.append([[p ** part for part in sorted(lam)] for lam in _partitions(e)])
    out = []
    for combo in itertools.product(*per_prime):
        k = max((len(c) for c in combo), default=0)
        factors = [1] * k
        for col in combo:
            for pos, q in enumerate(col):
                factors[k - len(col) + pos] *= q
        out.append(GroupPresentation(tuple(factors)))
    return sorted(out, key=lambda g: (g.rank, g.invariant_factors))


def max_elementary_rank(order: int) -> int:
    return max(_factorize(order).values(), default=0)


def check_depth(order: int, max_depth: int = DEFAULT_DEPTH) -> None:
    if order < 1:
        raise DepthExceeded("order must be >= 1")
    if order > HARD_LIMIT or max_elementary_rank(order) >= 4:
        raise DepthExceeded(f"order {order} is outside the enumeration range "
                            f"(orders >= 16 or elementary abelian rank >= 4 are not attempted)")
    if order > max_depth:
        raise DepthExceeded(f"order {order} exceeds the configured depth {max_depth}; "
                            "raise the depth explicitly to continue")


# ------------------------------------------------------------------ search

@lru_cache(maxsize=None)
def _automorphisms(factors: tuple[int, ...]) -> np.ndarray:
    zero = ring_core.FiniteRing(
        math.prod(factors), ring_core._frozen(ring_core.standard_add_table(factors)),
        ring_core._frozen(np.zeros((math.prod(factors),) * 2, dtype=np.int64)))
    return ring_core.group_isomorphisms(zero, list(factors))


class _Search:
    """Structure-constant search on one additive group."""

    def __init__(self, group: GroupPresentation, batch_size: int):
        self.group = group
        self.d = np.asarray(group.invariant_factors, dtype=np.int64)
        self.k = group.rank
        self.coords = group.coords()
        self.weights = np.cumprod([1] + list(group.invariant_factors[:-1])).astype(np.int64) \
            if self.k else np.zeros(0, dtype=np.int64)
        self.pairs = [(i, j) for i in range(self.k) for j in range(self.k)]
        # c_ij must be killed by gcd(d_i, d_j)
        self.domains = []
        for i, j in self.pairs:
            g = math.gcd(int(self.d[i]), int(self.d[j]))
            ok = ((self.coords * g) % self.d == 0).all(axis=1)
            self.domains.append(np.nonzero(ok)[0])
        sizes = [len(D) for D in self.domains]
        self.total = math.prod(sizes)
        # split: prefix iterated in Python, suffix vectorised
        split = len(sizes)
        while split > 0 and math.prod(sizes[split - 1:]) <= batch_size:
            split -= 1
        self.split = split
        suffix = [self.domains[p] for p in range(split, len(sizes))]
        if suffix:
            grids = np.meshgrid(*suffix, indexing="ij")
            self.suffix_values = np.stack([g.ravel() for g in grids], axis=0)
        else:
            self.suffix_values = np.zeros((0, 1), dtype=np.int64)
        # int16 is ample: |entries| <= 2 k d^2 for orders below 16
        self.coords16 = self.coords.astype(np.int16)
        self.suffix_coords = np.ascontiguousarray(
            self.coords16[self.suffix_values].transpose(0, 2, 1))
        self.triples = [(i, j, l) for i in range(self.k) for j in range(self.k) for l in range(self.k)]

    def prefixes(self):
        return itertools.product(*[self.domains[p].tolist() for p in range(self.split)])

    def survivors(self, prefix: Sequence[int]) -> np.ndarray:
        """All associative constant tuples extending ``prefix``, one row per tuple."""
        k, split = self.k, self.split
        X = {}  # pair -> (k, m) coordinates; prefix entries broadcast as (k, 1)
        for p, v in enumerate(prefix):
            X[self.pairs[p]] = self.coords16[v][:, None]
        for p in range(split, len(self.pairs)):
            X[self.pairs[p]] = self.suffix_coords[p - split]
        alive = np.arange(self.suffix_values.shape[1])
        dcol = self.d[:, None].astype(np.int16)
        for i, j, l in self.triples:
            # (g_i g_j) g_l = sum_t (c_ij)_t c_tl ;  g_i (g_j g_l) = sum_t (c_jl)_t c_it
            diff = sum(X[(i, j)][t] * X[(t, l)] - X[(j, l)][t] * X[(i, t)] for t in range(k))
            ok = ((diff % dcol) == 0).all(axis=0)
            if len(ok) == 1:
                if not ok[0]:
                    alive = alive[:0]
                    break
                continue
            alive = alive[ok]
            if not len(alive):
                break
            for p in range(split, len(self.pairs)):
                key = self.pairs[p]
                X[key] = X[key][:, ok]
        out = np.empty((len(alive), len(self.pairs)), dtype=np.int64)
        if split:
            out[:, :split] = np.asarray(prefix, dtype=np.int64)[None, :split]
        if len(self.pairs) > split:
            out[:, split:] = self.suffix_values[:, alive].T
        return out

    def table(self, constants: Sequence[int]) -> np.ndarray:
        """Full multiplication table for one structure-constant tuple."""
        n = self.group.order
        acc = np.zeros((n, n, self.k), dtype=np.int64)
        for (i, j), c in zip(self.pairs, constants):
            acc += self.coords[:, None, i, None] * self.coords[None, :, j, None] * self.coords[c][None, None, :]
        return ((acc % self.d) * self.weights).sum(axis=-1) if self.k else np.zeros((n, n), dtype=np.int64)


def _survivors_worker(args):
    factors, batch_size, prefixes = args
    s = _Search(GroupPresentation(factors), batch_size)
    chunks = [s.survivors(p) for p in prefixes]
    return np.concatenate(chunks) if chunks else np.zeros((0, len(s.pairs)), dtype=np.int64)


def _search_group(group: GroupPresentation, config: EnumerationConfig):
    """Return (classes, candidates, labeled) for one additive group; classes keyed by canonical bytes."""
    s = _Search(group, config.batch_size)
    prefixes = list(s.prefixes())
    if config.workers > 1 and len(prefixes) > 1:
        step = math.ceil(len(prefixes) / (config.workers * 4))
        jobs = [(group.invariant_factors, config.batch_size, prefixes[i:i + step])
                for i in range(0, len(prefixes), step)]
        with ProcessPoolExecutor(config.workers) as pool:
            parts = list(pool.map(_survivors_worker, jobs))
        surv = np.concatenate(parts)
    else:
        surv = np.concatenate([s.survivors(p) for p in prefixes]) if prefixes else s.survivors(())

    autos = _automorphisms(group.invariant_factors)
    inv = np.empty_like(autos)
    rows = np.arange(len(autos))[:, None]
    inv[rows, autos] = np.arange(group.order)[None, :]
    gens = np.asarray(group.generators, dtype=np.int64)
    add = group.add_table()
    seen: set[tuple] = set()
    classes: dict[bytes, FiniteRing] = {}
    for row in surv:
        key = tuple(row.tolist())
        if key in seen:
            continue
        mul = s.table(row)
        # every relabelling by an additive automorphism
        orbit = inv[rows[:, :, None], mul[autos[:, :, None], autos[:, None, :]]]
        for t in orbit[:, gens][:, :, gens].reshape(len(autos), -1):
            seen.add(tuple(t.tolist()))
        flat = orbit.reshape(len(autos), -1)
        best = flat[ring_core._lexmin_rows(flat)].reshape(group.order, group.order)
        canon = ring_core.encode_tables(group.order, add, best)
        if canon not in classes:
            ring = validate(group.order, add, best)
            classes[canon] = ring.renamed(ring_name(ring, canon))
    return classes, s.total, len(surv)


def short_hash(canon: bytes) -> str:
    return hashlib.sha256(canon).hexdigest()[:12]


def ring_name(R: FiniteRing, canon: bytes) -> str:
    return f"R{R.order}_{short_hash(canon)}"


# order -> (sorted classes, candidates, labeled); results do not depend on the config
_CLASSES: dict[int, tuple] = {}


def clear_cache() -> None:
    _CLASSES.clear()


def enumerate_rings(order: int, unital_only: bool = False, commutative: Optional[bool] = None,
                    config: EnumerationConfig = EnumerationConfig()) -> EnumerationResult:
    """All rings of ``order`` up to isomorphism, sorted by canonical form, then filtered."""
    check_depth(order, config.max_depth)
    if order > DEFAULT_DEPTH:
        log.warning("enumerating order %d beyond the default depth %d", order, DEFAULT_DEPTH)
    res = EnumerationResult(order, unital_only, commutative)
    if order not in _CLASSES:
        classes: dict[bytes, FiniteRing] = {}
        candidates = labeled = 0
        for group in abelian_groups(order):
            found, total, n_labeled = _search_group(group, config)
            classes.update(found)
            candidates += total
            labeled += n_labeled
        _CLASSES[order] = ([classes[c] for c in sorted(classes)], candidates, labeled)
    everything, res.candidates, res.labeled = _CLASSES[order]
    res.pruned = res.candidates - res.labeled
    res.total = len(everything)
    for R in everything:
        u = find_unity(R) is not None
        c = is_commutative(R)
        res.unital += u
        res.commutative_count += c
        res.noncommutative_unital += u and not c
        if unital_only and not u:
            continue
        if commutative is not None and c != commutative:
            continue
        res.rings.append(R)
    return res


def classify(order: int, config: EnumerationConfig = EnumerationConfig(),
             result: Optional[EnumerationResult] = None) -> list[dict]:
    """One statistics row per isomorphism class of the given order."""
    result = result or enumerate_rings(order, config=config)
    rows = []
    for R in result.rings:
        zd = profile(R)
        rep = bound_report(R, zd)
        rows.append({
            "name": R.name,
            "order": R.order,
            "additive_type": ring_core.additive_type(R),
            "unital": find_unity(R) is not None,
            "commutative": is_commutative(R),
            "m_left": zd.m_left,
            "m_right": zd.m_right,
            "n": zd.n,
            "equality": rep.equality,
        })
    return rows


def emit(result: EnumerationResult, directory, rows: Optional[list[dict]] = None) -> Path:
    """Write one JSON ring file per class plus ``index.json``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    rows = rows if rows is not None else classify(result.order, result=result)
    for R, row in zip(result.rings, rows):
        fname = f"{R.name.split('_', 1)[1]}.json"
        ring_core.save_ring(R, out / fname)
        row["file"] = fname
    index = dict(result.stats(), classes=rows)
    with open(out / "index.json", "w") as fh:
        json.dump(index, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def default_workers() -> int:
    return max(1, min(8, (os.cpu_count() or 1)))
