"""Table-based finite rings.

A ring of order ``n`` lives on the element indices ``0..n-1``; index 0 is
always the additive identity.  Addition and multiplication are ``n x n``
integer tables.  Rings are validated once, exhaustively, and are read-only
afterwards.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

# chunk of first-operand rows per vectorised O(n^3) scan
_CHUNK_CELLS = 1 << 22


class RingAxiomError(ValueError):
    """Raised when a pair of tables fails to define a ring."""

    def __init__(self, axiom: str, witness: tuple = (), message: str = ""):
        self.axiom = axiom
        self.witness = tuple(int(w) for w in witness)
        super().__init__(message or f"{axiom} violated at {self.witness}")


class BadShape(RingAxiomError):
    def __init__(self, message: str):
        super().__init__("shape", (), message)


class NotAGroup(RingAxiomError):
    """The addition table is not an abelian group with identity 0."""


class NotAssociative(RingAxiomError):
    def __init__(self, a, b, c):
        super().__init__("mul_associativity", (a, b, c),
                         f"(ab)c != a(bc) for a={a}, b={b}, c={c}")


class NotDistributive(RingAxiomError):
    def __init__(self, side: str, a, b, c):
        self.side = side
        super().__init__(f"{side}_distributivity", (a, b, c),
                         f"{side} distributive law fails for a={a}, b={b}, c={c}")


class NotClosed(ValueError):
    def __init__(self, operation: str, witness: tuple):
        self.operation = operation
        self.witness = tuple(int(w) for w in witness)
        super().__init__(f"subset not closed under {operation}: witness {self.witness}")


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """A validated finite ring.  Build it with :func:`validate` or :func:`from_tables`."""

    order: int
    add: np.ndarray
    mul: np.ndarray
    name: Optional[str] = None

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteRing{label} order={self.order}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteRing):
            return NotImplemented
        return (self.order == other.order
                and np.array_equal(self.add, other.add)
                and np.array_equal(self.mul, other.mul))

    def __hash__(self) -> int:
        return hash((self.order, self.add.tobytes(), self.mul.tobytes()))

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def neg(self) -> np.ndarray:
        """Additive inverse of every element."""
        rows, cols = np.nonzero(self.add == 0)
        out = np.empty(self.order, dtype=np.int64)
        out[rows] = cols
        out.flags.writeable = False
        return out

    @cached_property
    def additive_orders(self) -> np.ndarray:
        out = np.zeros(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        idx = np.arange(self.order)
        for k in range(1, self.order + 1):
            done = (cur == 0) & (out == 0)
            out[done] = k
            if out.all():
                break
            cur = self.add[cur, idx]
        out.flags.writeable = False
        return out

    def sub(self, x: int, y: int) -> int:
        return int(self.add[x, self.neg[y]])

    def scalar(self, k: int, x: int) -> int:
        """``k * x`` for a non-negative integer ``k``."""
        acc = 0
        for _ in range(k % int(self.additive_orders[x])):
            acc = int(self.add[acc, x])
        return acc

    def to_dict(self) -> dict:
        d = {"order": self.order, "add": self.add.tolist(), "mul": self.mul.tolist()}
        if self.name is not None:
            d["name"] = self.name
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def renamed(self, name: Optional[str]) -> "FiniteRing":
        return FiniteRing(self.order, self.add, self.mul, name)

    def relabel(self, perm: Sequence[int], name: Optional[str] = None) -> "FiniteRing":
        """Return the same ring with element ``x`` renamed ``perm[x]`` (``perm[0]`` must be 0)."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        add = perm[self.add[np.ix_(inv, inv)]]
        mul = perm[self.mul[np.ix_(inv, inv)]]
        return validate(self.order, add, mul, name=name or self.name)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64, copy=True)
    a.flags.writeable = False
    return a


def _first_true(mask: np.ndarray):
    hit = np.argwhere(mask)
    return tuple(hit[0]) if len(hit) else None


def _scan_triples(n: int, check):
    """Run ``check(a_slice)`` over chunks of first operands; return first bad triple."""
    step = max(1, _CHUNK_CELLS // max(1, n * n))
    for lo in range(0, n, step):
        bad = check(slice(lo, min(n, lo + step)))
        w = _first_true(bad)
        if w is not None:
            return (w[0] + lo, w[1], w[2])
    return None


def validate(order: int, add, mul, name: Optional[str] = None) -> FiniteRing:
    """Check every ring axiom exhaustively and return an immutable :class:`FiniteRing`.

    Raises the first failure found, in this order: shape, additive identity,
    additive commutativity, additive associativity, additive inverses,
    multiplicative associativity, left then right distributivity.
    """
    if not isinstance(order, (int, np.integer)) or order < 1:
        raise BadShape(f"order must be a positive integer, got {order!r}")
    n = int(order)
    try:
        A = np.asarray(add, dtype=np.int64)
        M = np.asarray(mul, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise BadShape(f"tables are not rectangular integer arrays: {exc}") from None
    for label, T in (("add", A), ("mul", M)):
        if T.shape != (n, n):
            raise BadShape(f"{label} table has shape {T.shape}, expected {(n, n)}")
        if n and (T.min() < 0 or T.max() >= n):
            raise BadShape(f"{label} table has entries outside [0, {n})")

    idx = np.arange(n)
    w = _first_true((A[0] != idx) | (A[:, 0] != idx))
    if w is not None:
        raise NotAGroup("additive_identity", w,
                        f"index 0 is not the additive identity (element {w[0]})")
    w = _first_true(A != A.T)
    if w is not None:
        raise NotAGroup("additive_commutativity", w)
    w = _scan_triples(n, lambda s: A[A[s], :] != A[idx[s, None, None], A[None, :, :]])
    if w is not None:
        raise NotAGroup("additive_associativity", w)
    w = _first_true(~(A == 0).any(axis=1))
    if w is not None:
        raise NotAGroup("additive_inverse", w)

    w = _scan_triples(n, lambda s: M[M[s], :] != M[idx[s, None, None], M[None, :, :]])
    if w is not None:
        raise NotAssociative(*w)
    # a(b+c) == ab + ac
    w = _scan_triples(n, lambda s: M[idx[s, None, None], A[None, :, :]]
                      != A[M[s][:, :, None], M[s][:, None, :]])
    if w is not None:
        raise NotDistributive("left", *w)
    # (b+c)a == ba + ca, reported as (a, b, c)
    w = _scan_triples(n, lambda s: M[A[None, :, :], idx[s, None, None]]
                      != A[M[:, s].T[:, :, None], M[:, s].T[:, None, :]])
    if w is not None:
        raise NotDistributive("right", *w)
    # implied by distributivity; kept as a cross-check
    w = _first_true((M[0] != 0) | (M[:, 0] != 0))
    if w is not None:
        raise RingAxiomError("zero_absorption", w)
    return FiniteRing(n, _frozen(A), _frozen(M), name)


def from_dict(data: dict) -> FiniteRing:
    """Parse the JSON ring file format (already decoded)."""
    if not isinstance(data, dict) or not {"order", "add", "mul"} <= data.keys():
        raise BadShape("ring object needs keys 'order', 'add', 'mul'")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise BadShape("'name' must be a string")
    return validate(data["order"], data["add"], data["mul"], name=name)


def load_ring(path) -> FiniteRing:
    with open(path) as fh:
        return from_dict(json.load(fh))


def save_ring(ring: FiniteRing, path) -> None:
    with open(path, "w") as fh:
        json.dump(ring.to_dict(), fh)
        fh.write("\n")


# ---------------------------------------------------------------- queries

def find_unity(R: FiniteRing) -> Optional[int]:
    idx = np.arange(R.order)
    left = np.all(R.mul == idx[None, :], axis=1)
    right = np.all(R.mul == idx[:, None], axis=0)
    hits = np.nonzero(left & right)[0]
    return int(hits[0]) if len(hits) else None


def is_commutative(R: FiniteRing) -> bool:
    return bool(np.array_equal(R.mul, R.mul.T))


def additive_order(R: FiniteRing, x: int) -> int:
    return int(R.additive_orders[x])


def characteristic(R: FiniteRing) -> int:
    """Additive exponent: the least k >= 1 killing every element."""
    return math.lcm(*(int(o) for o in R.additive_orders))


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_from_orders(order_counts: Counter, group_order: int) -> list[int]:
    """Invariant factors of an abelian group from its element-order multiset.

    For each prime p the number of elements killed by p^j is p^(sum_i min(j, e_i)),
    which pins down the exponents e_i of the p-primary part.
    """
    columns: list[list[int]] = []
    for p, total in _factorize(group_order).items():
        ranks = []  # ranks[j-1] = #{i : e_i >= j}
        prev, j = 0, 1
        while prev < total:
            killed = sum(c for o, c in order_counts.items() if (p ** j) % o == 0)
            logk = round(math.log(killed, p))
            ranks.append(logk - prev)
            prev = logk
            j += 1
        exps = [sum(1 for r in ranks if r > i) for i in range(ranks[0] if ranks else 0)]
        columns.append([p ** e for e in sorted(exps)])
    k = max((len(c) for c in columns), default=0)
    factors = [1] * k
    for col in columns:
        for pos, q in enumerate(col):
            factors[k - len(col) + pos] *= q
    return factors


def additive_type(R: FiniteRing) -> list[int]:
    """Invariant factors d_1 | d_2 | ... | d_k of (R, +), ascending; [] for the zero ring."""
    counts = Counter(int(o) for o in R.additive_orders)
    return invariant_factors_from_orders(counts, R.order)


def idempotents(R: FiniteRing) -> list[int]:
    idx = np.arange(R.order)
    return [int(x) for x in idx[R.mul[idx, idx] == idx]]


def nilpotents(R: FiniteRing) -> list[int]:
    """Elements some power of which is 0 (0 included)."""
    out = []
    for x in range(R.order):
        y = x
        for _ in range(R.order):
            if y == 0:
                out.append(x)
                break
            y = int(R.mul[y, x])
    return out


def induced_subring(R: FiniteRing, subset: Iterable[int], name: Optional[str] = None):
    """Restrict ``R`` to a closed subset.

    Returns ``(S, embedding)`` where ``embedding[i]`` is the index in ``R`` of the
    i-th element of ``S``.  0 stays 0 and the rest keep ascending order.
    """
    members = sorted({int(x) for x in subset} | {0})
    if 0 not in {int(x) for x in subset}:
        raise NotClosed("zero", (0,))
    emb = np.asarray(members, dtype=np.int64)
    inside = np.zeros(R.order, dtype=bool)
    inside[emb] = True
    sub_add = R.add[np.ix_(emb, emb)]
    sub_mul = R.mul[np.ix_(emb, emb)]
    for label, T in (("add", sub_add), ("mul", sub_mul)):
        w = _first_true(~inside[T])
        if w is not None:
            raise NotClosed(label, (emb[w[0]], emb[w[1]]))
    w = _first_true(~inside[R.neg[emb]])
    if w is not None:
        raise NotClosed("neg", (emb[w[0]],))
    back = np.full(R.order, -1, dtype=np.int64)
    back[emb] = np.arange(len(emb))
    S = validate(len(emb), back[sub_add], back[sub_mul], name=name)
    return S, tuple(int(e) for e in emb)


# ------------------------------------------------ additive structure / isomorphism

def mixed_radix_coords(factors: Sequence[int]) -> np.ndarray:
    """Coordinates of every element of Z_{d_1} x ... x Z_{d_k}; the first coordinate is least significant."""
    n = math.prod(factors)
    idx = np.arange(n)
    cols = []
    for d in factors:
        cols.append(idx % d)
        idx = idx // d
    return np.stack(cols, axis=1) if cols else np.zeros((n, 0), dtype=np.int64)


def group_isomorphisms(R: FiniteRing, factors: Optional[Sequence[int]] = None) -> np.ndarray:
    """All additive isomorphisms from the standard group Z_{d_1} x ... x Z_{d_k} onto (R, +).

    Each row ``img`` maps the standard element with mixed-radix index ``u`` to
    ``img[u]`` in ``R``.  Enumerated by sending the standard generators to every
    admissible tuple of elements of the right orders.
    """
    if factors is None:
        factors = additive_type(R)
    orders = R.additive_orders
    by_order = {d: [int(x) for x in np.nonzero(orders == d)[0]] for d in set(factors)}
    found: list[np.ndarray] = []

    def extend(i: int, img: np.ndarray):
        if i == len(factors):
            found.append(img)
            return
        d = factors[i]
        size = len(img)
        for r in by_order[d]:
            multiples = [0]
            for _ in range(d - 1):
                multiples.append(int(R.add[multiples[-1], r]))
            new = R.add[img[None, :], np.asarray(multiples)[:, None]].reshape(-1)
            if len(np.unique(new)) == size * d:
                extend(i + 1, new)

    extend(0, np.zeros(1, dtype=np.int64))
    return np.array(found, dtype=np.int64).reshape(len(found), R.order)


def _pullbacks(R: FiniteRing, imgs: np.ndarray) -> np.ndarray:
    """Multiplication tables of ``R`` transported to the standard group along each iso."""
    inv = np.empty_like(imgs)
    rows = np.arange(len(imgs))[:, None]
    inv[rows, imgs] = np.arange(R.order)[None, :]
    prod = R.mul[imgs[:, :, None], imgs[:, None, :]]
    return inv[rows[:, :, None], prod]


def _lexmin_rows(X: np.ndarray) -> int:
    """Row index of the lexicographically smallest row of a 2-D integer array."""
    cand = np.arange(X.shape[0])
    for col in range(X.shape[1]):
        if len(cand) == 1:
            break
        vals = X[cand, col]
        cand = cand[vals == vals.min()]
    return int(cand[0])


def canonical_labeling(R: FiniteRing):
    """``(factors, img, table)``: the iso onto the standard group giving the smallest mul table."""
    factors = additive_type(R)
    imgs = group_isomorphisms(R, factors)
    tables = _pullbacks(R, imgs).reshape(len(imgs), -1)
    best = _lexmin_rows(tables)
    return factors, imgs[best], tables[best].reshape(R.order, R.order)


def encode_tables(order: int, add: np.ndarray, mul: np.ndarray) -> bytes:
    head = np.asarray([order], dtype=">u4").tobytes()
    return head + np.asarray(add, dtype=">u2").tobytes() + np.asarray(mul, dtype=">u2").tobytes()


def canonical_form(R: FiniteRing) -> bytes:
    """Byte key that is equal for two rings exactly when they are isomorphic.

    The minimum is taken over additive isomorphisms onto the standard mixed-radix
    group, so the addition part is the same for every ring of a given additive
    type and the multiplication part is the lexicographically smallest table.
    """
    factors, _, table = canonical_labeling(R)
    return encode_tables(R.order, standard_add_table(factors), table)


def standard_add_table(factors: Sequence[int]) -> np.ndarray:
    coords = mixed_radix_coords(factors)
    n = len(coords)
    if not len(factors):
        return np.zeros((n, n), dtype=np.int64)
    s = (coords[:, None, :] + coords[None, :, :]) % np.asarray(factors)
    weights = np.cumprod([1] + list(factors[:-1]))
    return (s * weights).sum(axis=-1)


def invariants(R: FiniteRing) -> tuple:
    """Cheap isomorphism invariants, compared before any search."""
    from .zd_analysis import profile  # local: zd_analysis builds on this module

    p = profile(R)
    return (
        R.order,
        characteristic(R),
        tuple(additive_type(R)),
        is_commutative(R),
        find_unity(R) is not None,
        (p.m_left, p.m_right, p.n),
        len(idempotents(R)),
        len(nilpotents(R)),
        tuple(sorted(Counter(int(o) for o in R.additive_orders).items())),
    )


def is_isomorphic(R: FiniteRing, S: FiniteRing) -> Optional[tuple[int, ...]]:
    """A bijection ``f`` (``f[r]`` in S) preserving both tables, or None."""
    if R.order != S.order or invariants(R) != invariants(S):
        return None
    factors = additive_type(R)
    imgs_s = group_isomorphisms(S, factors)
    target = _pullbacks(S, imgs_s[:1])[0]
    imgs_r = group_isomorphisms(R, factors)
    tables = _pullbacks(R, imgs_r)
    hits = np.nonzero((tables == target[None]).all(axis=(1, 2)))[0]
    if not len(hits):
        return None
    img_r, img_s = imgs_r[hits[0]], imgs_s[0]
    f = np.empty(R.order, dtype=np.int64)
    f[img_r] = img_s
    return tuple(int(v) for v in f)


def is_ring_hom_bijection(R: FiniteRing, S: FiniteRing, f: Sequence[int]) -> bool:
    """Check that ``f`` is a bijection R -> S carrying both tables over."""
    f = np.asarray(f)
    if len(f) != R.order or R.order != S.order or len(set(f.tolist())) != R.order:
        return False
    return bool(np.array_equal(f[R.add], S.add[np.ix_(f, f)])
                and np.array_equal(f[R.mul], S.mul[np.ix_(f, f)]))
