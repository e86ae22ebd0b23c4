"""Zero divisors, annihilators, the annihilator-coset partition, cancellability.

Convention: 0 is never a zero divisor.  A nonzero ``a`` is a left zero divisor
when ``a*b == 0`` for some nonzero ``b``; right zero divisors are the mirror
image, and two-sided ones are both.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .ring_core import FiniteRing


class NotALeftZeroDivisor(ValueError):
    pass


class NotARightZeroDivisor(ValueError):
    pass


class ZeroArgument(ValueError):
    pass


class PartitionCheckFailed(AssertionError):
    """A coset-partition invariant failed; this means a bug, not a counterexample."""

    def __init__(self, check: str, witness=()):
        self.check = check
        self.witness = tuple(witness)
        super().__init__(f"coset partition check {check!r} failed, witness {self.witness}")


@dataclass(frozen=True)
class ZeroDivisorProfile:
    left: tuple[int, ...]
    right: tuple[int, ...]
    two_sided: tuple[int, ...]

    @property
    def m_left(self) -> int:
        return len(self.left)

    @property
    def m_right(self) -> int:
        return len(self.right)

    @property
    def n(self) -> int:
        return len(self.two_sided)

    def to_dict(self) -> dict:
        return {
            "left": list(self.left),
            "right": list(self.right),
            "two_sided": list(self.two_sided),
            "m_left": self.m_left,
            "m_right": self.m_right,
            "n": self.n,
        }


def profile(R: FiniteRing) -> ZeroDivisorProfile:
    """Exact zero-divisor sets by scanning every product of nonzero elements."""
    Z = R.mul[1:, 1:] == 0
    left = tuple(int(a) + 1 for a in np.nonzero(Z.any(axis=1))[0])
    right = tuple(int(a) + 1 for a in np.nonzero(Z.any(axis=0))[0])
    two = tuple(sorted(set(left) & set(right)))
    return ZeroDivisorProfile(left, right, two)


def left_annihilator(R: FiniteRing, c: int) -> tuple[int, ...]:
    """``{x : x*c == 0}``."""
    return tuple(int(x) for x in np.nonzero(R.mul[:, c] == 0)[0])


def right_annihilator(R: FiniteRing, c: int) -> tuple[int, ...]:
    """``{x : c*x == 0}``."""
    return tuple(int(x) for x in np.nonzero(R.mul[c, :] == 0)[0])


@dataclass(frozen=True)
class CosetPartition:
    """Fibres of ``x -> x*c`` (side ``"left"``) or ``x -> c*x`` (side ``"right"``).

    ``a0`` is the fibre over 0, i.e. the annihilator of ``c`` on that side;
    ``classes`` maps each nonzero target to its fibre.
    """

    c: int
    a0: tuple[int, ...]
    classes: dict = field(default_factory=dict)
    side: str = "left"

    @property
    def a0_size(self) -> int:
        return len(self.a0)

    @property
    def class_count(self) -> int:
        """Number of nonempty fibres, A_0 included."""
        return 1 + len(self.classes)

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "A0": list(self.a0),
            "classes": [{"target": t, "members": list(m)} for t, m in sorted(self.classes.items())],
            "A0_size": self.a0_size,
            "class_count": self.class_count,
        }


def coset_partition(R: FiniteRing, c: int, side: str = "left",
                    zd: Optional[ZeroDivisorProfile] = None) -> CosetPartition:
    """Partition R by the value of ``x*c`` (or ``c*x`` for ``side="right"``) and check it.

    Every invariant of the partition is verified before returning:
    the fibres cover R disjointly, every nonempty fibre has the size of A_0
    and is a translate of it, A_0 is an additive subgroup absorbing ring
    multiplication from the annihilated side, every target is 0 or a zero
    divisor of the same side, and |A_0| <= m + 1 where m is the one-sided count.
    """
    zd = zd or profile(R)
    if side == "left":
        if c not in zd.left:
            raise NotALeftZeroDivisor(c)
        image = R.mul[:, c]
        same_side = set(zd.left)
    elif side == "right":
        if c not in zd.right:
            raise NotARightZeroDivisor(c)
        image = R.mul[c, :]
        same_side = set(zd.right)
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")

    fibres: dict[int, list[int]] = {}
    for x, t in enumerate(image.tolist()):
        fibres.setdefault(t, []).append(x)
    a0 = tuple(fibres.pop(0))
    part = CosetPartition(c, a0, {t: tuple(m) for t, m in sorted(fibres.items())}, side)
    check_partition(R, part, len(same_side), same_side)
    return part


def check_partition(R: FiniteRing, part: CosetPartition, m: int, same_side: set) -> None:
    a0 = np.asarray(part.a0)
    seen = sorted(part.a0 + tuple(x for mem in part.classes.values() for x in mem))
    if seen != list(range(R.order)):
        raise PartitionCheckFailed("partition")
    # additive subgroup: closed under differences
    diffs = R.add[a0[:, None], R.neg[a0][None, :]]
    if not np.isin(diffs, a0).all():
        raise PartitionCheckFailed("subgroup", part.a0)
    # one-sided ideal: R*A0 (left) or A0*R (right) stays in A0
    prods = R.mul[:, a0] if part.side == "left" else R.mul[a0, :]
    if not np.isin(prods, a0).all():
        raise PartitionCheckFailed("ideal", part.a0)
    for t, members in part.classes.items():
        if t not in same_side:
            raise PartitionCheckFailed("target_is_zero_divisor", (t,))
        if len(members) != len(a0):
            raise PartitionCheckFailed("equal_class_sizes", (t,))
        coset = sorted(int(v) for v in R.add[members[0], a0])
        if coset != list(members):
            raise PartitionCheckFailed("coset", (t, members[0]))
    if len(a0) > m + 1:
        raise PartitionCheckFailed("annihilator_size", (len(a0), m))
    if R.order != len(a0) * part.class_count:
        raise PartitionCheckFailed("order_identity", (R.order, len(a0), part.class_count))
    if R.order > (m + 1) ** 2:
        raise PartitionCheckFailed("pigeonhole_bound", (R.order, m))


def is_right_cancellable(R: FiniteRing, a: int) -> bool:
    """``x*a == y*a`` implies ``x == y``."""
    if a == 0:
        raise ZeroArgument("cancellability is only asked of nonzero elements")
    return len(np.unique(R.mul[:, a])) == R.order


def is_left_cancellable(R: FiniteRing, a: int) -> bool:
    if a == 0:
        raise ZeroArgument("cancellability is only asked of nonzero elements")
    return len(np.unique(R.mul[a, :])) == R.order


def lemma2_counterexample(R: FiniteRing, zd: Optional[ZeroDivisorProfile] = None):
    """First ``(side, a)`` where non-zero-divisor and cancellable disagree, else None."""
    zd = zd or profile(R)
    right, left = set(zd.right), set(zd.left)
    for a in range(1, R.order):
        if (a not in right) != is_right_cancellable(R, a):
            return ("right", a)
        if (a not in left) != is_left_cancellable(R, a):
            return ("left", a)
    return None


def check_lemma2(R: FiniteRing) -> bool:
    return lemma2_counterexample(R) is None
