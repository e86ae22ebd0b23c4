"""Named ring constructions and the textual construction grammar.

Index encodings are fixed so that element numbers in reports stay stable:

* ``zmod(m)``: index = residue.
* ``poly_quotient(p, f)``: index = sum c_i p^i over coefficients, constant term first.
* ``matrix_ring(R0, k)``: entries in row-major order, entry (0, 0) least significant,
  radix |R0|.
* ``direct_product(R, S)``: index = |S| * i_R + i_S.
* ``zero_mul_ring(factors)``: mixed radix, first factor least significant.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import ring_core
from .ring_core import FiniteRing, find_unity, induced_subring, validate

DEFAULT_CAP = 4096


class CapExceeded(ValueError):
    pass


class ConstructionError(ValueError):
    pass


class SpecParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text[:pos]}<<HERE>>{text[pos:]}")


def _check_cap(order: int, cap: int) -> None:
    if order > cap:
        raise CapExceeded(f"ring of order {order} exceeds the cap of {cap} elements")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def zmod(m: int, cap: int = DEFAULT_CAP) -> FiniteRing:
    if m < 1:
        raise ConstructionError(f"modulus must be >= 1, got {m}")
    _check_cap(m, cap)
    r = np.arange(m)
    return validate(m, (r[:, None] + r[None, :]) % m, (r[:, None] * r[None, :]) % m,
                    name=f"zmod:{m}")


def _polymulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    d = len(f) - 1
    prod = [0] * (2 * d)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for top in range(len(prod) - 1, d - 1, -1):
        c = prod[top]
        if c:
            for i in range(d + 1):
                prod[top - d + i] = (prod[top - d + i] - c * f[i]) % p
    return prod[:d]


def poly_quotient(p: int, f: Sequence[int], cap: int = DEFAULT_CAP) -> FiniteRing:
    """Z_p[x]/(f) with ``f`` given as coefficients, constant term first."""
    if not is_prime(p):
        raise ConstructionError(f"{p} is not prime")
    f = [c % p for c in f]
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    d = len(f) - 1
    if d < 1:
        raise ConstructionError("modulus polynomial must have degree >= 1")
    if f[-1] != 1:
        raise ConstructionError("modulus polynomial must be monic")
    n = p ** d
    _check_cap(n, cap)
    coords = ring_core.mixed_radix_coords([p] * d)
    weights = p ** np.arange(d)
    add = ((coords[:, None, :] + coords[None, :, :]) % p) @ weights
    vecs = coords.tolist()
    mul = np.array([[int(np.dot(_polymulmod(a, b, f, p), weights)) for b in vecs] for a in vecs])
    return validate(n, add, mul, name=f"poly:{p}:{format_poly(f)}")


def format_poly(f: Sequence[int]) -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) or "0"


def matrix_ring(R0: FiniteRing, k: int, cap: int = DEFAULT_CAP) -> FiniteRing:
    if k < 1:
        raise ConstructionError("matrix size must be >= 1")
    q = R0.order
    if q ** (k * k) > cap:
        raise CapExceeded(f"matrix ring of order {q}^{k * k} exceeds the cap of {cap}")
    n = q ** (k * k)
    ent = ring_core.mixed_radix_coords([q] * (k * k)).reshape(n, k, k)
    weights = q ** np.arange(k * k)

    def encode(M):
        return M.reshape(*M.shape[:-2], k * k) @ weights

    add = encode(R0.add[ent[:, None], ent[None, :]])
    # (AB)_{ij} = sum_l A_il B_lj, summed with R0's addition table
    prod = np.zeros((n, n, k, k), dtype=np.int64)
    for l in range(k):
        term = R0.mul[ent[:, None, :, l, None], ent[None, :, None, l, :]]
        prod = R0.add[prod, term]
    mul = encode(prod)
    return validate(n, add, mul, name=f"matrix:{R0.name or '?'}:{k}")


def matrix_unit(R0: FiniteRing, k: int, row: int, col: int) -> int:
    """Index of E_{row,col} (1-based) in ``matrix_ring(R0, k)``; needs a unity in R0."""
    one = find_unity(R0)
    if one is None:
        raise ConstructionError("matrix units need a base ring with unity")
    if not (1 <= row <= k and 1 <= col <= k):
        raise ConstructionError(f"E{row}{col} is outside a {k}x{k} matrix")
    return one * R0.order ** ((row - 1) * k + (col - 1))


def closure_set(R: FiniteRing, generators: Iterable[int]) -> list[int]:
    """Smallest subset containing 0 and the generators closed under +, - and *."""
    current = {0} | {int(g) for g in generators}
    for g in current:
        if not 0 <= g < R.order:
            raise ConstructionError(f"generator {g} is not an element of a ring of order {R.order}")
    while True:
        items = np.fromiter(current, dtype=np.int64)
        grown = set(current)
        grown.update(R.add[np.ix_(items, items)].ravel().tolist())
        grown.update(R.mul[np.ix_(items, items)].ravel().tolist())
        grown.update(R.neg[items].tolist())
        if grown == current:
            return sorted(current)
        current = grown


def subring_closure(R: FiniteRing, generators: Iterable[int], name: Optional[str] = None) -> FiniteRing:
    S, _ = induced_subring(R, closure_set(R, generators), name=name)
    return S


def direct_product(R: FiniteRing, S: FiniteRing, cap: int = DEFAULT_CAP) -> FiniteRing:
    n = R.order * S.order
    _check_cap(n, cap)
    i = np.arange(n)
    a, b = i // S.order, i % S.order
    add = S.order * R.add[a[:, None], a[None, :]] + S.add[b[:, None], b[None, :]]
    mul = S.order * R.mul[a[:, None], a[None, :]] + S.mul[b[:, None], b[None, :]]
    return validate(n, add, mul, name=f"product({R.name or '?'}, {S.name or '?'})")


def zero_mul_ring(factors: Sequence[int], cap: int = DEFAULT_CAP) -> FiniteRing:
    """Abelian group Z_{d_1} x ... x Z_{d_k} with every product equal to 0."""
    factors = [int(d) for d in factors if int(d) != 1]
    if any(d < 1 for d in factors):
        raise ConstructionError("invariant factors must be positive")
    n = math.prod(factors)
    _check_cap(n, cap)
    add = ring_core.standard_add_table(factors)
    label = ",".join(map(str, factors)) or "1"
    return validate(n, add, np.zeros((n, n), dtype=np.int64), name=f"zeromul:{label}")


# ------------------------------------------------------------------ grammar

@dataclass
class _Built:
    ring: FiniteRing
    matrix_base: Optional[tuple] = None  # (R0, k) when the ring is a full matrix ring


_POLY_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*(x(?:\^(\d+))?)?\s*")
_UNIT = re.compile(r"E(\d+)_(\d+)|E(\d)(\d)$")


def parse_poly(text: str, p: int) -> list[int]:
    """Parse ``"x^2+x+1"`` style polynomials over Z_p into coefficients, constant first."""
    coeffs: dict[int, int] = {}
    pos = 0
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    while pos < len(text):
        m = _POLY_TERM.match(text, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse polynomial term at {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) else 1
        deg = 0 if not m.group(3) else (int(m.group(4)) if m.group(4) else 1)
        coeffs[deg] = coeffs.get(deg, 0) + sign * c
        pos = m.end()
    deg = max(coeffs)
    return [coeffs.get(i, 0) % p for i in range(deg + 1)]


class _Parser:
    def __init__(self, text: str, cap: int):
        self.text = text
        self.pos = 0
        self.cap = cap

    def error(self, msg: str):
        raise SpecParseError(msg, self.text, self.pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        if not self.peek(s):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def integer(self) -> int:
        self.ws()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            self.error("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def until(self, stops: str) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in stops:
            self.pos += 1
        return self.text[start:self.pos].strip()

    def build(self, fn, *args):
        return fn(*args)

    def spec(self) -> _Built:
        self.ws()
        if self.peek("zmod:"):
            self.expect("zmod:")
            return _Built(self.build(zmod, self.integer(), self.cap))
        if self.peek("poly:"):
            self.expect("poly:")
            p = self.integer()
            self.expect(":")
            at = self.pos
            try:
                f = parse_poly(self.until(":,;)"), p)
            except ValueError as exc:
                self.pos = at
                self.error(str(exc))
            ring = self.build(poly_quotient, p, f, self.cap)
            return _Built(ring.renamed(f"poly:{p}:{format_poly(f)}"))
        if self.peek("matrix:"):
            self.expect("matrix:")
            base = self.spec().ring
            self.expect(":")
            k = self.integer()
            return _Built(self.build(matrix_ring, base, k, self.cap), (base, k))
        if self.peek("product("):
            self.expect("product(")
            a = self.spec().ring
            self.expect(",")
            b = self.spec().ring
            self.expect(")")
            return _Built(self.build(direct_product, a, b, self.cap))
        if self.peek("closure("):
            self.expect("closure(")
            inner = self.spec()
            self.expect(";")
            gens = self.genlist(inner)
            self.expect(")")
            ring = self.build(subring_closure, inner.ring, gens)
            return _Built(ring)
        if self.peek("zeromul:"):
            self.expect("zeromul:")
            factors = [self.integer()]
            while True:
                save = self.pos
                if self.peek(","):
                    self.pos += 1
                    self.ws()
                    if self.pos < len(self.text) and self.text[self.pos].isdigit():
                        factors.append(self.integer())
                        continue
                self.pos = save
                break
            return _Built(self.build(zero_mul_ring, factors, self.cap))
        if self.peek("file:"):
            self.expect("file:")
            path = self.until(",;)")
            if not path:
                self.error("expected a file path")
            try:
                ring = ring_core.load_ring(path)
            except OSError as exc:
                raise ConstructionError(f"cannot read ring file {path!r}: {exc}") from None
            _check_cap(ring.order, self.cap)
            return _Built(ring if ring.name else ring.renamed(f"file:{path}"))
        self.error("expected a ring expression")

    def genlist(self, inner: _Built) -> list[int]:
        gens: list[int] = []
        if self.peek(")"):
            return gens
        while True:
            self.ws()
            tok = self.until(",)").strip()
            if not tok:
                self.error("expected a generator")
            m = _UNIT.match(tok)
            if tok.isdigit():
                gens.append(int(tok))
            elif m:
                if inner.matrix_base is None:
                    self.error(f"matrix unit {tok} used on a ring that is not a matrix ring")
                row, col = (m.group(1), m.group(2)) if m.group(1) else (m.group(3), m.group(4))
                base, k = inner.matrix_base
                gens.append(self.build(matrix_unit, base, k, int(row), int(col)))
            else:
                self.error(f"bad generator {tok!r}")
            if self.peek(","):
                self.pos += 1
                continue
            return gens


def compile_spec(expression: str, cap: int = DEFAULT_CAP) -> FiniteRing:
    """Compile a construction expression such as ``"closure(matrix:zmod:2:2; E11,E21)"``."""
    parser = _Parser(expression, cap)
    built = parser.spec()
    parser.ws()
    if parser.pos != len(expression):
        parser.error("trailing input")
    return built.ring.renamed(expression.strip())
