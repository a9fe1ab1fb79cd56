"""Exact real-root isolation for univariate rational polynomials via Sturm sequences.

Univariate polynomials here are coefficient lists, lowest degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import Polynomial

UPoly = list[Fraction]


def from_polynomial(p: Polynomial) -> UPoly:
    if p.nvars != 1:
        raise ValueError("expected a polynomial in one variable")
    coeffs = [Fraction(0)] * (max(p.degree(), 0) + 1)
    for (e,), c in p.terms.items():
        coeffs[e] = c
    return _trim(coeffs)


def _trim(a: Sequence[Fraction]) -> UPoly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def evaluate(a: Sequence[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def derivative(a: Sequence[Fraction]) -> UPoly:
    return _trim([c * k for k, c in enumerate(a)][1:])


def divmod_u(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[UPoly, UPoly]:
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    r = _trim(a)
    q = [Fraction(0)] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        shift = len(r) - len(b)
        factor = r[-1] / b[-1]
        q[shift] = factor
        for i, c in enumerate(b):
            r[i + shift] -= factor * c
        r = _trim(r)
    return _trim(q), r


def gcd_u(a: Sequence[Fraction], b: Sequence[Fraction]) -> UPoly:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, divmod_u(a, b)[1]
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def squarefree_part(a: Sequence[Fraction]) -> UPoly:
    a = _trim(a)
    if len(a) <= 1:
        return a
    g = gcd_u(a, derivative(a))
    return divmod_u(a, g)[0]


def sturm_sequence(a: Sequence[Fraction]) -> list[UPoly]:
    seq = [_trim(a), derivative(a)]
    while seq[-1]:
        seq.append([-c for c in divmod_u(seq[-2], seq[-1])[1]])
    return [s for s in seq if s]


def sign_changes(seq: Sequence[Sequence[Fraction]], x) -> int:
    signs = [v for v in (evaluate(s, x) for s in seq) if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def count_roots(seq: Sequence[Sequence[Fraction]], a, b) -> int:
    """Distinct real roots in ``(a, b]`` of a squarefree polynomial with Sturm sequence ``seq``."""
    return sign_changes(seq, a) - sign_changes(seq, b)


@dataclass(frozen=True)
class RootEnclosure:
    """Open interval ``(lo, hi)`` holding exactly one root, or the exact root when ``lo == hi``."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint)

    def overlaps(self, lo: Fraction, hi: Fraction) -> bool:
        if self.exact:
            return lo <= self.lo <= hi
        return lo < self.hi and self.lo < hi

    def __str__(self) -> str:
        if self.exact:
            return str(self.lo)
        return f"({self.lo}, {self.hi}) ~ {float(self.midpoint):.12g}"


class RootIsolator:
    """Isolates and refines the distinct real roots of one polynomial."""

    def __init__(self, a: Sequence[Fraction]):
        a = _trim(a)
        if not a:
            raise ValueError("the zero polynomial has no isolated roots")
        self.poly = squarefree_part(a)
        self.seq = sturm_sequence(self.poly)

    def count(self, lo, hi) -> int:
        return count_roots(self.seq, lo, hi)

    def isolate(self, lo, hi) -> list[RootEnclosure]:
        """All distinct roots in the open interval ``(lo, hi)``, ascending."""
        lo, hi = Fraction(lo), Fraction(hi)
        if len(self.poly) <= 1:
            return []
        out = []
        stack = [(lo, hi)]
        while stack:
            a, b = stack.pop()
            n = self.count(a, b)
            if n == 0:
                continue
            if n == 1:
                if evaluate(self.poly, b) == 0:
                    out.append(RootEnclosure(b, b))
                else:
                    out.append(RootEnclosure(a, b))
                continue
            mid = (a + b) / 2
            stack.append((a, mid))
            stack.append((mid, b))
        out = [r for r in out if not (r.exact and r.lo == hi)]
        return sorted(out, key=lambda r: (r.lo, r.hi))

    def refine(self, root: RootEnclosure, width) -> RootEnclosure:
        width = Fraction(width)
        a, b = root.lo, root.hi
        while b - a > width:
            mid = (a + b) / 2
            if evaluate(self.poly, mid) == 0:
                return RootEnclosure(mid, mid)
            if self.count(a, mid) == 1:
                b = mid
            else:
                a = mid
        return RootEnclosure(a, b)


def real_roots(p: Polynomial, lo, hi, width=Fraction(1, 10**12)) -> list[RootEnclosure]:
    iso = RootIsolator(from_polynomial(p))
    return [iso.refine(r, width) for r in iso.isolate(lo, hi)]
