"""Univariate polynomials over the rationals and exact root isolation.

Coefficients are stored low degree first.  Roots are isolated with a
Sturm sequence on the squarefree part and then narrowed by sign
bisection, so every reported root comes with a rational interval that
provably contains it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

ROOT_WIDTH_EXP = 60


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence = ()):
        self.c = _trim(Fraction(x) for x in coeffs)

    @classmethod
    def const(cls, a) -> "Poly":
        return cls((a,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly({[str(x) for x in self.c]})"

    def _lift(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.c), len(o.c))
        a = self.c + (Fraction(0),) * (n - len(self.c))
        b = o.c + (Fraction(0),) * (n - len(o.c))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-x for x in self.c)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.c or not o.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(o.c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = Poly.const(1)
        for _ in range(k):
            r = r * self
        return r

    def __call__(self, t):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * t + a
        return acc

    def eval_float(self, t: float) -> float:
        acc = 0.0
        for a in reversed(self.c):
            acc = acc * t + float(a)
        return acc

    def deriv(self) -> "Poly":
        return Poly(i * a for i, a in enumerate(self.c) if i)

    def divmod(self, d: "Poly"):
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [Fraction(0)] * max(0, len(r) - len(d.c) + 1)
        ld = d.c[-1]
        for k in range(len(q) - 1, -1, -1):
            f = r[k + len(d.c) - 1] / ld
            q[k] = f
            if f:
                for j, b in enumerate(d.c):
                    r[k + j] -= f * b
        return Poly(q), Poly(r[: len(d.c) - 1])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        ld = self.c[-1]
        return Poly(a / ld for a in self.c)

    def compose(self, g: "Poly") -> "Poly":
        acc = Poly()
        for a in reversed(self.c):
            acc = acc * g + a
        return acc


def gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def squarefree(f: Poly) -> Poly:
    """f divided by gcd(f, f'): same roots, all simple."""
    if f.degree <= 1:
        return f
    g = gcd(f, f.deriv())
    if g.degree <= 0:
        return f
    return f.divmod(g)[0]


def sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_after(f: Poly, t) -> int:
    """Sign of f on (t, t + delta) for small delta > 0."""
    g = f
    while not g.is_zero():
        v = g(t)
        if v != 0:
            return sign(v)
        g = g.deriv()
    return 0


def sturm_sequence(f: Poly) -> list[Poly]:
    seq = [f, f.deriv()]
    while not seq[-1].is_zero():
        r = seq[-2].divmod(seq[-1])[1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _variations(seq, t) -> int:
    last = 0
    v = 0
    for p in seq:
        s = sign(p(t))
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


def count_roots(seq, a, b) -> int:
    """Distinct roots of seq[0] in (a, b]; a must not be a root."""
    return _variations(seq, a) - _variations(seq, b)


def _strip_root(g: Poly, t) -> Poly:
    lin = Poly((-Fraction(t), 1))
    while not g.is_zero() and g.degree >= 1 and g(t) == 0:
        g = g.divmod(lin)[0]
    return g


@dataclass(frozen=True)
class Root:
    """An isolated root: lo < root <= hi, or lo == hi for an exact rational root."""

    lo: Fraction
    hi: Fraction

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def __float__(self):
        return float(self.mid)


def next_root(f: Poly, t_now, t_end, width=None) -> Optional[Root]:
    """Smallest root of f in (t_now, t_end], isolated to an interval narrower than ``width``.

    ``width`` defaults to 2^-60 times the length of the search window.
    Returns None when f has no root there (including f identically zero).
    """
    t_now, t_end = Fraction(t_now), Fraction(t_end)
    if t_end <= t_now or f.is_zero() or f.is_constant():
        return None
    if width is None:
        width = (t_end - t_now) / (1 << ROOT_WIDTH_EXP)
    g = _strip_root(squarefree(f), t_now)
    if g.is_constant():
        return None
    seq = sturm_sequence(g)
    if count_roots(seq, t_now, t_end) == 0:
        return None
    lo, hi = t_now, t_end
    # Sturm bisection until exactly one root remains in (lo, hi]; lo is never a root
    while count_roots(seq, lo, hi) > 1:
        mid = (lo + hi) / 2
        if count_roots(seq, lo, mid) >= 1:
            hi = mid
        else:
            lo = mid
    s_lo = sign(g(lo))
    while hi - lo >= width:
        mid = (lo + hi) / 2
        s = sign(g(mid))
        if s == 0:
            return Root(mid, mid)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return Root(lo, hi)


def roots_in(f: Poly, t0, t1) -> list[Root]:
    """All distinct roots of f in (t0, t1], in increasing order."""
    out = []
    t = Fraction(t0)
    width = (Fraction(t1) - t) / (1 << ROOT_WIDTH_EXP)
    while True:
        r = next_root(f, t, t1, width)
        if r is None:
            return out
        out.append(r)
        t = r.hi


def multiplicity_even(f: Poly, r: Root) -> bool:
    """True if the root isolated in r has even multiplicity in f (f keeps its sign across it)."""
    if r.exact:
        m = 0
        g = f
        while not g.is_zero() and g(r.lo) == 0:
            g = g.deriv()
            m += 1
        return m % 2 == 0
    return sign(f(r.lo)) == sign(f(r.hi)) and sign(f(r.hi)) != 0


def sign_at_root(h: Poly, g: Poly, r: Root) -> int:
    """Exact sign of h at the root of g isolated by r."""
    if r.exact or h.is_constant():
        return sign(h(r.lo))
    gs = squarefree(g)
    common = gcd(gs, h)
    if common.degree >= 1 and count_roots(sturm_sequence(common), r.lo, r.hi) >= 1:
        return 0
    hs = sturm_sequence(squarefree(h))
    lo, hi = r.lo, r.hi
    s_lo = sign(gs(lo))
    while count_roots(hs, lo, hi) > 0 or h(hi) == 0:
        mid = (lo + hi) / 2
        s = sign(gs(mid))
        if s == 0:
            return sign(h(mid))
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return sign(h(hi))
