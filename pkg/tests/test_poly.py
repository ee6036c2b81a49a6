import random
from fractions import Fraction as F

import numpy as np
import pytest

from sepkds.kinetics.poly import (Poly, gcd, multiplicity_even, next_root, roots_in, sign_after, sign_at_root,
                                  squarefree)

X = Poly.x()


def test_arithmetic_and_evaluation():
    p = (X - 1) * (X + 2)
    assert p == Poly((-2, 1, 1))
    assert p(F(1, 2)) == F(-5, 4)
    assert (p + 2) == X * X + X
    assert p.deriv() == 2 * X + 1
    assert (X ** 3).degree == 3
    assert Poly().is_zero() and Poly((0, 0)).is_zero()


def test_divmod_and_gcd():
    a = (X - 1) ** 2 * (X + 3)
    q, r = a.divmod(X - 1)
    assert r.is_zero() and q == (X - 1) * (X + 3)
    assert gcd(a, (X - 1) * (X - 5)).monic() == X - 1
    assert squarefree(a).monic() == ((X - 1) * (X + 3)).monic()


def test_compose():
    p = X * X + 1
    assert p.compose(X + 1) == X * X + 2 * X + 2


def test_next_root_exact_rational():
    r = next_root(X - F(1, 3), 0, 1)
    assert r.lo <= F(1, 3) <= r.hi


def test_next_root_skips_current_time():
    r = next_root((X - F(1, 4)) * (X - F(3, 4)), F(1, 4), 1)
    assert r.lo <= F(3, 4) <= r.hi


def test_next_root_none_cases():
    assert next_root(X * X + 1, -5, 5) is None
    assert next_root(Poly.const(3), 0, 1) is None
    assert next_root(Poly(), 0, 1) is None
    assert next_root(X - 2, 0, 1) is None


def test_irrational_root_isolation_width():
    r = next_root(X * X - 2, 0, 2, width=F(1, 10 ** 12))
    assert r.hi - r.lo < F(1, 10 ** 12)
    assert r.lo < 2 ** 0.5 + 1e-12 and r.hi > 2 ** 0.5 - 1e-12


def test_roots_match_numpy_on_random_polynomials():
    rng = random.Random(2)
    for _ in range(40):
        rts = sorted({F(rng.randint(-90, 90), rng.randint(1, 9)) for _ in range(rng.randint(1, 5))})
        p = Poly.const(rng.choice([-3, 1, 2]))
        for t in rts:
            p = p * (X - t)
        got = roots_in(p, -100, 100)
        assert len(got) == len(rts)
        for r, t in zip(got, rts):
            assert r.lo <= t <= r.hi
        ref = sorted(z.real for z in np.roots([float(c) for c in reversed(p.c)]) if abs(z.imag) < 1e-9)
        assert [float(r) for r in got] == pytest.approx(ref, abs=1e-6)


def test_multiplicity_parity():
    p = (X - 1) ** 2 * (X - 2)
    r1, r2 = roots_in(p, 0, 3)
    assert multiplicity_even(p, r1)
    assert not multiplicity_even(p, r2)


def test_sign_after():
    assert sign_after((X - 1) ** 2, 1) == 1
    assert sign_after(-(X - 1) ** 3, 1) == -1
    assert sign_after(Poly(), 0) == 0


def test_sign_at_irrational_root():
    g = X * X - 2
    r = next_root(g, 0, 2)
    assert sign_at_root(X - F(141, 100), g, r) == 1
    assert sign_at_root(X - F(142, 100), g, r) == -1
    assert sign_at_root(X * X - 2, g, r) == 0
    assert sign_at_root((X * X - 2) * (X + 5), g, r) == 0
