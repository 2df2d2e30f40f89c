from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import rationals
from galecert import sturm

x = sympy.symbols("x")


def to_sympy(p):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p)], x)


polys = st.lists(rationals(6), min_size=2, max_size=7)


@given(polys)
def test_positive_root_count_matches_sympy(p):
    p = sturm.trim(p)
    assume(sturm.degree(p) >= 1)
    # sympy counts with multiplicity, so compare on the square-free part
    sf = to_sympy(p).sqf_part()
    expected = sf.count_roots(0, None) - (1 if sf.eval(0) == 0 else 0)
    assert sturm.count_positive_roots(p) == expected


@given(polys, st.integers(-3, 3), st.integers(1, 4))
def test_interval_count_matches_sympy(p, lo, width):
    p = sturm.trim(p)
    assume(sturm.degree(p) >= 1 and sturm.evaluate(p, lo) != 0)
    sf = to_sympy(p).sqf_part()
    hi = lo + width
    expected = sf.count_roots(lo, hi)
    assert sturm.count_roots_in(p, lo, hi) == expected


@given(polys, polys)
def test_division_identity(a, b):
    b = sturm.trim(b)
    assume(any(b))
    q, r = sturm.divmod_poly(a, b)
    prod = [Fraction(0)] * (len(q) + len(b))
    for i, qi in enumerate(q):
        for j, bj in enumerate(b):
            prod[i + j] += qi * bj
    total = [Fraction(0)] * max(len(prod), len(r))
    for i, v in enumerate(prod):
        total[i] += v
    for i, v in enumerate(r):
        total[i] += v
    assert sturm.trim(total) == sturm.trim(a)
    assert sturm.degree(r) < sturm.degree(b) or not any(r)


def test_repeated_positive_root_detection():
    # (x - 1)^2 (x + 2)
    p = [Fraction(2), Fraction(-3), Fraction(0), Fraction(1)]
    assert sturm.has_repeated_positive_root(p)
    assert sturm.count_positive_roots(p) == 1
    # (x + 1)^2 (x - 3): the repeated root is negative
    assert not sturm.has_repeated_positive_root([-3, -5, -1, 1])


def test_laurent_shift():
    # x^-1 - 2 + x^3  ->  1 - 2x + x^4
    assert sturm.laurent_to_poly([-1, 0, 3], [1, -2, 1]) == [1, -2, 0, 0, 1]
    assert sturm.count_positive_roots(sturm.laurent_to_poly([-1, 0, 3], [1, -2, 1])) == 2
