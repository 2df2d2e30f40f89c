"""Exact univariate real-root counting with Sturm sequences.

Polynomials are lists of ``Fraction`` coefficients, lowest degree first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Poly = list[Fraction]


def trim(p: Sequence) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def derivative(p: Sequence) -> Poly:
    return trim([i * Fraction(c) for i, c in enumerate(p)][1:])


def divmod_poly(a: Sequence, b: Sequence) -> tuple[Poly, Poly]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = trim(r)
    return trim(q), r


def gcd_poly(a: Sequence, b: Sequence) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    if not a:
        return a
    return [c / a[-1] for c in a]


def evaluate(p: Sequence, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sturm_sequence(p: Sequence) -> list[Poly]:
    p = trim(p)
    seq = [p, derivative(p)]
    while seq[-1]:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _changes(values) -> int:
    vals = [v for v in values if v != 0]
    return sum(1 for a, b in zip(vals, vals[1:]) if (a > 0) != (b > 0))


def variations_at(seq: list[Poly], x) -> int:
    return _changes([evaluate(s, x) for s in seq])


def variations_at_pos_inf(seq: list[Poly]) -> int:
    return _changes([s[-1] for s in seq])


def strip_zero_root(p: Sequence) -> Poly:
    p = trim(p)
    while p and p[0] == 0:
        p = p[1:]
    return p


def count_positive_roots(p: Sequence) -> int:
    """Number of distinct roots in ``(0, +inf)``."""
    p = strip_zero_root(p)
    if len(p) <= 1:
        return 0
    seq = sturm_sequence(p)
    return variations_at(seq, 0) - variations_at_pos_inf(seq)


def count_roots_in(p: Sequence, lo, hi) -> int:
    """Distinct roots in ``(lo, hi]`` (``lo`` must not be a root)."""
    p = trim(p)
    if len(p) <= 1:
        return 0
    seq = sturm_sequence(p)
    return variations_at(seq, lo) - variations_at(seq, hi)


def has_repeated_positive_root(p: Sequence) -> bool:
    p = strip_zero_root(p)
    if len(p) <= 1:
        return False
    g = gcd_poly(p, derivative(p))
    return count_positive_roots(g) > 0


def laurent_to_poly(exponents: Sequence[int], coeffs: Sequence) -> Poly:
    """``sum c_j x^{a_j}`` times ``x^{-min a}`` as a dense polynomial."""
    exps = [int(e) for e in exponents]
    lo = min(exps)
    out = [Fraction(0)] * (max(exps) - lo + 1)
    for e, c in zip(exps, coeffs):
        out[e - lo] += Fraction(c)
    return trim(out)
