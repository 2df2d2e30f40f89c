"""Reproducible instance generators for tests and experiment scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from galecert import linalg
from galecert.geometry import ExponentConfiguration

THREE_ROOTS_POINTS = [[0, 4], [5, 4], [2, 8], [3, 0], [3, 5]]
THREE_ROOTS_B = [[1, 0], [2, 1], [1, 2], [0, 1], [-4, -4]]


@dataclass
class Instance:
    points: list[list[Fraction]]
    C: list[list[Fraction]]
    B: Optional[list[list[Fraction]]] = None
    D: Optional[list[list[Fraction]]] = None
    label: str = ""

    @property
    def d(self) -> int:
        return len(self.C)

    @property
    def n(self) -> int:
        return len(self.points)


def three_roots(c) -> Instance:
    """Two trinomial-like equations in two variables with a parameter ``c``.

    Has three positive solutions for small ``c > 0`` and one for large ``c``,
    and comes with a hand-made Gale pair ``(B, D)``.
    """
    c = Fraction(c)
    C = [[-1, -1, 1, 1, 0], [-(3 * c + 8), -c, 2 * c + 8, 0, 2]]
    D = [[1, 1, 0], [1, 1, 2], [1, 2, 1], [1, 0, 1], [c, -4, -4]]
    return Instance(
        linalg.as_fractions(THREE_ROOTS_POINTS),
        linalg.as_fractions(C),
        linalg.as_fractions(THREE_ROOTS_B),
        linalg.as_fractions(D),
        f"three_roots(c={c})",
    )


def random_rational(rng: random.Random, bound: int = 10) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_points(rng: random.Random, d: int, n: int, exp_max: int = 4) -> list[list[Fraction]]:
    """Distinct integer points spanning ``R^d`` affinely."""
    while (exp_max + 1) ** d < n or exp_max < 1:
        exp_max += 1
    while True:
        pts = [tuple(rng.randint(0, exp_max) for _ in range(d)) for _ in range(n)]
        if len(set(pts)) < n:
            continue
        try:
            ExponentConfiguration.from_points(pts)
        except linalg.RankError:
            continue
        return [[Fraction(x) for x in p] for p in pts]


def random_instance(rng: random.Random, d: int, n: int, bound: int = 10, exp_max: int = 4) -> Instance:
    pts = random_points(rng, d, n, exp_max)
    C = [[random_rational(rng, bound) for _ in range(n)] for _ in range(d)]
    while linalg.rank(C) < d:
        C = [[random_rational(rng, bound) for _ in range(n)] for _ in range(d)]
    return Instance(pts, C, label=f"random(d={d}, n={n})")


def soundness_corpus(seed: int = 2024, size: int = 200, bound: int = 10, exp_max: int = 4) -> Iterator[Instance]:
    """Random integer-exponent instances with ``d in {1, 2}`` and ``d+2 <= n <= d+3``."""
    rng = random.Random(seed)
    for i in range(size):
        d = 1 if i % 2 == 0 else 2
        n = rng.randint(d + 2, d + 3)
        inst = random_instance(rng, d, n, bound, exp_max)
        inst.label = f"corpus[{i}] d={d} n={n}"
        yield inst


def circuit_corpus(seed: int = 7, size: int = 100, bound: int = 10, exp_max: int = 12) -> Iterator[Instance]:
    """Univariate trinomials (``k = 1``, ``d = 1``) with no repeated positive root."""
    from galecert import sturm

    rng = random.Random(seed)
    made = 0
    while made < size:
        exps = sorted(rng.sample(range(exp_max + 1), 3))
        coeffs = [random_rational(rng, bound) for _ in range(3)]
        if 0 in coeffs:
            continue
        poly = sturm.laurent_to_poly(exps, coeffs)
        if sturm.has_repeated_positive_root(poly):
            continue
        made += 1
        yield Instance([[Fraction(e)] for e in exps], [coeffs], label=f"trinomial{exps}")


def random_gale_matrix(rng: random.Random, n: int, k: int, bound: int = 5) -> list[list[Fraction]]:
    """Integer ``n x (k+1)`` matrix of full column rank."""
    while True:
        D = [[Fraction(rng.randint(-bound, bound)) for _ in range(k + 1)] for _ in range(n)]
        if linalg.rank(D) == k + 1:
            return D


def even_exponent_instance(rng: random.Random, d: int, n: int, exp_max: int = 2) -> Instance:
    """All exponents even, built so that ``x = (1, ..., 1)`` is a root."""
    pts = random_points(rng, d, n, exp_max)
    pts = [[2 * x for x in p] for p in pts]
    rows = []
    while len(rows) < d:
        row = [random_rational(rng, 10) for _ in range(n - 1)]
        row.append(-sum(row))  # vanishes at the all-ones point
        if any(row):
            rows.append(row)
        if len(rows) == d and linalg.rank(rows) < d:
            rows.pop()
    return Instance(pts, rows, label=f"even(d={d}, n={n})")
