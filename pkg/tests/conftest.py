from __future__ import annotations

import os
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.register_profile("thorough", parent=settings.get_profile("default"), max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def rationals(bound: int = 10):
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, bound))


def int_matrices(rows, cols, lo: int = -5, hi: int = 5):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def rational_matrices(rows, cols, bound: int = 6):
    return st.lists(st.lists(rationals(bound), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def lp_feasible(n, A_ub=None, b_ub=None, A_eq=None, b_eq=None, free=True) -> bool:
    """Independent feasibility oracle (scipy HiGHS, floating point).

    Test instances are small rationals and strict signs carry a margin of
    one, so a float solver decides them reliably.
    """
    import numpy as np
    from scipy.optimize import linprog

    kw = {}
    if A_ub:
        kw["A_ub"] = np.array([[float(x) for x in r] for r in A_ub])
        kw["b_ub"] = np.array([float(x) for x in b_ub])
    if A_eq:
        kw["A_eq"] = np.array([[float(x) for x in r] for r in A_eq])
        kw["b_eq"] = np.array([float(x) for x in b_eq])
    res = linprog(np.zeros(n), bounds=[(None, None) if free else (0, None)] * n, method="highs", **kw)
    return res.status == 0
