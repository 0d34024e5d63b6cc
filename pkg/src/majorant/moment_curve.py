"""Moment-curve frequency tuples and their closed-form certificate data.

Consecutive points t, t+1, ..., t+d on the curve (t, t^2, ..., t^d) carry
fully explicit certificate vectors: the null-vector entries are signed
products of binomial factors, the primitive entries sum to 1, and every
entry grows like k^d.  This module provides those closed forms plus the
small Vinogradov-system facts behind the weak (constant-loss) majorant
bound on the curve.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import factorial
from typing import Sequence

from .cvector import CVector, Real, build_c
from .errors import BudgetError, DimensionError, DomainError
from .exact_lattice import IntMatrix, Vec, det_exact
from .lp_engine import ENUM_BUDGET, EvalConfig, lp_norm_quadrature


def gamma_point(d: int, t: int) -> Vec:
    """Point (t, t^2, ..., t^d) on the d-dimensional moment curve."""
    if d < 1:
        raise DimensionError("dimension must be at least 1")
    return tuple(t**i for i in range(1, d + 1))


def factorial_product(d: int) -> int:
    """d! (d-1)! ... 1!, the gcd of the closed-form null vector."""
    out = 1
    for j in range(1, d + 1):
        out *= factorial(j)
    return out


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r != 0:
        raise ArithmeticError(f"expected {num} divisible by {den}")
    return q


def c_closed_form(d: int, k: int) -> CVector:
    """Certificate vector of gamma(k), ..., gamma(k+d) from the closed form.

    c_i = (-1)^i [k (k+1) ... (k+i-1) / i!] [(k+i+1) ... (k+d) / (d-i)!],
    each bracket an exact integer; the null vector is c scaled by the
    factorial product.  Integrality is asserted, never rounded.
    """
    if d < 1:
        raise DimensionError("dimension must be at least 1")
    if k < 1:
        raise DomainError("curve parameter k must be at least 1")
    scale = factorial_product(d)
    c = []
    for i in range(d + 1):
        rising = 1
        for j in range(i):
            rising *= k + j
        falling = 1
        for j in range(i + 1, d + 1):
            falling *= k + j
        entry = _exact_div(rising, factorial(i)) * _exact_div(falling, factorial(d - i))
        c.append(-entry if i % 2 else entry)
    return build_c(tuple(x * scale for x in c))


def smallest_admissible_k(d: int, p: Real) -> tuple[int, CVector]:
    """Smallest k >= 1 with every |c_i(k)| > p/2, plus its certificate vector.

    Exists because the smallest entry grows like k^d; the scan is bounded
    accordingly.
    """
    pf = Fraction(p)
    if pf <= 0:
        raise DomainError("exponent must be positive")
    k = 1
    while True:
        cv = c_closed_form(d, k)
        if all(2 * abs(x) > pf for x in cv.c):
            return k, cv
        k += 1


def vandermonde_check(d: int, k: int) -> bool:
    """Whether det[(k+j)^i, i,j = 0..d] equals d! (d-1)! ... 1! exactly."""
    if d < 1:
        raise DimensionError("dimension must be at least 1")
    rows = [[(k + j) ** i for j in range(d + 1)] for i in range(d + 1)]
    return det_exact(IntMatrix.from_rows(rows)) == factorial_product(d)


MAX_WEAK_SUPPORT = 6  # keeps the even-p cross-check enumerations feasible


def weak_majorant_ratio(
    d: int,
    p: Real,
    coeffs: Sequence[Real],
    majorant: Sequence[Real],
    support: Sequence[int],
    cfg: EvalConfig | None = None,
) -> float:
    """Ratio of L^p norms of the signed and majorant sums on curve points.

    Frequencies are gamma(t) for t in support.  For 2 <= p <= 2d the ratio
    is bounded by (d!)^(1/2d) uniformly in the coefficients; values are
    computed by quadrature.
    """
    cfg = cfg or EvalConfig()
    if d < 1:
        raise DimensionError("dimension must be at least 1")
    pf = float(p)
    if not 2 <= pf <= 2 * d:
        raise DomainError(f"exponent must lie in [2, {2 * d}]")
    ts = list(support)
    if not ts or len(ts) != len(set(ts)):
        raise DomainError("support must be nonempty distinct integers")
    if len(ts) > MAX_WEAK_SUPPORT:
        raise DomainError(f"support limited to {MAX_WEAK_SUPPORT} points")
    if len(coeffs) != len(ts) or len(majorant) != len(ts):
        raise DimensionError("coefficient length differs from support length")
    big = [float(x) for x in majorant]
    small = [float(x) for x in coeffs]
    if any(b < 0 for b in big):
        raise DomainError("majorant coefficients must be nonnegative")
    if all(b == 0 for b in big):
        raise DomainError("majorant coefficients must not all vanish")
    if any(abs(s) > b for s, b in zip(small, big)):
        raise DomainError("majorant must dominate the coefficients entrywise")
    freqs = [gamma_point(d, t) for t in ts]
    num = lp_norm_quadrature(freqs, small, pf, cfg).value
    den = lp_norm_quadrature(freqs, big, pf, cfg).value
    return (num / den) ** (1.0 / pf)


def weak_majorant_bound(d: int) -> float:
    """(d!)^(1/2d), the uniform constant in the weak majorant bound."""
    if d < 1:
        raise DimensionError("dimension must be at least 1")
    return float(factorial(d)) ** (1.0 / (2 * d))


def vinogradov_diagonal_count(values: Sequence[int], d: int) -> int:
    """Number of permutations of `values` that match it as a multiset.

    For r = len(values) <= d these are exactly the solutions of the r-point
    Vinogradov system with power sums up to degree d that share the right-
    hand side of `values`; there are no others.
    """
    r = len(values)
    if r < 1:
        raise DimensionError("tuple must be nonempty")
    if r > d:
        raise DomainError("tuple length must not exceed the power-sum degree")
    out = factorial(r)
    for mult in Counter(values).values():
        out //= factorial(mult)
    return out


def vinogradov_box_search(
    r: int, d: int, radius: int, budget: int = ENUM_BUDGET
) -> list[tuple[Vec, Vec]]:
    """Exhaustive search for non-permutation solution pairs in a box.

    Enumerates all r-tuples with entries in [-radius, radius], groups them by
    their first d power sums, and reports every pair inside one group whose
    sorted tuples differ.  For r <= d the expected result is the empty list.
    """
    if r < 1:
        raise DimensionError("tuple length must be at least 1")
    if r > d:
        raise DomainError("tuple length must not exceed the power-sum degree")
    if radius < 0:
        raise DomainError("radius must be nonnegative")
    side = 2 * radius + 1
    if side**r > budget:
        raise BudgetError(f"{side}^{r} tuples exceed the budget of {budget}")
    groups: dict[Vec, dict[Vec, Vec]] = {}
    offenders: list[tuple[Vec, Vec]] = []
    for combo in itertools.product(range(-radius, radius + 1), repeat=r):
        key = tuple(sum(x**j for x in combo) for j in range(1, d + 1))
        canon = tuple(sorted(combo))
        bucket = groups.setdefault(key, {})
        if canon not in bucket:
            for other in bucket.values():
                offenders.append((other, combo))
            bucket[canon] = combo
    return offenders
