"""L^p norms of trigonometric polynomials on the torus, three ways.

Backends: tensor-grid quadrature (any p > 0, d <= 4), exact rational
enumeration at even integer p, and a truncated series around a dominant
constant term.  The quadrature rule is the rectangle rule per axis, which on
the torus is the trapezoid rule and converges spectrally for smooth
integrands; error estimates come from comparing two successive grid
doublings.

Signed-versus-majorant differences are always evaluated pairwise on the same
grid: the two integrands share all sign-even spectral content, so the
quadrature and rounding errors largely cancel and differences far below
either integral's own error remain trustworthy.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .cvector import CVector, Real, build_c, build_v, gen_binom, is_even_exponent, multinomial
from .errors import (
    BudgetError,
    ConvergenceError,
    DimensionError,
    DomainError,
    HypothesisError,
)
from .exact_lattice import Vec

QUAD_POINT_BUDGET = 1 << 22  # total tensor-grid points per evaluation
QUAD_MAX_DIM = 4
QUAD_MAX_DOUBLINGS = 16
ENUM_BUDGET = 10_000_000


@dataclass(frozen=True)
class EvalConfig:
    """Numerical knobs shared by the quadrature and series backends."""

    grid_points_per_axis: int = 256
    series_total_degree_cutoff: int = 12
    backend_agreement_tol: float = 1e-9
    margin_safety_factor: float = 10.0

    def __post_init__(self) -> None:
        if self.grid_points_per_axis < 4:
            raise DomainError("grid must have at least 4 points per axis")
        if self.series_total_degree_cutoff < 0:
            raise DomainError("series cutoff must be nonnegative")
        if not self.backend_agreement_tol > 0:
            raise DomainError("tolerance must be positive")
        if not self.margin_safety_factor > 1:
            raise DomainError("safety factor must exceed 1")


def _check_freqs(freqs: Sequence[Vec]) -> int:
    if not freqs:
        raise DimensionError("no frequencies")
    d = len(freqs[0])
    if d == 0:
        raise DimensionError("dimension must be at least 1")
    if any(len(f) != d for f in freqs):
        raise DimensionError("frequency vectors of mixed dimension")
    if len(set(freqs)) != len(freqs):
        raise DomainError("frequencies must be pairwise distinct")
    return d


def _check_real_coeffs(coeffs: Sequence[Real], count: int) -> None:
    if len(coeffs) != count:
        raise DimensionError("coefficient count differs from frequency count")
    for x in coeffs:
        if isinstance(x, complex):
            raise DomainError("coefficients must be real")
        if not math.isfinite(float(x)):
            raise DomainError("coefficients must be finite")


def _abs_power(values: np.ndarray, p: float) -> np.ndarray:
    intensity = values.real**2 + values.imag**2
    if float(p) == 2.0:
        return intensity
    half = float(p) / 2.0
    if half == int(half) and half >= 1:
        return intensity ** int(half)
    return intensity**half


def _phase_factor(freq: Vec, t: np.ndarray, d: int) -> np.ndarray:
    """exp(2 pi i freq.x) on the tensor grid, built axis by axis."""
    out: Optional[np.ndarray] = None
    for axis, k in enumerate(freq):
        if k == 0:
            continue
        shape = [1] * d
        shape[axis] = t.size
        factor = np.exp((2j * np.pi * k) * t).reshape(shape)
        out = factor if out is None else out * factor
    if out is None:
        return np.ones((1,) * d)
    return out


def _mean_abs_powers(
    freqs: Sequence[Vec],
    coeff_rows: Sequence[Sequence[float]],
    p: float,
    n: int,
) -> list[float]:
    """Mean of |sum_j c_j e(n_j . x)|^p over the n^d grid, one per coeff row.

    All rows share the per-frequency phase arrays, keeping their errors
    correlated so that differences between rows are computed stably.
    """
    d = len(freqs[0])
    t = np.arange(n) / n
    totals = [np.zeros((n,) * d, dtype=complex) for _ in coeff_rows]
    for j, f in enumerate(freqs):
        phase = _phase_factor(f, t, d)
        for row, total in zip(coeff_rows, totals):
            if row[j] != 0.0:
                total += row[j] * phase
        del phase
    return [float(np.mean(_abs_power(total, p))) for total in totals]


class QuadResult(NamedTuple):
    value: float
    error_estimate: float
    grid_points_per_axis: int


def _start_grid(requested: int, d: int) -> int:
    n = max(8, requested)
    while n**d > QUAD_POINT_BUDGET and n > 8:
        n //= 2
    return n


def lp_norm_quadrature(
    freqs: Sequence[Vec], coeffs: Sequence[Real], p: Real, cfg: EvalConfig
) -> QuadResult:
    """p-th power of the L^p norm of sum_j coeffs[j] e(freqs[j] . x).

    Doubles the per-axis grid until two successive values agree within the
    configured tolerance or the point budget runs out; the last successive
    difference is reported as the error estimate, never silently dropped.
    """
    d = _check_freqs(freqs)
    _check_real_coeffs(coeffs, len(freqs))
    pf = float(p)
    if not pf > 0:
        raise DomainError("exponent must be positive")
    if d > QUAD_MAX_DIM:
        raise DomainError(f"tensor quadrature is limited to dimension {QUAD_MAX_DIM}")
    row = [float(x) for x in coeffs]
    n = _start_grid(cfg.grid_points_per_axis, d)
    prev = _mean_abs_powers(freqs, [row], pf, max(4, n // 2))[0]
    value = _mean_abs_powers(freqs, [row], pf, n)[0]
    err = abs(value - prev)
    for _ in range(QUAD_MAX_DOUBLINGS):
        if err <= cfg.backend_agreement_tol or (2 * n) ** d > QUAD_POINT_BUDGET:
            break
        n *= 2
        prev, value = value, _mean_abs_powers(freqs, [row], pf, n)[0]
        err = abs(value - prev)
    return QuadResult(value, err, n)


class PairedDifference(NamedTuple):
    lhs: float  # majorant (absolute-value) side
    rhs: float  # signed side
    difference: float  # rhs - lhs; positive means the majorant comparison fails
    error_estimate: float  # successive-grid movement of the difference
    grid_points_per_axis: int


def paired_difference(
    freqs: Sequence[Vec],
    signed: Sequence[Real],
    p: Real,
    cfg: EvalConfig,
) -> PairedDifference:
    """Signed minus absolute-value norm powers, evaluated on shared grids."""
    d = _check_freqs(freqs)
    _check_real_coeffs(signed, len(freqs))
    pf = float(p)
    if not pf > 0:
        raise DomainError("exponent must be positive")
    if d > QUAD_MAX_DIM:
        raise DomainError(f"tensor quadrature is limited to dimension {QUAD_MAX_DIM}")
    srow = [float(x) for x in signed]
    arow = [abs(x) for x in srow]

    def at(n: int) -> tuple[float, float]:
        signed_mean, abs_mean = _mean_abs_powers(freqs, [srow, arow], pf, n)
        return abs_mean, signed_mean

    n = _start_grid(cfg.grid_points_per_axis, d)
    lhs_p, rhs_p = at(max(4, n // 2))
    lhs_c, rhs_c = at(n)
    err = abs((rhs_c - lhs_c) - (rhs_p - lhs_p))
    for _ in range(QUAD_MAX_DOUBLINGS):
        if err <= cfg.backend_agreement_tol or (2 * n) ** d > QUAD_POINT_BUDGET:
            break
        n *= 2
        prev_diff = rhs_c - lhs_c
        lhs_c, rhs_c = at(n)
        err = abs((rhs_c - lhs_c) - prev_diff)
    return PairedDifference(lhs_c, rhs_c, rhs_c - lhs_c, err, n)


def lp_norm_even_exact(
    freqs: Sequence[Vec], coeffs: Sequence[Real], s: int, budget: int = ENUM_BUDGET
) -> Fraction:
    """Exact rational value of the L^{2s} norm power for rational coefficients.

    Expanding the 2s-th power pairs an s-fold product against its conjugate;
    only index tuples whose frequency sums collide survive integration, so
    the value is the sum over attained frequency sums of the squared grouped
    coefficient products.
    """
    _check_freqs(freqs)
    if not isinstance(s, int) or isinstance(s, bool) or s < 1:
        raise DomainError("s must be a positive integer")
    _check_real_coeffs(coeffs, len(freqs))
    m = len(freqs)
    if m**s > budget:
        raise BudgetError(f"{m}^{s} enumeration exceeds the budget of {budget}")
    exact = [Fraction(x) for x in coeffs]
    grouped: dict[Vec, Fraction] = {}
    for combo in itertools.product(range(m), repeat=s):
        total = tuple(sum(freqs[i][axis] for i in combo) for axis in range(len(freqs[0])))
        prod = Fraction(1)
        for i in combo:
            prod *= exact[i]
        grouped[total] = grouped.get(total, Fraction(0)) + prod
    return sum((t * t for t in grouped.values()), Fraction(0))


def i_indicator(u: Sequence[int], freqs: Sequence[Vec]) -> int:
    """1 when sum_i u_i n_i = 0 in Z^d, else 0; exact integer arithmetic."""
    d = _check_freqs(freqs)
    if len(u) != len(freqs):
        raise DimensionError("weight length differs from frequency count")
    return int(all(sum(ui * f[axis] for ui, f in zip(u, freqs)) == 0 for axis in range(d)))


class TaylorResult(NamedTuple):
    value: Real
    converged: bool
    tail_estimate: float


def _compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multi_indices(max_order: int, parts: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(max_order + 1):
        out.extend(_compositions(total, parts))
    return out


def _power(b: Sequence, idx: Sequence[int]):
    out = b[0] ** idx[0]
    for x, e in zip(b[1:], idx[1:]):
        if e:
            out = out * x**e
    return out


def lp_norm_taylor(
    freqs: Sequence[Vec], b: Sequence[Real], p: Real, cfg: EvalConfig
) -> TaylorResult:
    """Series value of the norm power of 1 + sum_j b_j e(n_j . x).

    Expands both conjugate factors of |1 + g|^p into generalized binomial
    series and keeps the multi-index pairs (beta, gamma) of total order up to
    the configured cutoff whose frequency sums cancel exactly.  When the
    frequency tuple is affinely independent the surviving pairs are the
    diagonal plus integer multiples of the primitive null direction, which is
    enumerated directly; otherwise all pairs are scanned against the exact
    integer indicator.

    With rational p and coefficients the computation is exact rational
    arithmetic; otherwise floats.  The reported tail estimate is ten times
    the largest included top-degree magnitude; converged means it is within
    the configured backend tolerance.
    """
    d = _check_freqs(freqs)
    m = len(freqs)
    _check_real_coeffs(b, m)
    if not float(p) > 0:
        raise DomainError("exponent must be positive")
    if max(abs(float(x)) for x in b) >= 1.0:
        raise ConvergenceError("series requires every |b_i| < 1")
    exact_mode = not isinstance(p, float) and all(not isinstance(x, float) for x in b)
    k_max = cfg.series_total_degree_cutoff
    gb_exact = [gen_binom(Fraction(p), j) for j in range(k_max + 1)]
    if exact_mode:
        gb = gb_exact
        bvals = [Fraction(x) for x in b]
        zero = Fraction(0)
    else:
        gb = [float(x) for x in gb_exact]
        bvals = [float(x) for x in b]
        zero = 0.0

    cv: Optional[CVector] = None
    if m == d + 1:
        v = build_v(freqs)
        if sum(v) != 0:
            cv = build_c(v)

    degree_mag: dict[int, float] = {}
    value = zero

    def add(term, degree: int) -> None:
        nonlocal value
        value = value + term
        degree_mag[degree] = degree_mag.get(degree, 0.0) + abs(float(term))

    if cv is not None:
        # diagonal: beta = gamma, any multi-index
        for beta in _multi_indices(k_max // 2, m):
            t = gb[sum(beta)] * multinomial(beta) * _power(bvals, beta)
            add(t * t, 2 * sum(beta))
        # coupled: beta - gamma = k c, k != 0; symmetric in k <-> -k
        span = cv.total_order
        k = 1
        while span * k <= k_max:
            shift_p = tuple(k * x for x in cv.c_plus)
            shift_m = tuple(k * x for x in cv.c_minus)
            base = span * k
            for delta in _multi_indices((k_max - base) // 2, m):
                beta = tuple(a + b_ for a, b_ in zip(delta, shift_p))
                gamma = tuple(a + b_ for a, b_ in zip(delta, shift_m))
                term = (
                    gb[sum(beta)]
                    * gb[sum(gamma)]
                    * multinomial(beta)
                    * multinomial(gamma)
                    * _power(bvals, beta)
                    * _power(bvals, gamma)
                )
                add(2 * term, base + 2 * sum(delta))
            k += 1
    else:
        indices = _multi_indices(k_max, m)
        ind_cache: dict[tuple[int, ...], int] = {}
        for beta in indices:
            sb = sum(beta)
            fb = gb[sb] * multinomial(beta) * _power(bvals, beta)
            for gamma in indices:
                if sb + sum(gamma) > k_max:
                    continue
                diff = tuple(x - y for x, y in zip(beta, gamma))
                hit = ind_cache.get(diff)
                if hit is None:
                    hit = i_indicator(diff, freqs)
                    ind_cache[diff] = hit
                if hit:
                    term = fb * gb[sum(gamma)] * multinomial(gamma) * _power(bvals, gamma)
                    add(term, sb + sum(gamma))

    if is_even_exponent(p) and k_max >= float(p):
        # Every binomial factor beyond order p/2 vanishes, so the cutoff
        # already captured the whole (finite) series.
        return TaylorResult(value, True, 0.0)
    tail = 10.0 * max(degree_mag.get(k_max, 0.0), degree_mag.get(k_max - 1, 0.0))
    return TaylorResult(value, tail <= cfg.backend_agreement_tol, tail)


class SmpDifference(NamedTuple):
    difference: float  # signed norm power minus majorant norm power
    main_term: float  # predicted leading contribution
    lhs: float  # majorant side
    rhs: float  # signed side
    error_estimate: float
    grid_points_per_axis: int


def leading_coefficient(p: Real, cv: CVector) -> Fraction:
    """Exact factor -2 (p/2 choose |c-|)(p/2 choose |c+|) (|c-| choose c-)(|c+| choose c+)."""
    s_minus = sum(cv.c_minus)
    s_plus = sum(cv.c_plus)
    return (
        -2
        * gen_binom(Fraction(p), s_minus)
        * gen_binom(Fraction(p), s_plus)
        * multinomial(cv.c_minus)
        * multinomial(cv.c_plus)
    )


def main_term(p: Real, cv: CVector, a: Sequence[Real]) -> float:
    """Predicted leading value of the signed-minus-majorant difference."""
    w = tuple(x + y for x, y in zip(cv.c_plus, cv.c_minus))
    a_pow = 1.0
    for x, e in zip(a, w):
        a_pow *= float(x) ** e
    return float(leading_coefficient(p, cv)) * (abs(a_pow) - a_pow)


def smp_difference(
    freqs: Sequence[Vec], a: Sequence[Real], p: Real, cfg: EvalConfig
) -> SmpDifference:
    """Signed-versus-majorant norm power difference for 1 + sum a_i e(n_i . x).

    freqs must be d+1 affinely independent vectors (nonzero lifted
    determinant); the difference is quadrature, the main term is the closed
    leading expression from the certificate vector.  A main term of zero
    (e.g. all coefficients already nonnegative) signals a non-probative
    coefficient choice; the difference is still returned.
    """
    d = _check_freqs(freqs)
    if len(freqs) != d + 1:
        raise DimensionError(f"need d+1 = {d + 1} frequency vectors")
    _check_real_coeffs(a, len(freqs))
    if max(abs(float(x)) for x in a) >= 1.0:
        raise DomainError("coefficients must have absolute value below 1")
    v = build_v(freqs)
    if sum(v) == 0:
        raise HypothesisError("frequency tuple is affinely dependent")
    cv = build_c(v)
    ext_freqs = [(0,) * d, *freqs]
    signed = [1.0, *[float(x) for x in a]]
    pd = paired_difference(ext_freqs, signed, p, cfg)
    return SmpDifference(
        difference=pd.difference,
        main_term=main_term(p, cv, a),
        lhs=pd.lhs,
        rhs=pd.rhs,
        error_estimate=pd.error_estimate,
        grid_points_per_axis=pd.grid_points_per_axis,
    )


def g_function(r: Real, p: Real, cfg: EvalConfig) -> float:
    """G(r) = integral over one period of |1 + r e(t)|^p."""
    return lp_norm_quadrature(((0,), (1,)), (1.0, float(r)), p, cfg).value
