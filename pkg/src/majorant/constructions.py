"""Counterexample construction and certification.

Each constructor picks a frequency tuple, derives its certificate vector,
chooses signed coefficients whose majorant comparison fails on an explicit
open exponent interval, and then certifies the failure numerically: the
mean of |signed sum|^p must exceed the mean of |majorant sum|^p by a margin
safely above the quadrature error estimate.

Certification uses a shrinking magnitude schedule.  Large magnitudes risk
the higher-order remainder swamping the leading term; tiny magnitudes push
the leading term itself (proportional to magnitude^|c|) below floating-
point resolution.  A log-scale feasibility gate skips magnitudes that
cannot possibly resolve, which also keeps pathological inputs (certificate
vectors with entries in the hundreds) from triggering hopeless quadrature.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from math import isfinite, log2
from typing import Any, NamedTuple, Sequence

from .cvector import (
    CVector,
    OpenInterval,
    Real,
    build_c,
    build_v,
    is_even_exponent,
    p_interval,
    sign_condition,
)
from .errors import BudgetError, DomainError, HypothesisError, MajorantError
from .exact_lattice import (
    Abundance,
    FrequencySet,
    Vec,
    abundance_scan,
    affine_dimension,
    is_affinely_independent,
    lifted_matrix,
    rank_exact,
    reduce_full_dim,
)
from .lp_engine import (
    EvalConfig,
    SmpDifference,
    leading_coefficient,
    paired_difference,
    smp_difference,
)
from .moment_curve import gamma_point, smallest_admissible_k

MAGNITUDE_START = 0.25
MAGNITUDE_FLOOR = 1e-4
# Margins at or below this are indistinguishable from accumulated roundoff
# in a paired grid evaluation, independent of the error estimate.
MARGIN_FLOOR = 2e-14
# Largest exponent for which |sum|^p stays inside double range for the
# coefficient scales used here.
P_TESTED_MAX = 600.0

SCHEMA_VERSION = 1


def assign_signs(cv: CVector, magnitude: float) -> tuple[float, ...]:
    """Coefficients of size `magnitude` with one sign flipped.

    The flip sits at the first index where the certificate vector is odd,
    so the monomial a^(|c|) picks up a minus sign and the violation's
    leading term is strictly positive.  An odd entry always exists because
    the certificate vector is primitive.
    """
    if not 0.0 < magnitude < 1.0:
        raise DomainError("magnitude must lie in (0, 1)")
    flip = next(i for i, x in enumerate(cv.c) if x % 2 != 0)
    return tuple(-magnitude if i == flip else magnitude for i in range(len(cv.c)))


@dataclass(frozen=True)
class Certificate:
    """Fully explicit counterexample plus the numbers that certify it.

    `frequencies` starts with the origin, whose coefficient is fixed at 1;
    the remaining coefficients are the signed small ones.  `lhs` is the
    majorant (absolute-value) side, `rhs` the signed side, and `margin` is
    rhs - lhs in the p-th power scale (means of |sum|^p, not norms), so a
    positive margin exhibits the violation.  `verified` is False when no
    magnitude in the schedule produced a margin above threshold; `note`
    then says why.
    """

    theorem_tag: str
    dim: int
    frequencies: tuple[Vec, ...]
    coefficients: tuple[float, ...]
    cvector: CVector
    p_interval: OpenInterval
    p_tested: float
    verified: bool
    lhs: float | None
    rhs: float | None
    margin: float | None
    error_estimate: float | None
    grid_points_per_axis: int | None
    eval_config: EvalConfig
    note: str = ""
    reduction: dict[str, Any] | None = None

    def to_json(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "theorem_tag": self.theorem_tag,
            "dim": self.dim,
            "frequencies": [list(f) for f in self.frequencies],
            "coefficients": list(self.coefficients),
            "cvector": self.cvector.to_json(),
            "p_interval": [self.p_interval.lo, self.p_interval.hi],
            "p_tested": self.p_tested,
            "verified": self.verified,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "error_estimate": self.error_estimate,
            "grid_points_per_axis": self.grid_points_per_axis,
            "eval_config": asdict(self.eval_config),
            "note": self.note,
            "reduction": self.reduction,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Certificate":
        return cls(
            theorem_tag=data["theorem_tag"],
            dim=data["dim"],
            frequencies=tuple(tuple(int(x) for x in f) for f in data["frequencies"]),
            coefficients=tuple(float(x) for x in data["coefficients"]),
            cvector=CVector.from_json(data["cvector"]),
            p_interval=OpenInterval(*data["p_interval"]),
            p_tested=data["p_tested"],
            verified=bool(data["verified"]),
            lhs=data["lhs"],
            rhs=data["rhs"],
            margin=data["margin"],
            error_estimate=data["error_estimate"],
            grid_points_per_axis=data["grid_points_per_axis"],
            eval_config=EvalConfig(**data["eval_config"]),
            note=data.get("note", ""),
            reduction=data.get("reduction"),
        )


def _log2_leading(p: Real, cv: CVector) -> float:
    coef = leading_coefficient(p, cv)
    if coef == 0:
        return float("-inf")
    return log2(abs(coef.numerator)) - log2(coef.denominator)


class _Attempt(NamedTuple):
    verified: bool
    coefficients: tuple[float, ...]
    result: SmpDifference | None
    note: str


def _certify(freqs: Sequence[Vec], cv: CVector, p: Real, cfg: EvalConfig) -> _Attempt:
    """Walk the magnitude schedule until a margin certifies or none can."""
    coeffs = assign_signs(cv, MAGNITUDE_START)
    if float(p) > P_TESTED_MAX:
        return _Attempt(
            False,
            coeffs,
            None,
            f"exponent {float(p):g} is beyond floating-point evaluation range",
        )
    log2_coef = _log2_leading(p, cv)
    floor_log2 = log2(MARGIN_FLOOR)
    magnitude = MAGNITUDE_START
    result: SmpDifference | None = None
    while magnitude >= MAGNITUDE_FLOOR:
        predicted_log2 = log2_coef + 1.0 + cv.total_order * log2(magnitude)
        if predicted_log2 < floor_log2 - 2.0:
            return _Attempt(
                False,
                coeffs,
                result,
                "leading term is below numerical resolution at every usable scale",
            )
        coeffs = assign_signs(cv, magnitude)
        result = smp_difference(freqs, coeffs, p, cfg)
        threshold = max(cfg.margin_safety_factor * result.error_estimate, MARGIN_FLOOR)
        if result.difference > threshold:
            return _Attempt(True, coeffs, result, "")
        if 0.0 < result.difference and result.error_estimate <= cfg.backend_agreement_tol:
            # Converged but unresolvable; shrinking only makes it smaller.
            return _Attempt(
                False,
                coeffs,
                result,
                "positive difference stays below the certification threshold",
            )
        magnitude /= 2.0
    return _Attempt(False, coeffs, result, "magnitude schedule exhausted without certification")


def _finish(
    theorem_tag: str,
    freqs: Sequence[Vec],
    cv: CVector,
    interval: OpenInterval,
    p: Real,
    cfg: EvalConfig,
    reduction: dict[str, Any] | None = None,
) -> Certificate:
    attempt = _certify(freqs, cv, p, cfg)
    dim = len(freqs[0])
    res = attempt.result
    return Certificate(
        theorem_tag=theorem_tag,
        dim=dim,
        frequencies=((0,) * dim, *freqs),
        coefficients=(1.0, *attempt.coefficients),
        cvector=cv,
        p_interval=interval,
        p_tested=float(p),
        verified=attempt.verified,
        lhs=None if res is None else res.lhs,
        rhs=None if res is None else res.rhs,
        margin=None if res is None else res.difference,
        error_estimate=None if res is None else res.error_estimate,
        grid_points_per_axis=None if res is None else res.grid_points_per_axis,
        eval_config=cfg,
        note=attempt.note,
        reduction=reduction,
    )


def _greedy_affine_basis(points: Sequence[Vec], d: int) -> list[Vec] | None:
    """First affinely independent (d+1)-subset of `points` in listed order."""
    chosen: list[Vec] = []
    for pt in points:
        trial = chosen + [pt]
        if rank_exact(lifted_matrix(trial)) == len(trial):
            chosen = trial
            if len(chosen) == d + 1:
                return chosen
    return None


def construct_independent(g: FrequencySet, cfg: EvalConfig | None = None) -> Certificate:
    """Counterexample for a finite, affinely dependent frequency set.

    Translates so one point sits at the origin, selects an affinely
    independent subset of full dimension among the rest, and certifies at
    the odd midpoint 2 m_plus - 3 of the violation interval.
    """
    cfg = cfg or EvalConfig()
    if g.generator is not None:
        raise HypothesisError(
            "set has a generator; use construct_abundant for infinite sets"
        )
    if is_affinely_independent(g):
        raise HypothesisError(
            "affinely independent set: the majorant property holds for every p"
        )
    reduction_rec: dict[str, Any] | None = None
    work = g
    if affine_dimension(g) < g.dim:
        red = reduce_full_dim(g)
        work = red.reduced
        assert red.basis is not None  # dependent sets have at least two points
        reduction_rec = {
            "origin": list(red.n_star),
            "basis_columns": [list(red.basis.column(j)) for j in range(red.basis.cols)],
        }
    pts = work.points
    d = work.dim
    for bullet in pts:
        rest = [q for q in pts if q != bullet]
        chosen = _greedy_affine_basis(rest, d)
        if chosen is not None:
            break
    else:
        raise HypothesisError("no point leaves behind a full-dimensional subset")
    translated = tuple(tuple(x - y for x, y in zip(q, bullet)) for q in chosen)
    cv = build_c(build_v(translated))
    interval = p_interval(cv)
    p_star = 2 * cv.m_plus - 3
    return _finish("independent", translated, cv, interval, p_star, cfg, reduction_rec)


def construct_abundant(
    g: FrequencySet,
    how_many: int,
    cfg: EvalConfig | None = None,
    scan_budget: int = 64,
    stream_budget: int = 400,
) -> list[Certificate]:
    """Certificates with strictly increasing m_plus from an abundant set.

    The abundance scan supplies a d-tuple whose translated span meets the
    set in points of unboundedly many determinant values; each new point
    beyond the witness gives a fresh certificate vector, and those with a
    larger m_plus than everything before them are kept, so the violation
    intervals march off to infinity without overlapping.
    """
    cfg = cfg or EvalConfig()
    if how_many < 1:
        raise DomainError("how_many must be at least 1")
    scan = abundance_scan(g, scan_budget)
    if scan.status is Abundance.NO:
        raise HypothesisError("set is not affinely abundant; no escalating family exists")
    if scan.status is Abundance.INCONCLUSIVE:
        raise BudgetError(
            "abundance scan inconclusive within budget; raise scan_budget"
        )
    assert scan.witness is not None and scan.dtuple is not None
    bullet = next(q for q in scan.witness if q not in scan.dtuple)
    anchor = tuple(tuple(x - y for x, y in zip(q, bullet)) for q in scan.dtuple)
    skip = set(scan.dtuple) | {bullet}
    certs: list[Certificate] = []
    last_m = 1
    for n0 in g.stream(stream_budget):
        if n0 in skip:
            continue
        t0 = tuple(x - y for x, y in zip(n0, bullet))
        freqs = (t0, *anchor)
        v = build_v(freqs)
        if sum(v) == 0 or all(x == 0 for x in v):
            continue
        cv = build_c(v)
        if cv.m_plus <= last_m or cv.m_plus == cv.m_minus or cv.m_plus < 2:
            continue
        interval = p_interval(cv)
        p_star = 2 * cv.m_plus - 3
        certs.append(_finish("abundant", freqs, cv, interval, p_star, cfg))
        last_m = cv.m_plus
        if len(certs) == how_many:
            return certs
    if not certs:
        raise BudgetError("stream budget exhausted before any certificate was found")
    return certs


def construct_moment(d: int, p: Real, cfg: EvalConfig | None = None) -> Certificate:
    """Counterexample at a prescribed non-even exponent on the moment curve.

    Chooses the smallest curve offset k whose certificate vector has all
    entries above p/2 in absolute value; the violation interval is then the
    whole even-to-even gap around p.
    """
    cfg = cfg or EvalConfig()
    if Fraction(p) <= 0:
        raise DomainError("exponent must be positive")
    if is_even_exponent(p):
        raise DomainError("even integer exponents admit no strict violation")
    k, cv = smallest_admissible_k(d, p)
    if not sign_condition(p, cv):
        raise HypothesisError("sign condition failed for the selected curve offset")
    half = Fraction(p) // 2
    interval = OpenInterval(2 * half, 2 * half + 2)
    freqs = tuple(gamma_point(d, k + i) for i in range(d + 1))
    cert = _finish("moment_curve", freqs, cv, interval, p, cfg)
    note = f"curve offset k={k}"
    if cert.note:
        note = f"{note}; {cert.note}"
    return replace(cert, note=note)


class VerifyResult(NamedTuple):
    """Outcome of re-deriving a certificate's margin from scratch.

    verdict is True (margin certifies), False (evaluation converged but the
    margin does not certify), or the string "inconclusive" (evaluation did
    not converge at the configured grid budget).
    """

    verdict: bool | str
    margin: float
    error_estimate: float
    grid_points_per_axis: int
    lhs: float
    rhs: float

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "margin": self.margin,
            "error_estimate": self.error_estimate,
            "grid_points_per_axis": self.grid_points_per_axis,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


def verify_certificate(cert: Certificate, cfg: EvalConfig | None = None) -> VerifyResult:
    """Recompute both sides on a paired grid and judge the margin.

    Trusts nothing but the stored frequencies, coefficients, and exponent;
    in particular a tampered certificate whose coefficients are all
    positive re-verifies False because both rows then agree identically.
    """
    cfg = cfg or cert.eval_config
    res = paired_difference(cert.frequencies, cert.coefficients, cert.p_tested, cfg)
    converged = res.error_estimate <= cfg.backend_agreement_tol
    finite = isfinite(res.difference) and isfinite(res.error_estimate)
    threshold = max(cfg.margin_safety_factor * res.error_estimate, MARGIN_FLOOR)
    if not finite or not converged:
        verdict: bool | str = "inconclusive"
    elif res.difference > threshold:
        verdict = True
    else:
        verdict = False
    return VerifyResult(
        verdict=verdict,
        margin=res.difference,
        error_estimate=res.error_estimate,
        grid_points_per_axis=res.grid_points_per_axis,
        lhs=res.lhs,
        rhs=res.rhs,
    )


def emit_plot_data(
    cert: Certificate, p_samples: int = 9, cfg: EvalConfig | None = None
) -> list[dict[str, float]]:
    """Evaluate both sides at evenly spaced interior points of the interval.

    A request for zero samples returns an empty table.
    """
    if p_samples < 0:
        raise DomainError("p_samples must be nonnegative")
    cfg = cfg or cert.eval_config
    lo, hi = cert.p_interval
    span = hi - lo
    rows = []
    for i in range(p_samples):
        p = lo + span * (i + 1) / (p_samples + 1)
        res = paired_difference(cert.frequencies, cert.coefficients, p, cfg)
        rows.append(
            {"p": p, "lhs": res.lhs, "rhs": res.rhs, "difference": res.difference}
        )
    return rows


def classify(
    g: FrequencySet,
    scan_budget: int = 64,
    cfg: EvalConfig | None = None,
    with_certificate: bool = True,
) -> dict[str, Any]:
    """Full structural report: dimension, independence, abundance, verdict.

    The majorant property holds at every p exactly when the set is affinely
    independent; otherwise a certificate is attached when one can be built.
    """
    cfg = cfg or EvalConfig()
    sample = FrequencySet(g.dim, tuple(g.stream(max(g.dim + 2, len(g.points), 8))))
    adim = affine_dimension(sample)
    infinite = g.is_structurally_infinite()
    independent = not infinite and is_affinely_independent(sample)
    scan = abundance_scan(g, scan_budget)
    report: dict[str, Any] = {
        "dim": g.dim,
        "affine_dimension": adim,
        "affinely_independent": independent,
        "abundance": scan.status.value,
        "note": "",
        "certificate": None,
    }
    if independent:
        report["smp_status"] = "holds_all_p"
        return report
    # Any dependent set admits a violation; the supported generators
    # enumerate distinct points, so an infinite set is always dependent.
    report["smp_status"] = "violated_with_certificate"
    if not with_certificate:
        return report
    try:
        if scan.status is Abundance.YES:
            cert = construct_abundant(g, 1, cfg, scan_budget=scan_budget)[0]
        elif infinite:
            cert = construct_independent(sample, cfg)
        else:
            cert = construct_independent(g, cfg)
        report["certificate"] = cert.to_json()
    except MajorantError as exc:
        report["note"] = f"certificate construction failed: {exc}"
    return report
