"""Sup-norm scans of transform errors over circles and vertical lines,
with the log-convexity certificates that tie them together.

The central quantity is M(r) = sup_{|z|=r} |B(z)| where B is a measure's
transform error L(z) - exp(z**2/2).  Because every measure here lives on
the real line, B(conj z) = conj B(z), so |B| on a circle is determined
by the upper half; symmetric measures add B(-z) = B(z) and a quarter arc
suffices.  Scans sample an arc uniformly (endpoints included) and then
sharpen the best sample by golden-section search down to an angular
resolution of 2**-64, keeping the largest value ever evaluated, so the
reported sup is always a certified lower bound for the true one and in
practice agrees with it to scan resolution.

Three checks are layered on top:

* a two-sided growth envelope, (1/2)exp(r**2/2) <= M(r) <= exp(a*r) +
  exp(r**2/2) once r >= 3a for support half-width a;
* the three-circles inequality: log M(r) is a convex function of log r,
  tested at a chosen triple with explicit slack;
* the three-lines inequality for sups over vertical segments, convex in
  the line's real offset.  Vertical scans are cut off at the height
  where the two transform pieces are both provably negligible, and the
  report carries that off-segment ceiling.

``taylor_coefficients`` recovers power-series coefficients of an
analytic function from equispaced samples on a circle and verifies them
against the discrete Cauchy bound max|f| / rho**n, which holds exactly
for the sampled sums by the triangle inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    CauchyBoundViolation,
    ConfigError,
    ConvexityViolation,
    EnvelopeViolation,
)
from .measures import Measure
from .precision import PComplex, PReal, _check_bits, cos_sin, exp, log, pi_value, sqrt

__all__ = [
    "CircleSupReport",
    "LineSupReport",
    "GrowthProfile",
    "ThreeCirclesReport",
    "ThreeLinesReport",
    "TaylorReport",
    "sup_abs_on_circle",
    "sup_on_circle",
    "sup_on_line",
    "growth_profile",
    "three_circles_check",
    "three_lines_check",
    "taylor_coefficients",
]

_RESOLUTION_EXP = -64


@dataclass(frozen=True)
class CircleSupReport:
    radius: PReal
    sup_value: PReal
    witness: PComplex
    arc: str
    n_samples: int
    refine_iterations: int


@dataclass(frozen=True)
class LineSupReport:
    offset: PReal
    height: PReal
    sup_value: PReal
    witness: PComplex
    n_samples: int
    refine_iterations: int
    tail_ceiling: PReal
    certified: bool


@dataclass(frozen=True)
class GrowthProfile:
    reports: tuple[CircleSupReport, ...]
    support_half_width: PReal | None
    envelope_checked: tuple[bool, ...]


@dataclass(frozen=True)
class ThreeCirclesReport:
    r1: PReal
    r2: PReal
    r3: PReal
    sup1: PReal
    sup2: PReal
    sup3: PReal
    lam: PReal
    lhs_log: PReal
    rhs_log: PReal
    margin: PReal
    slack: float
    status: str
    retried: bool
    passed: bool


@dataclass(frozen=True)
class ThreeLinesReport:
    r1: PReal
    r2: PReal
    r3: PReal
    sup1: PReal
    sup2: PReal
    sup3: PReal
    lam: PReal
    lhs_log: PReal
    rhs_log: PReal
    margin: PReal
    slack: float
    status: str
    retried: bool
    passed: bool


@dataclass(frozen=True)
class TaylorReport:
    rho: PReal
    coefficients: tuple[PComplex, ...]
    grid_max: PReal
    n_points: int
    bound_margin_exp: int


def _as_preal(value, bits: int) -> PReal:
    if isinstance(value, PReal):
        return value.round_to(bits) if value.bits != bits else value
    return PReal(value, bits)


def _maximize_1d(
    evaluate: Callable[[PReal], PReal],
    lo: PReal,
    hi: PReal,
    seeds: int,
) -> tuple[PReal, PReal, int, PReal]:
    """Sample [lo, hi] uniformly, then golden-section sharpen around the
    best sample.  Returns (argmax, max, refine_iters, best_ever_value).

    Golden-section assumes local unimodality; the returned maximum is
    the largest value seen anywhere, so a multimodal profile degrades
    only the sharpening, never the lower-bound property.
    """
    if seeds < 3:
        raise ConfigError("need at least 3 scan samples")
    bits = lo.bits
    span = hi - lo
    best_x = lo
    best_v = evaluate(lo)
    step = span / (seeds - 1)
    xs = [lo + step * j for j in range(1, seeds - 1)] + [hi]
    best_idx = 0
    for j, x in enumerate(xs, start=1):
        v = evaluate(x)
        if v > best_v:
            best_v, best_x, best_idx = v, x, j

    all_points = [lo] + xs
    left = all_points[max(0, best_idx - 1)]
    right = all_points[min(len(all_points) - 1, best_idx + 1)]

    inv_phi = (sqrt(PReal(5, bits)) - 1) / 2
    tol = PReal(2, bits) ** _RESOLUTION_EXP
    a, b = left, right
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1 = evaluate(x1)
    f2 = evaluate(x2)
    iters = 0
    for v, x in ((f1, x1), (f2, x2)):
        if v > best_v:
            best_v, best_x = v, x
    while (b - a) > tol and iters < 4000:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = evaluate(x2)
            if f2 > best_v:
                best_v, best_x = f2, x2
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = evaluate(x1)
            if f1 > best_v:
                best_v, best_x = f1, x1
        iters += 1
    return best_x, best_v, iters, best_v


_ARC_FRACTIONS = {"full": 1, "half": 2, "quarter": 4}


def sup_abs_on_circle(
    f: Callable,
    radius,
    bits: int,
    n_samples: int = 1024,
    arc: str = "full",
) -> CircleSupReport:
    """Maximize |f| over {radius * e^(i*theta)} for theta in the chosen
    arc of the circle ("full", "half", or "quarter", from theta = 0)."""
    _check_bits(bits)
    if arc not in _ARC_FRACTIONS:
        raise ConfigError(f"arc must be one of {sorted(_ARC_FRACTIONS)}, got {arc!r}")
    r = _as_preal(radius, bits)
    if not r > 0:
        raise ConfigError("circle radius must be positive")
    two_pi = 2 * pi_value(bits)
    span = two_pi / _ARC_FRACTIONS[arc]

    def evaluate(theta: PReal) -> PReal:
        c, s = cos_sin(theta)
        z = PComplex(r * c, r * s, bits=bits)
        return abs(f(z))

    theta_best, sup_value, iters, _ = _maximize_1d(
        evaluate, PReal(0, bits), span, n_samples
    )
    c, s = cos_sin(theta_best)
    witness = PComplex(r * c, r * s, bits=bits)
    return CircleSupReport(
        radius=r,
        sup_value=sup_value,
        witness=witness,
        arc=arc,
        n_samples=n_samples,
        refine_iterations=iters,
    )


def _measure_arc(measure: Measure) -> str:
    return "quarter" if measure.is_symmetric() else "half"


def sup_on_circle(
    measure: Measure,
    radius,
    bits: int | None = None,
    n_samples: int = 1024,
) -> CircleSupReport:
    """M(r): maximize the transform error of a measure over |z| = r."""
    if not isinstance(measure, Measure):
        raise ConfigError("sup_on_circle expects a Measure")
    b = measure.bits if bits is None else _check_bits(bits)
    return sup_abs_on_circle(
        measure.laplace_error, radius, b, n_samples=n_samples, arc=_measure_arc(measure)
    )


def sup_on_line(
    measure: Measure,
    offset,
    bits: int | None = None,
    n_samples: int = 1024,
    p_slack: int = 4,
) -> LineSupReport:
    """Maximize the transform error over the vertical line Re z = offset.

    The scan covers 0 <= Im z <= Y with
    Y = sqrt(offset**2 + 2*a*offset + 64*ln2*p_slack); above Y both
    |L(z)| <= exp(a*offset) and |exp(z**2/2)| = exp((offset**2-y**2)/2)
    are below the reported tail ceiling
    exp(a*offset) + exp((offset**2-Y**2)/2), so the full-line sup is at
    most max(sup found, tail ceiling).  ``certified`` records whether
    the ceiling already lies below the scanned sup.
    """
    if not isinstance(measure, Measure):
        raise ConfigError("sup_on_line expects a Measure")
    a = measure.support_radius()
    if a is None:
        raise ConfigError("sup_on_line needs a compactly supported measure")
    if not isinstance(p_slack, int) or isinstance(p_slack, bool) or p_slack < 1:
        raise ConfigError(f"p_slack must be a positive integer, got {p_slack!r}")
    b = measure.bits if bits is None else _check_bits(bits)
    r = _as_preal(offset, b)
    if r < 0:
        raise ConfigError("line offset must be nonnegative")
    a_b = a.round_to(b)
    ln2 = log(PReal(2, b))
    height = sqrt(r * r + 2 * a_b * r + 64 * p_slack * ln2)

    def evaluate(y: PReal) -> PReal:
        return abs(measure.laplace_error(PComplex(r, y, bits=b)))

    y_best, sup_value, iters, _ = _maximize_1d(
        evaluate, PReal(0, b), height, n_samples
    )
    ceiling = exp(a_b * r) + exp((r * r - height * height) / 2)
    return LineSupReport(
        offset=r,
        height=height,
        sup_value=sup_value,
        witness=PComplex(r, y_best, bits=b),
        n_samples=n_samples,
        refine_iterations=iters,
        tail_ceiling=ceiling,
        certified=bool(ceiling <= sup_value),
    )


def growth_profile(
    measure: Measure,
    radii: Sequence,
    bits: int | None = None,
    n_samples: int = 1024,
) -> GrowthProfile:
    """Scan M(r) over a set of radii and check the two-sided envelope
    (1/2)exp(r**2/2) <= M(r) <= exp(a*r) + exp(r**2/2) at every radius
    with r >= 3a.

    The lower half holds because the scan includes z = r where
    |B(r)| >= exp(r**2/2) - exp(a*r) >= (1/2)exp(r**2/2) once r >= 3a;
    the upper half is the triangle inequality, so a violation of either
    indicates a broken scan or transform.
    """
    if not isinstance(measure, Measure):
        raise ConfigError("growth_profile expects a Measure")
    b = measure.bits if bits is None else _check_bits(bits)
    a = measure.support_radius()
    reports = []
    checked = []
    for radius in radii:
        rep = sup_on_circle(measure, radius, bits=b, n_samples=n_samples)
        r = rep.radius
        if a is not None and r >= 3 * a.round_to(b):
            half_sq = exp(r * r / 2)
            lower = half_sq / 2
            upper = exp(a.round_to(b) * r) + half_sq
            if not (lower <= rep.sup_value and rep.sup_value <= upper):
                raise EnvelopeViolation(
                    f"growth at r={float(r):g} escaped its envelope: "
                    f"M={float(rep.sup_value):.6e}, "
                    f"bounds [{float(lower):.6e}, {float(upper):.6e}]"
                )
            checked.append(True)
        else:
            checked.append(False)
        reports.append(rep)
    return GrowthProfile(
        reports=tuple(reports),
        support_half_width=a,
        envelope_checked=tuple(checked),
    )


def _convexity_report(
    cls,
    rs: tuple[PReal, PReal, PReal],
    sups: tuple[PReal, PReal, PReal],
    lam: PReal,
    slack: float,
    retried: bool,
):
    bits = rs[0].bits
    if any(s.is_zero() for s in sups):
        zero = PReal(0, bits)
        return cls(
            r1=rs[0], r2=rs[1], r3=rs[2],
            sup1=sups[0], sup2=sups[1], sup3=sups[2],
            lam=lam, lhs_log=zero, rhs_log=zero, margin=zero,
            slack=slack, status="degenerate", retried=retried, passed=True,
        )
    logs = [log(s) for s in sups]
    lhs = logs[1]
    rhs = (1 - lam) * logs[0] + lam * logs[2]
    span = abs(logs[2] - logs[0])
    allowance = PReal(slack, bits) * (span if span > 1 else PReal(1, bits))
    margin = rhs - lhs
    passed = bool(margin >= -allowance)
    return cls(
        r1=rs[0], r2=rs[1], r3=rs[2],
        sup1=sups[0], sup2=sups[1], sup3=sups[2],
        lam=lam, lhs_log=lhs, rhs_log=rhs, margin=margin,
        slack=slack, status="ok", retried=retried, passed=passed,
    )


def three_circles_check(
    source,
    r1,
    r2,
    r3,
    bits: int | None = None,
    n_samples: int = 1024,
    slack: float = 1e-6,
) -> ThreeCirclesReport:
    """Verify log-convexity of M(r) in log r at radii r1 < r2 < r3:

        log M(r2) <= (1-lam) log M(r1) + lam log M(r3),
        lam = (log r2 - log r1) / (log r3 - log r1),

    within ``slack`` (scaled by the log-range when that exceeds 1).  On
    failure the scan is repeated once at 4x the sample density before
    raising ConvexityViolation.  ``source`` is a Measure (its transform
    error is scanned over the symmetry-reduced arc) or a plain function
    of one complex argument (scanned over the full circle, and ``bits``
    must be given).
    """
    if isinstance(source, Measure):
        b = source.bits if bits is None else _check_bits(bits)

        def scan(radius, n):
            return sup_on_circle(source, radius, bits=b, n_samples=n).sup_value

    else:
        if bits is None:
            raise ConfigError("bits is required when scanning a plain function")
        b = _check_bits(bits)

        def scan(radius, n):
            return sup_abs_on_circle(source, radius, b, n_samples=n).sup_value

    rs = tuple(_as_preal(r, b) for r in (r1, r2, r3))
    if not (0 < rs[0] < rs[1] < rs[2]):
        raise ConfigError("radii must satisfy 0 < r1 < r2 < r3")
    lam = (log(rs[1]) - log(rs[0])) / (log(rs[2]) - log(rs[0]))

    report = None
    for attempt, n in enumerate((n_samples, 4 * n_samples)):
        sups = tuple(scan(r, n) for r in rs)
        report = _convexity_report(
            ThreeCirclesReport, rs, sups, lam, slack, retried=attempt > 0
        )
        if report.passed:
            return report
    raise ConvexityViolation(
        f"three-circles inequality failed at radii "
        f"({float(rs[0]):g}, {float(rs[1]):g}, {float(rs[2]):g}): "
        f"margin {float(report.margin):.3e} with slack {slack:g}"
    )


def three_lines_check(
    measure: Measure,
    r1,
    r2,
    r3,
    bits: int | None = None,
    n_samples: int = 1024,
    slack: float = 1e-6,
    p_slack: int = 4,
) -> ThreeLinesReport:
    """Verify log-convexity of the vertical-line sup b(r) in the offset:

        log b(r2) <= (1-lam) log b(r1) + lam log b(r3),
        lam = (r2 - r1) / (r3 - r1),

    within ``slack``, retrying once at 4x density before raising
    ConvexityViolation.  Reports status "degenerate" when any line sup
    is exactly zero."""
    if not isinstance(measure, Measure):
        raise ConfigError("three_lines_check expects a Measure")
    b = measure.bits if bits is None else _check_bits(bits)
    rs = tuple(_as_preal(r, b) for r in (r1, r2, r3))
    if not (rs[0] < rs[1] < rs[2]):
        raise ConfigError("offsets must satisfy r1 < r2 < r3")
    if rs[0] < 0:
        raise ConfigError("offsets must be nonnegative")
    lam = (rs[1] - rs[0]) / (rs[2] - rs[0])

    report = None
    for attempt, n in enumerate((n_samples, 4 * n_samples)):
        sups = tuple(
            sup_on_line(measure, r, bits=b, n_samples=n, p_slack=p_slack).sup_value
            for r in rs
        )
        report = _convexity_report(
            ThreeLinesReport, rs, sups, lam, slack, retried=attempt > 0
        )
        if report.passed:
            return report
    raise ConvexityViolation(
        f"three-lines inequality failed at offsets "
        f"({float(rs[0]):g}, {float(rs[1]):g}, {float(rs[2]):g}): "
        f"margin {float(report.margin):.3e} with slack {slack:g}"
    )


def taylor_coefficients(
    f: Callable,
    rho,
    n_max: int,
    bits: int,
    n_points: int | None = None,
) -> TaylorReport:
    """Power-series coefficients c_0..c_n_max of ``f`` about 0 from
    equispaced samples on |z| = rho:

        c_n ~= (1/N) sum_j f(rho e^(2 pi i j / N)) e^(-2 pi i j n / N) / rho**n.

    Every returned coefficient is checked against the discrete Cauchy
    bound |c_n| <= max_j |f_j| / rho**n, which the sampled sum satisfies
    exactly; a violation beyond rounding slack means the evaluation
    itself is broken, and the sample count is doubled twice before
    CauchyBoundViolation is raised.
    """
    if not isinstance(n_max, int) or isinstance(n_max, bool) or n_max < 0:
        raise ConfigError(f"n_max must be an integer >= 0, got {n_max!r}")
    _check_bits(bits)
    r = _as_preal(rho, bits)
    if not r > 0:
        raise ConfigError("sampling radius must be positive")
    base_points = n_points if n_points is not None else max(256, 8 * (n_max + 1))
    if base_points <= 2 * n_max:
        raise ConfigError("need more than 2*n_max sample points")

    slack_exp = -(bits // 2)
    last_margin = 0
    for attempt in range(3):
        n_pts = base_points * (2**attempt)
        two_pi = 2 * pi_value(bits)
        samples = []
        conj_roots = []
        grid_max = PReal(0, bits)
        for j in range(n_pts):
            theta = two_pi * j / n_pts
            c, s = cos_sin(theta)
            z = PComplex(r * c, r * s, bits=bits)
            fj = f(z)
            if isinstance(fj, PReal):
                fj = PComplex(fj, PReal(0, bits), bits=bits)
            samples.append(fj)
            conj_roots.append(PComplex(c, -s, bits=bits))
            mag = abs(fj)
            if mag > grid_max:
                grid_max = mag
        coeffs = []
        ok = True
        rotations = [PComplex(1, 0, bits=bits)] * n_pts
        inv_n = PReal(1, bits) / n_pts
        power = PReal(1, bits)
        for n in range(n_max + 1):
            total = PComplex(0, 0, bits=bits)
            for j in range(n_pts):
                total = total + samples[j] * rotations[j]
            c_n = total * inv_n / power
            coeffs.append(c_n)
            bound = grid_max / power
            gap = abs(c_n) - bound
            if gap > 0:
                rel = gap / (bound if not bound.is_zero() else PReal(1, bits))
                margin = math.frexp(float(rel))[1] if float(rel) != 0 else slack_exp
                last_margin = margin
                if margin > slack_exp:
                    ok = False
                    break
            if n < n_max:
                rotations = [rotations[j] * conj_roots[j] for j in range(n_pts)]
                power = power * r
        if ok:
            return TaylorReport(
                rho=r,
                coefficients=tuple(coeffs),
                grid_max=grid_max,
                n_points=n_pts,
                bound_margin_exp=slack_exp,
            )
    raise CauchyBoundViolation(
        f"coefficient bound violated beyond 2^{slack_exp} "
        f"(observed 2^{last_margin}); the sampled function is inconsistent"
    )
