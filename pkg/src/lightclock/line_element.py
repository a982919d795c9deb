"""Velocity-dependent line element: derivation chain and velocity maps.

The chain encoded here starts from the isotropic light-clock interval

    dS**2 = (c*dt_s)**2 - dr_s**2                                   (s-frame)

and a linear infinitesimal transformation of moving-frame differentials

    dr_s = (1 - alpha*beta) * dr_m - alpha * dT_m
    dT_s = beta * dr_m + dT_m,          dT_m = c * dt_m,

whose coefficients are fixed by two requirements: the quadratic expansion
of dS**2 must be symmetric under time reversal (the cross term in
dr_m * dT_m vanishes), and a co-moving point (dr_m/dT_m = 0) must be seen
from the s-frame with the forward velocity ratio (v + d)/c.  Writing
eta = 1 - (v + d)**2 / c**2 the admissible branch is

    alpha = -sqrt(1 - eta),     beta = sqrt(1 - eta) / eta,

and substitution back into the interval gives the dilated form

    dS**2 = lam * (c*dt_m)**2 - (1/lam) * dr_m**2,     lam = eta.

With all inputs rational the whole chain closes over exact rationals
(1 - eta is then automatically a perfect square), which is what
``certify_derivation(..., exact=True)`` exploits to check the identities at
zero tolerance.

The module also carries the substratum velocity map
``w = (c/2) * ln((1 + v**2/c**2) / (1 - v**2/c**2))`` under which composed
velocities add linearly, together with its monotone numeric inverse.  The
textbook hyperbolic-angle map ``(c/2) * ln((1 + v/c) / (1 - v/c))`` is
exposed separately as ``standard_rapidity`` for comparison only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import FrameError, PoleError, SuperluminalError
from .infinitesimals import DEFAULT_ORDER, TruncatedHyper, st

IDENTITY_TOL = 1e-12
_INVERSE_MARGIN = 1e-12


@dataclass(frozen=True)
class LineElementParams:
    """Velocity parameters (v, d, c) with 0 <= v + d < c.

    ``d`` is the secondary velocity term; it is zero everywhere in the
    decay paths.  Rational inputs are kept as-is so derived quantities stay
    exact.
    """

    v: float
    d: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError(f"light speed must be positive, got {self.c}")
        total = self.v + self.d
        if total < 0:
            raise ValueError(
                f"v + d = {total} is negative; only 0 <= v + d < c is admissible"
            )
        if total >= self.c:
            raise SuperluminalError(f"v + d = {total} >= c = {self.c}")


def lambda_factor(p: LineElementParams):
    """``1 - (v + d)**2 / c**2``, strictly in (0, 1]."""
    ratio = (p.v + p.d) / p.c
    return 1 - ratio * ratio


def gamma_factor(p: LineElementParams) -> float:
    """Square root of the lambda factor; in (0, 1], equal to 1 at rest."""
    return math.sqrt(lambda_factor(p))


def _sqrt_exact_if_possible(x):
    """Square root that stays rational for perfect-square rational input."""
    if x < 0:
        raise ValueError(f"square root of negative value {x}")
    if isinstance(x, Rational):
        frac = Fraction(x)
        rn = math.isqrt(frac.numerator)
        rd = math.isqrt(frac.denominator)
        if rn * rn == frac.numerator and rd * rd == frac.denominator:
            return Fraction(rn, rd)
    return math.sqrt(x)


@dataclass(frozen=True)
class TransformCoeffs:
    """Coefficients (alpha, beta) of the admissible branch at a given eta."""

    alpha: float
    beta: float
    eta: float


def solve_transform_coeffs(eta) -> TransformCoeffs:
    """Coefficients satisfying the time-symmetry constraint at ``eta``.

    Picks ``alpha = -sqrt(1 - eta)``, hence ``beta = sqrt(1 - eta) / eta``,
    which zeroes the cross term ``2*(alpha + beta*(1 - alpha**2))``.  For
    rational ``eta`` with ``1 - eta`` a perfect rational square the result
    is exact; otherwise it is computed in floating point.
    """
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    root = _sqrt_exact_if_possible(1 - eta)
    return TransformCoeffs(alpha=-root, beta=root / eta, eta=eta)


@dataclass(frozen=True)
class BranchDiagnostic:
    """Outcome of evaluating the sign-flipped square-root branch."""

    alpha: float
    beta: float
    ratio: float
    rejected: bool


def check_rejected_branch(eta) -> BranchDiagnostic:
    """Evaluate ``alpha = +sqrt(1 - eta)`` and report its velocity ratio.

    For a co-moving point (dr_m/dT_m = 0) this branch yields
    ``dr_s/dT_s = -sqrt(1 - eta)``, which is negative for every eta in
    (0, 1) and therefore inconsistent with a forward velocity
    0 <= v + d < c.  At eta = 1 both branches coincide and nothing is
    rejected.
    """
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    root = _sqrt_exact_if_possible(1 - eta)
    alpha = root
    beta = -root / eta  # the symmetry constraint fixes beta = -alpha/eta
    ratio = -alpha
    return BranchDiagnostic(alpha=alpha, beta=beta, ratio=ratio,
                            rejected=bool(ratio < 0))


def expand_quadratic(alpha, beta):
    """Coefficients of the quadratic expansion of dS**2 in moving-frame terms.

    Returns ``(coef_dT2, coef_cross, coef_dr2)`` multiplying ``dT_m**2``,
    ``dr_m * dT_m`` and ``dr_m**2`` respectively:

        (1 - alpha**2,  2*(alpha + beta*(1 - alpha**2)),
         beta**2 - (1 - alpha*beta)**2)
    """
    one_minus_a2 = 1 - alpha * alpha
    cross = 2 * (alpha + beta * one_minus_a2)
    radial = beta * beta - (1 - alpha * beta) ** 2
    return one_minus_a2, cross, radial


def photon_galilean_split(v, d, c, dts: TruncatedHyper):
    """Split a photon's s-frame displacement by the Galilean law.

    For a source moving at ``v + d`` the infinitesimal time step ``dts``
    produces ``dR = (v + d) * dts`` of source travel and ``dT = c * dts``
    of light travel, so ``((v + d) + c) * dts = dR + dT`` holds
    coefficient-wise and the first-order quotient is ``(v + d) / c``.
    """
    if c <= 0:
        raise ValueError(f"light speed must be positive, got {c}")
    if not dts.is_pure_infinitesimal:
        raise ValueError("dts must be a pure infinitesimal")
    d_r = dts * (v + d)
    d_t = dts * c
    if dts.coeffs[1] == 0:
        raise PoleError("ratio undefined for a vanishing first-order displacement")
    ratio = d_r.coeffs[1] / d_t.coeffs[1]
    return d_r, d_t, ratio


def transform_differentials(coeffs: TransformCoeffs, drm: TruncatedHyper,
                            dTm: TruncatedHyper):
    """Map moving-frame differentials (dr_m, dT_m) to s-frame (dr_s, dT_s).

    With the solved coefficients the transformation reads

        dr_s = (1/eta) * dr_m + sqrt(1 - eta) * dT_m
        dT_s = (sqrt(1 - eta)/eta) * dr_m + dT_m.
    """
    root = -coeffs.alpha  # sqrt(1 - eta), exact when alpha is exact
    drs = drm / coeffs.eta + dTm * root
    dTs = drm * (root / coeffs.eta) + dTm
    return drs, dTs


def velocity_ratio(coeffs: TransformCoeffs, drm_over_dTm):
    """s-frame velocity ratio dr_s/dT_s for a given moving-frame ratio.

    ``((1/eta)*x + sqrt(1-eta)) / ((sqrt(1-eta)/eta)*x + 1)`` for
    ``x = dr_m/dT_m``; at ``x = 0`` this is ``sqrt(1 - eta) = (v + d)/c``.
    """
    root = -coeffs.alpha
    x = drm_over_dTm
    denom = (root / coeffs.eta) * x + 1
    if denom == 0:
        raise PoleError(f"velocity ratio has a pole at dr_m/dT_m = {x}")
    return (x / coeffs.eta + root) / denom


@dataclass(frozen=True)
class Displacement:
    """Pure-infinitesimal displacement (dr, dt) tagged with its frame."""

    dr: TruncatedHyper
    dt: TruncatedHyper
    frame: str

    def __post_init__(self):
        if self.frame not in ("s", "m"):
            raise FrameError(f"frame must be 's' or 'm', got {self.frame!r}")
        if st(self.dr) != 0 or st(self.dt) != 0:
            raise ValueError("displacements must be pure infinitesimals")


def line_element_s(d: Displacement, c) -> TruncatedHyper:
    """Isotropic interval ``dS**2 = (c*dt)**2 - dr**2`` for s-frame data."""
    if d.frame != "s":
        raise FrameError(f"expected an s-frame displacement, got {d.frame!r}")
    if c <= 0:
        raise ValueError(f"light speed must be positive, got {c}")
    d_t = d.dt * c
    return d_t * d_t - d.dr * d.dr


def line_element_m(d: Displacement, p: LineElementParams) -> TruncatedHyper:
    """Dilated interval ``dS**2 = lam*(c*dt)**2 - (1/lam)*dr**2`` for m-frame data."""
    if d.frame != "m":
        raise FrameError(f"expected an m-frame displacement, got {d.frame!r}")
    lam = lambda_factor(p)
    d_t = d.dt * p.c
    return d_t * d_t * lam - (d.dr * d.dr) / lam


def time_dilation_relation(p: LineElementParams, dtm: TruncatedHyper) -> TruncatedHyper:
    """s-frame tick for a given m-frame tick: ``dt_s = gamma * dt_m``.

    Holds for pure time displacements (dr_s = dr_m = 0), where the two line
    elements reduce to ``(c*dt_s)**2 = lam*(c*dt_m)**2``.
    """
    return dtm * gamma_factor(p)


def nsppm_velocity(v, c=1.0):
    """Substratum velocity map ``w = (c/2)*ln((1+v**2/c**2)/(1-v**2/c**2))``.

    Even in ``v``, zero at rest, strictly increasing on [0, c) and divergent
    as ``v -> c``.  Composed physical velocities correspond to *adding*
    their w-values.
    """
    if c <= 0:
        raise ValueError(f"light speed must be positive, got {c}")
    if abs(v) >= c:
        raise SuperluminalError(f"|v| = {abs(v)} >= c = {c}")
    u = (v / c) ** 2
    # log1p difference evaluates ln((1+u)/(1-u)) without losing tiny u to
    # the 1+u rounding floor
    return 0.5 * c * (math.log1p(u) - math.log1p(-u))


def standard_rapidity(v, c=1.0):
    """Textbook hyperbolic-angle map ``(c/2)*ln((1+v/c)/(1-v/c))``.

    Provided only as a labelled alternate column for comparison with
    ``nsppm_velocity``; nothing in this package derives from it.
    """
    if c <= 0:
        raise ValueError(f"light speed must be positive, got {c}")
    if abs(v) >= c:
        raise SuperluminalError(f"|v| = {abs(v)} >= c = {c}")
    u = v / c
    return 0.5 * c * math.log((1 + u) / (1 - u))


def invert_nsppm_velocity(w, c=1.0):
    """Monotone inverse of ``nsppm_velocity`` on the nonnegative branch.

    Bisection on [0, c*(1 - 1e-12)] down to a bracket of width 1e-12*c.
    Values of ``w`` below zero or beyond the bracket's range are rejected.
    """
    if c <= 0:
        raise ValueError(f"light speed must be positive, got {c}")
    if w < 0:
        raise ValueError(f"w = {w} is negative; the map is nonnegative")
    v_max = c * (1 - _INVERSE_MARGIN)
    if w > nsppm_velocity(v_max, c):
        raise ValueError(f"w = {w} beyond the invertible range at c = {c}")
    lo, hi = 0.0, v_max
    if w == 0:
        return 0.0
    for _ in range(200):
        if hi - lo <= 1e-12 * c:
            break
        mid = 0.5 * (lo + hi)
        if nsppm_velocity(mid, c) < w:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def compose_velocities_additive_w(v1, v2, c=1.0):
    """Compose two velocities by adding their substratum w-values.

    Returns ``w_inverse(w(v1) + w(v2))`` on the nonnegative branch (the map
    is even in its argument, so the result is the composed speed).
    """
    total = nsppm_velocity(v1, c) + nsppm_velocity(v2, c)
    return invert_nsppm_velocity(total, c)


def _relative_error(a, b) -> float:
    if a == b:
        return 0.0
    return float(abs(a - b) / max(abs(a), abs(b)))


@dataclass(frozen=True)
class CertificationReport:
    """Machine-checkable record of the full derivation chain at (v, d, c).

    ``lhs_eps2`` is the eps**2 coefficient of the isotropic interval
    evaluated on transformed differentials; ``rhs_eps2`` is the same
    coefficient from the dilated interval directly.  In exact mode every
    check is an equality over rationals and ``eps2_rel_error`` is exactly 0.
    """

    v: float
    d: float
    c: float
    exact: bool
    order: int
    eta: float
    alpha: float
    beta: float
    coef_time: float
    coef_cross: float
    coef_radial: float
    lhs_coeffs: tuple
    rhs_coeffs: tuple
    lhs_eps2: float
    rhs_eps2: float
    eps2_rel_error: float
    rejected_branch_ratio: float
    checks: dict
    passed: bool

    def as_dict(self) -> dict:
        return {
            "v": float(self.v),
            "d": float(self.d),
            "c": float(self.c),
            "exact": self.exact,
            "order": self.order,
            "eta": float(self.eta),
            "alpha": float(self.alpha),
            "beta": float(self.beta),
            "coef_time": float(self.coef_time),
            "coef_cross": float(self.coef_cross),
            "coef_radial": float(self.coef_radial),
            "lhs_coeffs": [float(x) for x in self.lhs_coeffs],
            "rhs_coeffs": [float(x) for x in self.rhs_coeffs],
            "lhs_eps2": float(self.lhs_eps2),
            "rhs_eps2": float(self.rhs_eps2),
            "eps2_rel_error": float(self.eps2_rel_error),
            "rejected_branch_ratio": float(self.rejected_branch_ratio),
            "checks": dict(self.checks),
            "passed": self.passed,
        }


def certify_derivation(v, d=0, c=1, order: int = DEFAULT_ORDER,
                       exact: bool = False,
                       tol: float = IDENTITY_TOL) -> CertificationReport:
    """Run every identity of the derivation chain at one parameter point.

    Checks performed:

    * the cross term of the quadratic expansion vanishes;
    * the time and radial coefficients equal ``eta`` and ``-1/eta``;
    * the transformed isotropic interval equals the dilated interval on a
      probe displacement (dr_m, dt_m) = (eps, 2*eps);
    * a co-moving point is seen with velocity ratio ``(v + d)/c``;
    * the sign-flipped branch is inconsistent (negative ratio) for eta < 1.

    In ``exact`` mode the inputs are converted to ``Fraction`` and every
    check is a zero-tolerance rational equality; ``1 - eta`` is a perfect
    square by construction, so the whole chain stays rational.
    """
    if order < 2:
        raise ValueError(f"truncation order must be at least 2, got {order}")
    if exact:
        v, d, c = Fraction(v), Fraction(d), Fraction(c)
        one = Fraction(1)
        tol = 0.0
    else:
        v, d, c = float(v), float(d), float(c)
        one = 1.0

    p = LineElementParams(v=v, d=d, c=c)
    eta = lambda_factor(p)
    # sqrt(1 - eta) is (v + d)/c identically; building alpha from the speed
    # ratio instead of the square root keeps small speeds fully accurate
    s = (v + d) / c
    coeffs = TransformCoeffs(alpha=-s, beta=s / eta, eta=eta)
    coef_time, coef_cross, coef_radial = expand_quadratic(coeffs.alpha, coeffs.beta)

    drm = TruncatedHyper.infinitesimal(one, order=order)
    dtm = TruncatedHyper.infinitesimal(one + one, order=order)
    drs, dTs = transform_differentials(coeffs, drm, dtm * c)
    lhs = line_element_s(Displacement(dr=drs, dt=dTs / c, frame="s"), c)
    rhs = line_element_m(Displacement(dr=drm, dt=dtm, frame="m"), p)
    lhs_eps2 = lhs.coeffs[2]
    rhs_eps2 = rhs.coeffs[2]
    eps2_rel_error = _relative_error(lhs_eps2, rhs_eps2)

    branch = check_rejected_branch(eta)
    recovered = velocity_ratio(coeffs, 0 * one)

    checks = {
        "cross_term_zero": bool(abs(coef_cross) <= tol),
        "time_coefficient_is_eta": _relative_error(coef_time, eta) <= tol,
        "radial_coefficient_is_neg_inverse_eta":
            _relative_error(coef_radial, -1 / eta) <= tol,
        "line_elements_match": eps2_rel_error <= tol,
        "velocity_ratio_recovered":
            _relative_error(recovered, (v + d) / c) <= tol,
        "rejected_branch_inconsistent":
            branch.rejected if eta < 1 else branch.ratio == 0,
    }
    return CertificationReport(
        v=v, d=d, c=c, exact=exact, order=order,
        eta=eta, alpha=coeffs.alpha, beta=coeffs.beta,
        coef_time=coef_time, coef_cross=coef_cross, coef_radial=coef_radial,
        lhs_coeffs=lhs.coeffs, rhs_coeffs=rhs.coeffs,
        lhs_eps2=lhs_eps2, rhs_eps2=rhs_eps2, eps2_rel_error=eps2_rel_error,
        rejected_branch_ratio=branch.ratio,
        checks=checks, passed=all(checks.values()),
    )
