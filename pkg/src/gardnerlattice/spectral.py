"""Spectral data for the semi-discrete Gardner lattice.

This module holds the pieces every solution family is built from: the
equation coefficients, the far-field exponential rates of the scattering
problem (which drive soliton and kink motion), the resulting propagation
velocities, and the uniformizing variable that flattens the two-sheeted
branch structure introduced by step-like far fields.

Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import RegimeError, SingularPointError

# Inputs closer than this to a pole / branch point of the rate formulas are
# rejected rather than evaluated.
SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class GardnerParams:
    """Coefficients of the lattice equation.

    a and b weigh the quadratic and cubic nonlinearity; sigma is the sign of
    the involution in the scattering problem.  The two supported regimes are
      sigma = -1 with a^2 + 4b < 0  (symmetric far field, solitons), and
      sigma = +1 with a^2 + 4b > 0  (step-like far field, kinks).
    """

    a: float
    b: float
    sigma: int = -1

    def __post_init__(self):
        if self.b == 0.0:
            raise RegimeError("cubic coefficient b must be nonzero")
        if self.sigma not in (-1, 1):
            raise RegimeError(f"sigma must be +1 or -1, got {self.sigma}")

    @property
    def discriminant(self) -> float:
        """a^2 + 4b; its sign selects the regime."""
        return self.a * self.a + 4.0 * self.b

    @property
    def symmetric_background(self) -> float:
        """The constant far-field level -a/(2b) of the soliton families."""
        return -self.a / (2.0 * self.b)

    def require_symmetric(self) -> None:
        if self.sigma != -1 or self.discriminant >= 0.0:
            raise RegimeError(
                "soliton families need sigma = -1 and a^2 + 4b < 0 "
                f"(got sigma={self.sigma}, a^2+4b={self.discriminant:g})"
            )

    def require_steplike(self) -> None:
        if self.sigma != 1 or self.discriminant <= 0.0:
            raise RegimeError(
                "the kink family needs sigma = +1 and a^2 + 4b > 0 "
                f"(got sigma={self.sigma}, a^2+4b={self.discriminant:g})"
            )


def check_eigenvalue(lam: float) -> float:
    """Validate a discrete eigenvalue for the symmetric regime (real, > 1)."""
    if not math.isfinite(lam) or lam <= 1.0 + SINGULAR_TOL:
        raise SingularPointError(f"eigenvalue must be real and > 1, got {lam!r}")
    return float(lam)


def omega_pair(lam: float, params: GardnerParams) -> tuple[float, float]:
    """Far-field exponential rates (omega1, omega2) at spectral parameter lam.

    These are the diagonal entries of the time part of the scattering problem
    as the field settles to -a/(2b); their difference drives the time
    evolution of the norming constants.  Both are finite for any lam != 0 and
    coincide at lam = 1, where the (lam^2 - 1)^3 factor vanishes.
    """
    if lam == 0.0 or not math.isfinite(lam):
        raise SingularPointError("omega rates are undefined at lam = 0")
    a, b = params.a, params.b
    A = params.discriminant
    l2 = lam * lam
    common = -24.0 * a * a * b
    w1 = (
        common
        + 6.0 * a * a * A * l2
        + A * A * (l2 - 1.0) ** 3 * (l2 + 3.0) / (4.0 * l2 * l2)
    ) / (16.0 * b * b)
    w2 = (
        common
        + 6.0 * a * a * A / l2
        - A * A * (l2 - 1.0) ** 3 * (3.0 * l2 + 1.0) / (4.0 * l2 * l2)
    ) / (16.0 * b * b)
    return w1, w2


def omega_pair_derivatives(lam: float, params: GardnerParams) -> tuple[float, float]:
    """d omega1 / d lam and d omega2 / d lam, differentiated analytically.

    Uses the expansions
      (l^2-1)^3 (l^2+3) / (4 l^4) = l^4/4 - 3/2 + 2 l^-2 - (3/4) l^-4,
      (l^2-1)^3 (3l^2+1) / (4 l^4) = (3/4) l^4 - 2 l^2 + 3/2 - (1/4) l^-4.
    """
    if lam == 0.0 or not math.isfinite(lam):
        raise SingularPointError("omega rates are undefined at lam = 0")
    a, b = params.a, params.b
    A = params.discriminant
    w1p = (12.0 * a * a * A * lam + A * A * (lam**3 - 4.0 * lam**-3 + 3.0 * lam**-5)) / (
        16.0 * b * b
    )
    w2p = (
        -12.0 * a * a * A * lam**-3 - A * A * (3.0 * lam**3 - 4.0 * lam + lam**-5)
    ) / (16.0 * b * b)
    return w1p, w2p


def soliton_velocity(lam: float, params: GardnerParams) -> float:
    """Propagation speed (omega2 - omega1) / (2 log lam) of a single soliton."""
    if abs(lam - 1.0) <= SINGULAR_TOL:
        raise SingularPointError("soliton velocity has a zero denominator at lam = 1")
    w1, w2 = omega_pair(lam, params)
    return (w2 - w1) / (2.0 * math.log(lam))


def positive_speed_threshold(params: GardnerParams) -> float:
    """Threshold Q such that a soliton at eigenvalue lam moves right iff lam^2 < Q."""
    a, b = params.a, params.b
    A = params.discriminant
    if A == 0.0:
        raise RegimeError("threshold undefined on the parabola a^2 + 4b = 0")
    rad = a**4 - 8.0 * a * a * b
    if rad < 0.0:
        raise RegimeError("threshold undefined: a^4 - 8 a^2 b < 0")
    return (-2.0 * (a * a - 2.0 * b) - math.sqrt(3.0) * math.sqrt(rad)) / A


def evolve_norming(C0: float, lam: float, t: float, params: GardnerParams) -> float:
    """Norming constant at time t: C(t) = C(0) exp((omega2 - omega1) t)."""
    w1, w2 = omega_pair(lam, params)
    return C0 * math.exp((w2 - w1) * t)


def evolve_double_pole_norming(
    b0: float, d0: float, lam: float, t: float, params: GardnerParams
) -> tuple[float, float]:
    """Time-evolved norming pair (b(t), d(t)) for a double spectral zero.

    b(t) follows the same exponential as a simple norming constant; d(t)
    picks up a secular term proportional to the lam-derivative of the rate
    difference:
      d(t) = exp((omega2 - omega1) t) * [d(0) + b(0) t (omega2' - omega1')].
    """
    w1, w2 = omega_pair(lam, params)
    w1p, w2p = omega_pair_derivatives(lam, params)
    growth = math.exp((w2 - w1) * t)
    return b0 * growth, growth * (d0 + b0 * t * (w2p - w1p))


# ---------------------------------------------------------------------------
# Step-like regime: uniformization and kink rates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniformizedPoint:
    """A point zeta on the uniformized spectral sheet.

    The step-like scattering problem ties two spectral variables together by
    r (k + 1/k) = lam + 1/lam with zeta = k / lam; solving the pair gives the
    closed forms
        k^2   = zeta (zeta - r) / (r zeta - 1),
        lam^2 = (zeta - r) / (zeta (r zeta - 1)).
    lam and k hold the branch-resolved pair (principal square root of lam^2,
    then k = lam * zeta); they are NaN off the real sheet (lam^2 <= 0).
    residual is |r(k + 1/k) - (lam + 1/lam)|, machine-zero on the real sheet.
    """

    zeta: float
    r: float
    k_squared: float
    lambda_squared: float
    lam: float
    k: float
    residual: float

    @property
    def has_real_branch(self) -> bool:
        return math.isfinite(self.lam)


def uniformize(zeta: float, r: float) -> UniformizedPoint:
    """Resolve (lam, k) from the uniformizing variable zeta.

    r must lie in (0, 1).  The points zeta in {0, r, 1/r} and r*zeta = 1 are
    poles / branch points of the closed forms and are rejected outright.
    """
    if not (0.0 < r < 1.0):
        raise SingularPointError(f"r must lie in (0, 1), got {r!r}")
    if not math.isfinite(zeta):
        raise SingularPointError(f"zeta must be finite, got {zeta!r}")
    if abs(zeta) <= SINGULAR_TOL:
        raise SingularPointError("zeta = 0 is a singular point of the uniformization")
    if abs(r * zeta - 1.0) <= SINGULAR_TOL:
        raise SingularPointError("r*zeta = 1 is a pole of the uniformization")
    if abs(zeta - r) <= SINGULAR_TOL:
        raise SingularPointError("zeta = r is a branch point (k^2 -> 0)")
    if abs(zeta - 1.0 / r) <= SINGULAR_TOL:
        raise SingularPointError("zeta = 1/r is a branch point (k^2 -> inf)")

    k2 = zeta * (zeta - r) / (r * zeta - 1.0)
    lam2 = (zeta - r) / (zeta * (r * zeta - 1.0))
    if lam2 > 0.0:
        lam = math.sqrt(lam2)
        k = lam * zeta
        residual = abs(r * (k + 1.0 / k) - (lam + 1.0 / lam))
    else:
        lam = k = float("nan")
        residual = float("nan")
    return UniformizedPoint(float(zeta), float(r), k2, lam2, lam, k, residual)


def _pq_rates(lam: float, c0: float, params: GardnerParams) -> tuple[float, float]:
    """Coefficients (p, q) of the far-field time dependence under a step.

    Only even powers of the step amplitude enter, so the two far-field signs
    share the same pair.
    """
    a, b = params.a, params.b
    A = params.discriminant
    c2 = c0 * c0
    c4 = c2 * c2
    l2 = lam * lam
    l4 = l2 * l2
    p = (
        A
        * (1.0 + l2)
        * (
            a * a * (1.0 + l4 + l2 * (4.0 - 2.0 * c2))
            + 4.0 * b * (1.0 + l4 - 2.0 * l2 * (1.0 + c2))
        )
        / (16.0 * b * b * lam**3)
    )
    q = (
        16.0 * b * b * (-((l2 - 1.0) ** 2) * (3.0 + 2.0 * l2 + 3.0 * l4)
                        + 4.0 * c2 * (lam + lam**3) ** 2 + 12.0 * c4 * l4)
        + a**4 * (-3.0 + l2 * (4.0 + 4.0 * c2
                               + l2 * (-26.0 + 4.0 * l2 - 3.0 * l4
                                       + 4.0 * c2 * (l2 - 4.0) + 12.0 * c4)))
        + 8.0 * a * a * b * (-3.0 + l2 * (4.0 + 4.0 * c2
                                          + l2 * (-26.0 + 4.0 * l2 - 3.0 * l4
                                                  + 4.0 * c2 * (l2 - 1.0) + 12.0 * c4)))
    ) / (16.0 * b * b * l4)
    return p, q


def kappa_pair(
    zeta: float, r: float, c0: float, params: GardnerParams
) -> tuple[float, float]:
    """Far-field rates (kappa1, kappa2) of the step-like scattering problem.

    kappa1 = r p / k + q and kappa2 = k r p + q.  The difference
    kappa2 - kappa1 = (k - 1/k) r p is invariant under the simultaneous
    branch flip (lam, k) -> (-lam, -k) because p is odd in lam.
    """
    pt = uniformize(zeta, r)
    if not pt.has_real_branch:
        raise SingularPointError(
            f"zeta = {zeta!r} lies off the real spectral sheet (lam^2 <= 0)"
        )
    p, q = _pq_rates(pt.lam, c0, params)
    rp = r * p
    return rp / pt.k + q, pt.k * rp + q


def kink_velocity(zeta_bar: float, r: float, c0: float, params: GardnerParams) -> float:
    """Kink propagation speed from the rate difference at the eigenvalue.

    V = (kappa2(zeta_bar) - kappa1(zeta_bar)) / log k^2(zeta), where
    zeta = 1/zeta_bar is the partner point outside the unit circle.
    Requires k^2(zeta) positive and different from 1.
    """
    params.require_steplike()
    zeta = 1.0 / zeta_bar
    pt = uniformize(zeta, r)
    if pt.k_squared <= 0.0:
        raise SingularPointError("kink velocity needs k^2 > 0 at the eigenvalue")
    log_k2 = math.log(pt.k_squared)
    if abs(log_k2) <= SINGULAR_TOL:
        raise SingularPointError("kink velocity has a zero denominator at k^2 = 1")
    k1, k2 = kappa_pair(zeta_bar, r, c0, params)
    return (k2 - k1) / log_k2


def kink_velocity_reduced(c0: float, params: GardnerParams) -> float:
    """Closed form of the kink speed at the distinguished eigenvalue (1-c0)/r.

    V = (a^2+4b) c0 (3a^2 - (a^2+4b) c0^2) / (2 b^2 log((1-c0)/(1+c0))).
    Kept as an independent code path from kink_velocity for cross-checks.
    """
    params.require_steplike()
    a, b = params.a, params.b
    A = params.discriminant
    return (
        A * c0 * (3.0 * a * a - A * c0 * c0)
        / (2.0 * b * b * math.log((1.0 - c0) / (1.0 + c0)))
    )
