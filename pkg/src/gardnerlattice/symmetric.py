"""Exact solution families on the symmetric background -a/(2b).

Reflectionless scattering data (J real eigenvalues lam_j > 1 with norming
constants C_j) reduce the reconstruction of u to small dense linear systems:
2J x 2J for simple spectral zeros, 4x4 for one double zero.  This module
provides those evaluators, the printed closed forms they must agree with
(single soliton, two-soliton ratio), the asymptotic collision phase shifts,
and the trace-formula derivatives feeding the double-pole construction.

Numerical policy: the lattice exponentials C_j(t) lam_j^(-2n) are handled in
the log domain.  Eigenvalues whose exponential has decayed below 1e-300 are
dropped from the system; eigenvalues far on their grown side (log magnitude
above _LOG_HUGE) are folded into the remaining ones as the exact asymptotic
phase-shift factor, so the evaluators stay finite on any window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import RegimeError, SingularPointError
from .models import SolutionModel
from .spectral import (
    GardnerParams,
    check_eigenvalue,
    evolve_double_pole_norming,
    omega_pair,
    soliton_velocity,
)

_LOG_TINY = math.log(1e-300)
_LOG_HUGE = 600.0


@dataclass(frozen=True)
class SolitonSpec:
    """Discrete spectrum for the simple-zero soliton families.

    eigenvalues is a sequence of (lam_j, C_j(0)) pairs with lam_j > 1
    pairwise distinct and C_j(0) != 0; params must sit in the symmetric
    regime (sigma = -1, a^2 + 4b < 0).
    """

    eigenvalues: tuple[tuple[float, float], ...]
    params: GardnerParams

    def __init__(self, eigenvalues, params: GardnerParams):
        params.require_symmetric()
        evs = []
        for lam, c0 in eigenvalues:
            lam = check_eigenvalue(lam)
            if c0 == 0.0 or not math.isfinite(c0):
                raise RegimeError(f"norming constant must be nonzero, got {c0!r}")
            evs.append((lam, float(c0)))
        for i in range(len(evs)):
            for j in range(i + 1, len(evs)):
                if abs(evs[i][0] - evs[j][0]) <= 1e-9:
                    raise RegimeError("eigenvalues must be pairwise distinct")
        if not evs:
            raise RegimeError("at least one eigenvalue is required")
        object.__setattr__(self, "eigenvalues", tuple(evs))
        object.__setattr__(self, "params", params)

    @property
    def order(self) -> int:
        return len(self.eigenvalues)

    @property
    def background(self) -> float:
        return self.params.symmetric_background


@dataclass(frozen=True)
class DoublePoleSpec:
    """Spectrum for the two-order-zero family: one eigenvalue, norming pair.

    b1_0 is the ordinary norming constant of the double zero, d1_0 its
    derivative companion.
    """

    lambda1: float
    b1_0: float
    d1_0: float
    params: GardnerParams

    def __post_init__(self):
        self.params.require_symmetric()
        check_eigenvalue(self.lambda1)
        if self.b1_0 == 0.0 or not math.isfinite(self.b1_0):
            raise RegimeError(f"b1(0) must be nonzero, got {self.b1_0!r}")
        if not math.isfinite(self.d1_0):
            raise RegimeError(f"d1(0) must be finite, got {self.d1_0!r}")

    @property
    def background(self) -> float:
        return self.params.symmetric_background


def _sech(x: float) -> float:
    # overflow-safe: sech(x) = 2 e^{-|x|} / (1 + e^{-2|x|})
    e = math.exp(-abs(x))
    return 2.0 * e / (1.0 + e * e)


def one_soliton(n: int, t: float, spec: SolitonSpec) -> float:
    """Single-soliton closed form.

    u = -a/(2b) + sgn(C) * sqrt(-(a^2+4b)) (lam^-2 - lam^2)/(4b)
        * sech(p + log((lam^4 - 1)/(2|C|))),  p = 2 n log lam + t (w1 - w2).
    Bright for C(0) > 0, dark for C(0) < 0.
    """
    if spec.order != 1:
        raise RegimeError(f"one_soliton needs exactly one eigenvalue, got {spec.order}")
    lam, c0 = spec.eigenvalues[0]
    a, b = spec.params.a, spec.params.b
    w1, w2 = omega_pair(lam, spec.params)
    p = 2.0 * n * math.log(lam) + t * (w1 - w2)
    arg = p + math.log((lam**4 - 1.0) / (2.0 * abs(c0)))
    amp = (
        math.copysign(1.0, c0)
        * math.sqrt(-spec.params.discriminant)
        * (lam**-2 - lam**2)
        / (4.0 * b)
    )
    return spec.background + amp * _sech(arg)


def _log_scales(n: int, t: float, spec: SolitonSpec) -> list[float]:
    """log |C_j(t) lam_j^{-2n}| per eigenvalue."""
    out = []
    for lam, c0 in spec.eigenvalues:
        w1, w2 = omega_pair(lam, spec.params)
        out.append(math.log(abs(c0)) + (w2 - w1) * t - 2.0 * n * math.log(lam))
    return out


def _shift_factor(lam_gone: float, lam: float) -> float:
    """Exact factor absorbed by C_j when another soliton sits far behind.

    As the interaction exponential of eigenvalue lam_gone grows without
    bound, the remaining system equals a reduced one with
    C_j -> C_j * ((lam_gone^2 lam_j^2 - 1)/(lam_gone^2 - lam_j^2))^2.
    """
    lg2, l2 = lam_gone * lam_gone, lam * lam
    return ((lg2 * l2 - 1.0) / (lg2 - l2)) ** 2


def multi_soliton(n: int, t: float, spec: SolitonSpec) -> float:
    """General-J reflectionless reconstruction via the 2J x 2J linear system.

    Unknowns are the two analytic eigenfunction entries evaluated on the
    spectrum; the mirror eigenvalues 1/lam_j enter through the symmetry
    relations C-bar_j = lam_j^{-2} C_j (the sign branch that keeps the
    reflectionless denominator nonvanishing for sigma = -1) and
    lam-bar_j = 1/lam_j.  The reconstruction at site m uses the system
    assembled at index m + 1.
    """
    params = spec.params
    bg = spec.background
    m = int(n)

    # Active eigenvalues after log-domain clamping, with shift absorption.
    lams = [ev[0] for ev in spec.eigenvalues]
    signs = [math.copysign(1.0, ev[1]) for ev in spec.eigenvalues]
    logs = _log_scales(m + 1, t, spec)
    active: list[int] = []
    extra_log = [0.0] * spec.order
    for j in range(spec.order):
        if logs[j] < _LOG_TINY:
            continue  # this soliton's tail has fully decayed here
        if logs[j] > _LOG_HUGE:
            for i in range(spec.order):
                if i != j:
                    extra_log[i] += math.log(_shift_factor(lams[j], lams[i]))
            continue
        active.append(j)
    if not active:
        return bg

    J = len(active)
    g = np.array([signs[j] * math.exp(logs[j] + extra_log[j]) for j in active])
    lam = np.array([lams[j] for j in active])
    lb = 1.0 / lam
    gbar = lam**-2 * g  # C-bar_j(t) lam-bar_j^{2(m+1)}

    mat = np.eye(2 * J)
    rhs = np.concatenate([np.ones(J), np.zeros(J)])
    for i in range(J):
        for j in range(J):
            mat[i, J + j] -= g[j] * (2.0 * lam[j] / (lb[i] ** 2 - lam[j] ** 2))
            mat[J + i, j] -= gbar[j] * (2.0 * lam[i] / (lam[i] ** 2 - lb[j] ** 2))
    sol = linalg.solve(mat, rhs)
    x = sol[:J]

    pref = math.sqrt(-params.discriminant) / (2.0 * params.b)
    # C-bar_j(t) lam-bar_j^{2m} = gbar_j * lam_j^2
    return bg + pref * (-2.0) * float(np.sum(gbar * lam**2 * x))


# Term tables for the printed two-soliton ratio u = bg + sqrt(-A)/(2b) f/g,
# expressed as signed products  coef * z1^e1 * z2^e2  with z_i = C_i(t) lam_i^{-2n}.
def _two_soliton_terms(lam1: float, lam2: float):
    L1, L2 = lam1 * lam1, lam2 * lam2
    q = L1 * L2 - 1.0
    d = L1 - L2
    e1 = L1 * L1 - 1.0
    e2 = L2 * L2 - 1.0
    f_terms = (
        (-8.0 * L1 * q * q * d * d * e2 * e2, 1, 0),
        (-2.0 * L1 * e1 * e1 * q**4 * e2 * e2, -1, 0),
        (-8.0 * L2 * e1 * e1 * q * q * d * d, 0, 1),
        (-2.0 * L2 * e1 * e1 * q**4 * e2 * e2, 0, -1),
    )
    g_terms = (
        (8.0 * L1 * L2 * e1 * e1 * q * q * e2 * e2, 0, 0),
        (4.0 * L1 * L2 * e1 * e1 * q**4, -1, 1),
        (L1 * L2 * e1 * e1 * q**4 * e2 * e2, -1, -1),
        (16.0 * L1 * L2 * d**4, 1, 1),
        (4.0 * L1 * L2 * q**4 * e2 * e2, 1, -1),
    )
    return f_terms, g_terms


def two_soliton_closed_form(n: int, t: float, spec: SolitonSpec) -> float:
    """Two-soliton closed form, evaluated stably in the log domain.

    Each of the numerator and denominator is a short signed sum of terms
    coef * z1^e1 * z2^e2; both sums are rescaled by the largest term
    magnitude before the ratio is taken, so no intermediate overflows even
    deep in the far field.
    """
    if spec.order != 2:
        raise RegimeError(f"two-soliton form needs exactly 2 eigenvalues, got {spec.order}")
    (lam1, _), (lam2, _) = spec.eigenvalues
    params = spec.params
    log_z = []
    sign_z = []
    for lam, c0 in spec.eigenvalues:
        w1, w2 = omega_pair(lam, params)
        p = 2.0 * n * math.log(lam) + (w1 - w2) * t
        log_z.append(math.log(abs(c0)) - p)
        sign_z.append(math.copysign(1.0, c0))

    f_terms, g_terms = _two_soliton_terms(lam1, lam2)

    def prepare(terms):
        out = []
        for coef, e1, e2 in terms:
            lg = math.log(abs(coef)) + e1 * log_z[0] + e2 * log_z[1]
            sg = math.copysign(1.0, coef) * (sign_z[0] ** abs(e1)) * (sign_z[1] ** abs(e2))
            out.append((lg, sg))
        return out

    pf, pg = prepare(f_terms), prepare(g_terms)
    top = max(lg for lg, _ in pf + pg)
    sum_f = sum(sg * math.exp(lg - top) for lg, sg in pf)
    sum_g = sum(sg * math.exp(lg - top) for lg, sg in pg)
    if sum_g == 0.0:
        raise SingularPointError("two-soliton denominator vanished")
    pref = math.sqrt(-params.discriminant) / (2.0 * params.b)
    return spec.background + pref * sum_f / sum_g


@dataclass(frozen=True)
class PhaseShift:
    """Asymptotic collision data for one soliton of a two-soliton state.

    xi_plus / xi_minus are the sech-argument offsets on the two asymptotic
    sides; delta_n is the induced jump of the peak trajectory
    n(t) = V t - xi/(2 log lam), positive when the soliton is displaced
    toward larger n by the collision.
    """

    xi_plus: float
    xi_minus: float
    delta_n: float


def phase_shifts(spec: SolitonSpec) -> tuple[PhaseShift, PhaseShift]:
    """Collision phase shifts of a two-soliton configuration.

    xi_{j+} = log((lam_j^4 - 1) / (2 |C_j(0)|)),
    xi_{j-} = xi_{j+} + 2 log|(lam1^2 lam2^2 - 1)/(lam1^2 - lam2^2)|.
    Which offset applies as t -> +inf depends on which soliton is faster:
    along soliton j the partner exponential grows iff V_j > V_i, and the
    peak sits at p_j + xi = 0.  Hence
      delta_n_j = sign(V_j - V_i) * (xi_{j-} - xi_{j+}) / (2 log lam_j).
    """
    if spec.order != 2:
        raise RegimeError("phase shifts are defined for exactly 2 eigenvalues")
    (lam1, _), (lam2, _) = spec.eigenvalues
    sep = abs((lam1**2 * lam2**2 - 1.0) / (lam1**2 - lam2**2))
    v = [soliton_velocity(lam, spec.params) for lam, _ in spec.eigenvalues]
    if abs(v[0] - v[1]) <= 1e-12:
        raise SingularPointError("equal velocities: positional shift diverges")
    out = []
    for j, (lam, c0) in enumerate(spec.eigenvalues):
        xi_p = math.log((lam**4 - 1.0) / (2.0 * abs(c0)))
        xi_m = xi_p + 2.0 * math.log(sep)
        s = math.copysign(1.0, v[j] - v[1 - j])
        out.append(PhaseShift(xi_p, xi_m, s * (xi_m - xi_p) / (2.0 * math.log(lam))))
    return tuple(out)


@dataclass(frozen=True)
class TraceDerivatives:
    """Derivatives of the reflectionless scattering coefficient at lam1."""

    a_prime: float
    a_double_prime: float
    a_triple_prime: float


def trace_formulas(lambda1: float) -> TraceDerivatives:
    """Scattering-coefficient derivatives from the spectrum alone.

    a_prime is taken on the simple-zero coefficient
    a(lam) = (lam^2 - lam1^2)/(lam^2 - lam1^-2); the second and third
    derivatives are those of its square, the double-zero coefficient, with
    the mirror eigenvalue 1/lam1 substituted:
      a''  = 8 lam1^2 / (lam1^2 - lam1^-2)^2,
      a''' = -24 lam1 (3 lam1^2 + lam1^-2) / (lam1^2 - lam1^-2)^3.
    """
    lam = check_eigenvalue(lambda1)
    lb2 = lam**-2
    gap = lam * lam - lb2
    return TraceDerivatives(
        a_prime=2.0 * lam**3 / (lam**4 - 1.0),
        a_double_prime=8.0 * lam * lam / gap**2,
        a_triple_prime=-24.0 * lam * (3.0 * lam * lam + lb2) / gap**3,
    )


def double_pole_solution(n: int, t: float, spec: DoublePoleSpec) -> float:
    """Two-order-pole field from the 4x4 reconstruction system.

    The four unknowns are the analytic eigenfunction entry and its spectral
    derivative at the eigenvalue pair (lam1, 1/lam1).  The Laurent data
    F = 2 b1(t)/a'', D = d1(t)/b1(t), G = a'''/(3 a'') and their mirrored
    companions F-bar = -lam1^-4 F, D-bar = -lam1^2 D,
    G-bar = -2 lam1 - lam1^2 G follow from the trace formulas; the sign of
    the second reconstruction coefficient is fixed by the small-lam
    expansion of the pole representation (and confirmed against the lattice
    equation, which the printed form with the opposite sign fails).
    """
    params = spec.params
    a, b = params.a, params.b
    bg = spec.background
    lam = spec.lambda1
    lb = 1.0 / lam
    tr = trace_formulas(lam)

    b1t, d1t = evolve_double_pole_norming(spec.b1_0, spec.d1_0, lam, t, params)
    F1 = 2.0 * b1t / tr.a_double_prime
    D1 = d1t / b1t
    G1 = tr.a_triple_prime / (3.0 * tr.a_double_prime)
    Fb1 = -(lb**4) * F1
    Db1 = -(lam**2) * D1
    Gb1 = -2.0 * lam - lam**2 * G1

    nn = n + 1
    log_scale = math.log(abs(F1)) - 2.0 * nn * math.log(lam)
    if log_scale > _LOG_HUGE or log_scale < _LOG_TINY:
        return bg

    # assembled in the log domain: the exponential factor alone can overflow
    # even when the product with F1 is representable
    fl = math.copysign(math.exp(log_scale), F1)
    flb = math.copysign(math.exp(log_scale) * lb**4, Fb1)
    dm, dp = lb - lam, lb + lam
    em, ep = lam - lb, lam + lb
    c1 = -2.0 * nn / lam + D1 - G1
    cb = 2.0 * nn * lam + Db1 - Gb1

    mat = np.zeros((4, 4))
    rhs = np.zeros(4)
    # unknowns: [N11(lb), N11'(lb), N21(lam), N21'(lam)]
    mat[0, 0] = 1.0
    mat[0, 2] = -fl * (c1 * (1.0 / dm - 1.0 / dp) + 1.0 / dm**2 + 1.0 / dp**2)
    mat[0, 3] = -fl * (1.0 / dm - 1.0 / dp)
    rhs[0] = 1.0
    mat[1, 1] = 1.0
    mat[1, 2] = -fl * (c1 * (-1.0 / dm**2 + 1.0 / dp**2) - 2.0 / dm**3 - 2.0 / dp**3)
    mat[1, 3] = -fl * (-1.0 / dm**2 + 1.0 / dp**2)
    mat[2, 2] = 1.0
    mat[2, 0] = -flb * (cb * (1.0 / em + 1.0 / ep) + 1.0 / em**2 - 1.0 / ep**2)
    mat[2, 1] = -flb * (1.0 / em + 1.0 / ep)
    mat[3, 3] = 1.0
    mat[3, 0] = -flb * (cb * (-1.0 / em**2 - 1.0 / ep**2) - 2.0 / em**3 + 2.0 / ep**3)
    mat[3, 1] = -flb * (-1.0 / em**2 - 1.0 / ep**2)
    sol = linalg.solve(mat, rhs)
    n11, n11p = sol[0], sol[1]

    p_m2 = flb * n11
    p_m1 = flb * (n11p + cb * n11)
    pref = math.sqrt(-params.discriminant) / (2.0 * b)
    return bg + pref * (-2.0 * lb**-2 * p_m1 + 4.0 * lb**-3 * p_m2)


# ---------------------------------------------------------------------------
# Model factories
# ---------------------------------------------------------------------------


def one_soliton_model(spec: SolitonSpec) -> SolutionModel:
    lam = spec.eigenvalues[0][0]
    bg = spec.background
    return SolutionModel(
        family="one_soliton",
        background_left=bg,
        background_right=bg,
        velocity=soliton_velocity(lam, spec.params),
        evaluator=lambda n, t: one_soliton(n, t, spec),
    )


def multi_soliton_model(spec: SolitonSpec) -> SolutionModel:
    bg = spec.background
    vel = soliton_velocity(spec.eigenvalues[0][0], spec.params) if spec.order == 1 else None
    return SolutionModel(
        family="multi_soliton",
        background_left=bg,
        background_right=bg,
        velocity=vel,
        evaluator=lambda n, t: multi_soliton(n, t, spec),
    )


def two_soliton_model(spec: SolitonSpec) -> SolutionModel:
    bg = spec.background
    return SolutionModel(
        family="two_soliton",
        background_left=bg,
        background_right=bg,
        velocity=None,
        evaluator=lambda n, t: two_soliton_closed_form(n, t, spec),
    )


def double_pole_model(spec: DoublePoleSpec) -> SolutionModel:
    bg = spec.background
    return SolutionModel(
        family="double_pole",
        background_left=bg,
        background_right=bg,
        velocity=None,
        evaluator=lambda n, t: double_pole_solution(n, t, spec),
    )
