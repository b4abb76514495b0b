"""Collision taxonomy and trajectory measurements.

Classification is done twice on purpose: once through the speed-sign
threshold Q(a, b) (head-on iff lam1^2 < Q < lam2^2) and once through the
actual velocity signs; a disagreement means a bug and raises.  Peak tracking
refines integer-grid extrema with a three-point inversion of the sech
profile (exact on isolated solitons, which a parabola is not at these widths)
and falls back to a parabolic vertex where the inversion is invalid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import FrontWindowError, RegimeError
from .models import LatticeTrajectory
from .spectral import GardnerParams, positive_speed_threshold, soliton_velocity

HEAD_ON = "head_on"
OVERTAKING = "overtaking"
DEGENERATE = "degenerate"
EXCLUDED = "excluded"
OVERTAKING_POSITIVE = "overtaking_positive"  # Q > lam2^2: both solitons move right
OVERTAKING_NEGATIVE = "overtaking_negative"  # Q < lam1^2: both solitons move left

DEGENERACY_TOL = 1e-9

# Interaction window: the solitons count as colliding while their tracked
# peaks are within this many sites (or while they have merged into one).
INTERACTION_SITES = 5.0
# Pre/post regimes for elasticity measurements need at least this separation.
SEPARATED_SITES = 20.0


def classify_collision(params: GardnerParams, lam1: float, lam2: float) -> str:
    """Collision type of the (lam1, lam2) pair: head_on / overtaking / degenerate.

    Both the threshold-interval criterion and the velocity-sign product are
    evaluated; they must agree (cross-check of the closed-form threshold).
    """
    params.require_symmetric()
    lo, hi = sorted((lam1 * lam1, lam2 * lam2))
    q = positive_speed_threshold(params)
    if abs(lo - q) <= DEGENERACY_TOL or abs(hi - q) <= DEGENERACY_TOL:
        return DEGENERATE
    by_interval = HEAD_ON if lo < q < hi else OVERTAKING
    v1 = soliton_velocity(lam1, params)
    v2 = soliton_velocity(lam2, params)
    by_sign = HEAD_ON if v1 * v2 < 0.0 else OVERTAKING
    if by_interval != by_sign:
        raise AssertionError(
            f"threshold and velocity-sign criteria disagree at a={params.a}, "
            f"b={params.b}, lam^2=({lo:g},{hi:g}), Q={q:g}"
        )
    return by_interval


def region_label(a: float, b: float, lam1_sq: float, lam2_sq: float) -> str:
    """Five-way label of one (a, b) cell for fixed eigenvalue squares."""
    if a * a + 4.0 * b >= 0.0 or b == 0.0:
        return EXCLUDED
    params = GardnerParams(a=a, b=b, sigma=-1)
    try:
        q = positive_speed_threshold(params)
    except RegimeError:
        return EXCLUDED
    lo, hi = sorted((lam1_sq, lam2_sq))
    if abs(lo - q) <= DEGENERACY_TOL or abs(hi - q) <= DEGENERACY_TOL:
        return DEGENERATE
    if lo < q < hi:
        return HEAD_ON
    return OVERTAKING_POSITIVE if q > hi else OVERTAKING_NEGATIVE


def region_map(
    a_values, b_values, lam1_sq: float, lam2_sq: float
) -> list[tuple[float, float, str]]:
    """Labelled (a, b, label) grid, row-major in b then a (deterministic order)."""
    out = []
    for bv in b_values:
        for av in a_values:
            out.append((float(av), float(bv), region_label(av, bv, lam1_sq, lam2_sq)))
    return out


@dataclass(frozen=True)
class Peak:
    """One tracked extremum: fractional position, |u - background|, polarity."""

    position: float
    amplitude: float
    polarity: int


def _refine_peak(f0: float, fm: float, fp: float, site: int) -> tuple[float, float]:
    """Sub-site position and true height from three samples of a bump.

    If the samples are consistent with A sech(w (n - x0)) the inversion
      cosh w = (f0/fp + f0/fm)/2,  tanh y = (1 - fp/fm)/((1 + fp/fm) tanh w),
      x0 = site - y/w,             A = f0 cosh y
    is exact.  Otherwise (flat or non-sech neighbourhood) the parabolic
    vertex is used.
    """
    ch = 0.5 * (f0 / fp + f0 / fm)
    if ch > 1.0 + 1e-12:
        w = math.acosh(ch)
        ratio = fp / fm
        arg = (1.0 - ratio) / ((1.0 + ratio) * math.tanh(w))
        if abs(arg) < 1.0:
            y = math.atanh(arg)
            return site - y / w, f0 * math.cosh(y)
    den = fm - 2.0 * f0 + fp
    if den == 0.0:
        return float(site), f0
    dx = 0.5 * (fm - fp) / den
    return site + dx, f0 - 0.25 * (fm - fp) * dx


def find_peaks(
    values: np.ndarray, sites: np.ndarray, background: float, floor_frac: float = 0.05
) -> list[Peak]:
    """Local extrema of |u - background| above a floor, sub-site refined.

    The floor is floor_frac times the largest excursion in the slice; a flat
    slice returns no peaks.
    """
    d = values - background
    mags = np.abs(d)
    top = float(np.max(mags))
    if top <= 1e-12:
        return []
    floor = floor_frac * top
    peaks = []
    for i in range(1, len(sites) - 1):
        if mags[i] > floor and mags[i] >= mags[i - 1] and mags[i] >= mags[i + 1]:
            if mags[i - 1] == 0.0 or mags[i + 1] == 0.0:
                continue
            pos, amp = _refine_peak(mags[i], mags[i - 1], mags[i + 1], int(sites[i]))
            peaks.append(Peak(pos, amp, 1 if d[i] > 0 else -1))
    return peaks


def track_peaks(
    trajectory: LatticeTrajectory, background: float, floor_frac: float = 0.05
) -> list[list[Peak]]:
    """Per-time-slice peak lists for a trajectory."""
    return [
        find_peaks(trajectory.values[i], trajectory.sites, background, floor_frac)
        for i in range(trajectory.times.size)
    ]


@dataclass(frozen=True)
class CollisionReport:
    """Quantitative summary of a two-wave interaction.

    amplification is max |u - background| during the interaction window
    divided by the largest per-wave amplitude tracked over the asymptotic
    (well-separated) segments; amplification_vs_background divides by
    |background| instead (the two published readings of the "rogue"
    criterion).
    """

    collision_type: str
    velocities: tuple[float, float]
    amplitudes_pre: tuple[float, float]
    amplitudes_post: tuple[float, float]
    positional_shifts: tuple[float, float]
    max_excursion: float
    interaction_excursion: float
    amplification: float
    amplification_vs_background: float

    def to_dict(self) -> dict:
        return asdict(self)


def _fit_track(times: np.ndarray, pos: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(times, pos, 1)
    return float(slope), float(intercept)


def measure_interaction(
    trajectory: LatticeTrajectory,
    background: float,
    floor_frac: float = 0.05,
) -> CollisionReport:
    """Measure a two-wave trajectory: velocities, elasticity data, amplification.

    The trajectory must begin and end with the two waves well separated.
    Peaks are matched to waves by polarity first and amplitude second, using
    the first time slice as the reference.
    """
    per_slice = track_peaks(trajectory, background, floor_frac)
    times = trajectory.times

    first = per_slice[0]
    last = per_slice[-1]
    if len(first) != 2 or len(last) != 2:
        raise FrontWindowError(
            "need exactly two separated waves at both ends of the trajectory "
            f"(found {len(first)} then {len(last)})"
        )

    reference = first

    def match(peaks: list[Peak]) -> list[Peak | None]:
        # Greedy match to the reference pair: same polarity, closest amplitude.
        out: list[Peak | None] = [None, None]
        used = set()
        for j, ref in enumerate(reference):
            best, best_cost = None, None
            for idx, p in enumerate(peaks):
                if idx in used:
                    continue
                cost = abs(p.amplitude - ref.amplitude) + (
                    0.0 if p.polarity == ref.polarity else 1e6
                )
                if best_cost is None or cost < best_cost:
                    best, best_cost = idx, cost
            if best is not None:
                out[j] = peaks[best]
                used.add(best)
        return out

    separations = np.full(times.size, np.nan)
    matched: list[list[Peak | None]] = []
    for peaks in per_slice:
        pair = match(peaks)
        matched.append(pair)
        if pair[0] is not None and pair[1] is not None and len(peaks) >= 2:
            separations[len(matched) - 1] = abs(pair[0].position - pair[1].position)

    # Interaction window: merged (single extremum) or peaks within the
    # interaction distance.  Everything before/after is the pre/post regime.
    interacting = np.array(
        [
            (len(per_slice[i]) < 2) or (separations[i] <= INTERACTION_SITES)
            for i in range(times.size)
        ]
    )
    if interacting[0] or interacting[-1]:
        raise FrontWindowError("waves are not separated at the trajectory ends")
    inter_idx = np.where(interacting)[0]
    pre_end = int(inter_idx[0]) if inter_idx.size else times.size // 2
    post_start = int(inter_idx[-1]) + 1 if inter_idx.size else times.size // 2

    def asymptotic(indices: range) -> list[int]:
        # Track fits want genuinely separated slices: residual interaction
        # tails bend the trajectories near the collision.  When the segment
        # never reaches the fully separated regime, use its most separated
        # portion instead of the whole window.
        seps = [separations[i] for i in indices if np.isfinite(separations[i])]
        if not seps:
            return list(indices)
        cut = min(SEPARATED_SITES, 0.8 * max(seps))
        far = [i for i in indices if separations[i] >= cut]
        return far if len(far) >= 2 else list(indices)

    def segment(indices, edge: int) -> tuple[tuple, tuple, tuple, float]:
        # edge = 0: amplitude read at the earliest slice (pre side);
        # edge = -1: at the latest (post side) -- farthest from the collision.
        vel, inter, amp = [], [], []
        peak_amp = 0.0
        for j in (0, 1):
            ts, ps, amps = [], [], []
            for i in indices:
                p = matched[i][j]
                if p is not None and len(per_slice[i]) >= 2:
                    ts.append(times[i])
                    ps.append(p.position)
                    amps.append(p.amplitude)
            if len(ts) < 2:
                raise FrontWindowError("too few separated slices to fit a track")
            s, b0 = _fit_track(np.asarray(ts), np.asarray(ps))
            vel.append(s)
            inter.append(b0)
            amp.append(amps[edge])
            peak_amp = max(peak_amp, max(amps))
        return tuple(vel), tuple(inter), tuple(amp), peak_amp

    pre_vel, pre_int, pre_amp, pre_peak = segment(asymptotic(range(0, pre_end)), 0)
    post_vel, post_int, post_amp, post_peak = segment(
        asymptotic(range(post_start, times.size)), -1
    )

    excursions = np.max(np.abs(trajectory.values - background), axis=1)
    max_exc = float(np.max(excursions))
    inter_exc = float(np.max(excursions[interacting])) if inter_idx.size else 0.0

    # Largest single-wave amplitude across the asymptotic segments: constant
    # for simple-zero solitons, and the honest (swelled) reference height for
    # families whose constituents breathe as they separate.
    single = max(pre_peak, post_peak)
    shifts = tuple(post_int[j] - pre_int[j] for j in (0, 1))
    vels = tuple(0.5 * (pre_vel[j] + post_vel[j]) for j in (0, 1))
    ctype = HEAD_ON if vels[0] * vels[1] < 0.0 else OVERTAKING

    return CollisionReport(
        collision_type=ctype,
        velocities=vels,
        amplitudes_pre=pre_amp,
        amplitudes_post=post_amp,
        positional_shifts=shifts,
        max_excursion=max_exc,
        interaction_excursion=inter_exc,
        amplification=inter_exc / single,
        amplification_vs_background=(
            inter_exc / abs(background) if background != 0.0 else float("inf")
        ),
    )
