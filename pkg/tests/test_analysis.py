"""Collision classification, region labelling, peak tracking, measurements."""

import math

import numpy as np
import pytest

from gardnerlattice import (
    FrontWindowError,
    GardnerParams,
    SolitonSpec,
    classify_collision,
    find_peaks,
    measure_interaction,
    one_soliton_model,
    phase_shifts,
    positive_speed_threshold,
    region_label,
    region_map,
    soliton_velocity,
    track_peaks,
    two_soliton_model,
)
from gardnerlattice import analysis

P = GardnerParams(a=1.0, b=-1.0, sigma=-1)


def test_classify_reference_pairs():
    assert classify_collision(P, math.sqrt(2.0), 2.0) == analysis.HEAD_ON
    assert classify_collision(P, 2.3, 2.5) == analysis.OVERTAKING
    assert classify_collision(P, 1.5, 2.0) == analysis.HEAD_ON
    # order of the pair does not matter
    assert classify_collision(P, 2.0, 1.5) == analysis.HEAD_ON


def test_classify_degenerate_boundary():
    q = positive_speed_threshold(P)
    assert classify_collision(P, math.sqrt(q), 2.5) == analysis.DEGENERATE


def test_classify_criteria_agree_on_grid():
    for a in np.linspace(-3.0, 3.0, 21):
        for b in np.linspace(-3.0, -0.05, 21):
            if a * a + 4.0 * b >= -1e-3 or a == 0.0:
                continue
            params = GardnerParams(a=float(a), b=float(b), sigma=-1)
            # classify_collision raises if its two criteria ever disagree
            classify_collision(params, math.sqrt(2.0), 2.0)


def test_region_labels_match_pointwise_classification():
    rows = region_map(np.linspace(-3.0, 3.0, 25), np.linspace(-3.0, -0.1, 25), 2.0, 4.0)
    for a, b, label in rows:
        if label == analysis.EXCLUDED:
            assert a * a + 4.0 * b >= 0.0 or b == 0.0
            continue
        params = GardnerParams(a=a, b=b, sigma=-1)
        got = classify_collision(params, math.sqrt(2.0), math.sqrt(4.0))
        if label in (analysis.OVERTAKING_POSITIVE, analysis.OVERTAKING_NEGATIVE):
            assert got == analysis.OVERTAKING
        else:
            assert got == label


def test_region_map_shows_all_regions():
    rows = region_map(np.linspace(-3.0, 3.0, 61), np.linspace(-3.0, -0.02, 61), 2.0, 4.0)
    labels = {label for _, _, label in rows}
    assert analysis.HEAD_ON in labels
    assert analysis.OVERTAKING_POSITIVE in labels
    assert analysis.OVERTAKING_NEGATIVE in labels
    assert analysis.EXCLUDED in labels


def test_region_map_even_in_a():
    bs = np.linspace(-2.5, -0.5, 9)
    left = region_map([-1.7], bs, 2.0, 4.0)
    right = region_map([1.7], bs, 2.0, 4.0)
    assert [r[2] for r in left] == [r[2] for r in right]


def test_track_single_soliton_velocity_and_amplitude():
    model = one_soliton_model(SolitonSpec([(math.e, 1.0)], P))
    times = np.linspace(-1.5, 1.5, 31)
    traj = model.sample(-30, 30, times)
    slices = track_peaks(traj, model.background)
    positions, amplitudes = [], []
    for peaks in slices:
        assert len(peaks) == 1
        positions.append(peaks[0].position)
        amplitudes.append(peaks[0].amplitude)
        assert peaks[0].polarity == 1
    slope = np.polyfit(times, positions, 1)[0]
    assert slope == pytest.approx(model.velocity, rel=0.01)
    amp = math.sqrt(3.0) * (math.e**2 - math.e**-2) / 4.0
    assert np.max(np.abs(np.array(amplitudes) - amp)) / amp < 1e-3


def test_track_flat_field_gives_nothing():
    model = one_soliton_model(SolitonSpec([(math.e, 1.0)], P))
    traj = model.sample(1000, 1040, [0.0])
    assert track_peaks(traj, model.background) == [[]]


def test_track_bright_dark_polarity():
    model = two_soliton_model(SolitonSpec([(1.5, 1.0), (2.0, -1.0)], P))
    traj = model.sample(-40, 40, [-4.0])
    peaks = find_peaks(traj.values[0], traj.sites, model.background)
    assert sorted(p.polarity for p in peaks) == [-1, 1]


def test_measure_interaction_overtaking_pair():
    spec = SolitonSpec([(2.3, 1.0), (2.5, 1.0)], P)
    model = two_soliton_model(spec)
    times = np.arange(-12.0, 12.0 + 1e-9, 0.2)
    traj = model.sample(-65, 65, times)
    report = measure_interaction(traj, model.background)
    assert report.collision_type == analysis.OVERTAKING
    for j, (lam, _) in enumerate(spec.eigenvalues):
        assert report.velocities[j] == pytest.approx(soliton_velocity(lam, P), rel=0.01)
        assert abs(report.amplitudes_post[j] - report.amplitudes_pre[j]) <= 1e-3
    # elasticity: asymptotic amplitudes match the isolated-soliton heights
    for j, (lam, _) in enumerate(spec.eigenvalues):
        height = math.sqrt(3.0) * (lam**2 - lam**-2) / 4.0
        assert report.amplitudes_pre[j] == pytest.approx(height, abs=1e-3)
        assert report.amplitudes_post[j] == pytest.approx(height, abs=1e-3)
    shifts = phase_shifts(spec)
    for j in (0, 1):
        assert report.positional_shifts[j] == pytest.approx(shifts[j].delta_n, abs=2e-2)
    # same-polarity pair: the excursion while colliding stays below the
    # larger single amplitude
    assert report.interaction_excursion < max(report.amplitudes_pre)


def test_measure_interaction_head_on_pair():
    spec = SolitonSpec([(1.5, 1.0), (2.0, -1.0)], P)
    model = two_soliton_model(spec)
    times = np.arange(-5.0, 5.0 + 1e-9, 0.05)
    traj = model.sample(-45, 35, times)
    report = measure_interaction(traj, model.background)
    assert report.collision_type == analysis.HEAD_ON
    assert report.amplification > 2.0  # opposite polarity piles up


def test_measure_interaction_needs_separated_ends():
    model = two_soliton_model(SolitonSpec([(2.3, 1.0), (2.5, 1.0)], P))
    traj = model.sample(-45, 35, np.linspace(-0.5, 0.5, 11))  # collision window only
    with pytest.raises(FrontWindowError):
        measure_interaction(traj, model.background)


def test_sech_refinement_is_exact_on_sech_profiles():
    # A sech(w (n - x0)) sampled on integers: the three-point inversion in
    # find_peaks recovers x0 and A to rounding
    w, x0, amp = 1.8, 3.2654, 2.5
    sites = np.arange(-10, 15)
    values = 0.5 + amp / np.cosh(w * (sites - x0))
    peaks = find_peaks(values, sites, 0.5)
    assert len(peaks) == 1
    assert peaks[0].position == pytest.approx(x0, abs=1e-12)
    assert peaks[0].amplitude == pytest.approx(amp, rel=1e-12)
