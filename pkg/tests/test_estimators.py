"""Both g2 estimators on exact hand-computed count tables."""

import numpy as np
import pytest

from twistg2.coincidence import CoincidenceSpec, CountSummary
from twistg2.errors import InsufficientDataError
from twistg2.estimators import (
    ACCIDENTAL,
    DIRECT,
    g2_accidental,
    g2_delay_scan,
    g2_direct,
)
from twistg2.timetags import TagStream

PS = 10**12


def counts(duration_ps=PS, n_i=0, n_s1=0, n_s2=0, n_is1=0, n_is2=0, n_is1s2=0):
    return CountSummary(duration_ps, n_i, n_s1, n_s2, n_is1, n_is2, n_is1s2)


def test_direct_exact_value():
    # g2 = n3 * n_i / (n_is1 * n_is2) = 1 * 1e6 / 1e8 = 0.01 exactly
    c = counts(n_i=10**6, n_s1=50_000, n_s2=50_000,
               n_is1=10_000, n_is2=10_000, n_is1s2=1)
    est = g2_direct(c)
    assert est.method == DIRECT
    assert est.value == 0.01
    assert est.std_err == pytest.approx(0.01 * np.sqrt(1 + 1e-6 + 2e-4))


def test_direct_zero_triples_flagged():
    c = counts(n_i=1000, n_s1=500, n_s2=500, n_is1=50, n_is2=50)
    est = g2_direct(c)
    assert est.value == 0.0 and est.std_err == 0.0
    assert est.insufficient_triples


def test_direct_duration_invariant():
    base = dict(n_i=1000, n_s1=900, n_s2=800, n_is1=60, n_is2=70, n_is1s2=2)
    assert g2_direct(counts(PS, **base)) == g2_direct(counts(7 * PS, **base))


def test_direct_exact_scale_invariance():
    # large counts with a common factor: the rational arithmetic must give
    # bit-identical values, not merely close ones
    small = counts(n_i=999_983, n_s1=700_001, n_s2=699_999,
                   n_is1=70_003, n_is2=70_001, n_is1s2=357)
    k = 1013
    big = counts(
        small.duration_ps,
        *(k * v for v in (small.n_i, small.n_s1, small.n_s2,
                          small.n_is1, small.n_is2)),
        k * small.n_is1s2,
    )
    assert g2_direct(big).value == g2_direct(small).value


def test_accidental_exact_value():
    # 1 s run: R_i = 1e5, R_s = 5e4 both arms, R_is = 1e4 both arms,
    # window 410 ps => g2 = 1e5 * 410e-12 * (5 + 5) = 4.1e-4 exactly
    c = counts(n_i=100_000, n_s1=50_000, n_s2=50_000, n_is1=10_000, n_is2=10_000)
    est = g2_accidental(c, window_ps=410)
    assert est.method == ACCIDENTAL
    assert est.value == 4.1e-4
    assert est.std_err > 0


def test_accidental_linear_in_window():
    c = counts(n_i=100_000, n_s1=50_000, n_s2=40_000, n_is1=9000, n_is2=8000)
    assert g2_accidental(c, 820).value == 2 * g2_accidental(c, 410).value


def test_accidental_duration_scaling():
    base = dict(n_i=1000, n_s1=900, n_s2=800, n_is1=60, n_is2=70)
    # same counts over twice the time means half the rates everywhere:
    # the estimate R_i*dt*(R_s/R_is) halves
    g1 = g2_accidental(counts(PS, **base), 410).value
    g2 = g2_accidental(counts(2 * PS, **base), 410).value
    assert g1 == 2 * g2


def test_undefined_without_twofolds():
    c = counts(n_i=1000, n_s1=500, n_s2=500, n_is1=0, n_is2=3)
    with pytest.raises(InsufficientDataError):
        g2_direct(c)
    with pytest.raises(InsufficientDataError):
        g2_accidental(c, 410)


def test_error_bars_shrink_with_statistics():
    small = counts(n_i=1000, n_s1=900, n_s2=800, n_is1=60, n_is2=70, n_is1s2=4)
    big = counts(10 * PS, *(10 * v for v in (1000, 900, 800, 60, 70)), 40)
    assert g2_direct(big).value == g2_direct(small).value
    assert g2_direct(big).std_err < g2_direct(small).std_err
    assert g2_accidental(big, 410).std_err < g2_accidental(small, 410).std_err


def _correlated_stream():
    # 500 exact pairs split across the arms plus dense uncorrelated tags
    rng = np.random.default_rng(2)
    duration = 10**7
    pair_t = np.sort(rng.integers(5000, duration - 5000, 500))
    bg = rng.integers(0, duration, 30_000)
    channels = np.concatenate(
        [
            np.zeros(500, np.uint8),
            np.ones(250, np.uint8),
            np.full(250, 2, np.uint8),
            rng.integers(1, 3, 30_000).astype(np.uint8),
        ]
    )
    times = np.concatenate([pair_t, pair_t[:250], pair_t[250:], bg])
    return TagStream.from_unsorted(duration, channels, times)


def test_delay_scan_geometry():
    curve = g2_delay_scan(_correlated_stream(), CoincidenceSpec(), 500, 4)
    assert len(curve.points) == 9
    taus = [tau for tau, _ in curve.points]
    assert taus == list(range(-2000, 2500, 500))
    assert all(est.method == DIRECT for _, est in curve.points)


def test_delay_scan_base_delay_composes():
    s = _correlated_stream()
    plain = g2_delay_scan(s, CoincidenceSpec(), 500, 2)
    offset = g2_delay_scan(s, CoincidenceSpec(delay_s2_ps=500), 500, 2)
    # shifting the base delay by one step slides the curve by one point
    for (tau_a, est_a), (tau_b, est_b) in zip(plain.points[3:], offset.points[2:4]):
        assert est_a.value == est_b.value
