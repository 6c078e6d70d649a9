import cmath
import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import synthetic_set
from sqhhg.observables import (
    DarkHarmonicError,
    ellipticity,
    g2,
    harmonic_report,
    harmonic_reports,
    relative_phase,
    visibility,
    write_reports_csv,
)

N = 101


def _peak(amp, k=30):
    a = np.zeros(N, complex)
    a[k] = amp
    return a


def test_circular_and_linear():
    a = _peak(1.0)
    circ = synthetic_set([(a, 1j * a)])
    assert ellipticity(circ, 3) == pytest.approx(1.0)
    assert relative_phase(circ, 3) == pytest.approx(math.pi / 2)
    lin = synthetic_set([(a, np.zeros(N))])
    assert ellipticity(lin, 3) == 0.0
    assert visibility(lin, 3) == 1.0


def test_equal_intensities_zero_visibility():
    a = _peak(1.0)
    s = synthetic_set([(a, a * cmath.exp(0.3j))])
    assert visibility(s, 3) == pytest.approx(0.0, abs=1e-15)


def test_g2_single_realization_is_one():
    s = synthetic_set([(_peak(0.7), _peak(0.2))])
    assert g2(s, 3, "par") == pytest.approx(1.0)
    assert g2(s, 3, "perp", mode="pointwise") == pytest.approx(1.0)


def test_g2_two_point_distribution():
    s = synthetic_set([(_peak(1.0), _peak(1.0)), (np.zeros(N), _peak(1.0))])
    assert g2(s, 3, "par") == pytest.approx(2.0)
    assert g2(s, 3, "par", mode="pointwise") == pytest.approx(2.0)
    assert g2(s, 3, "perp") == pytest.approx(1.0)


def test_windowed_and_pointwise_differ_for_broad_lines():
    a1 = _peak(1.0, 30) + _peak(1.0, 32)
    a2 = _peak(1.0, 30)
    s = synthetic_set([(a1, a1), (a2, a2)])
    assert g2(s, 3, "par", mode="windowed") == pytest.approx((4 + 1) / 2 / 1.5**2)
    assert g2(s, 3, "par", mode="pointwise") == pytest.approx(1.0)


def test_dark_harmonic():
    s = synthetic_set([(_peak(1.0), np.zeros(N))])
    with pytest.raises(DarkHarmonicError):
        g2(s, 3, "perp")
    with pytest.raises(DarkHarmonicError):
        ellipticity(s, 5)
    with pytest.raises(DarkHarmonicError):
        visibility(s, 5)
    r = harmonic_report(s, 3)
    assert r.g2_perp is None and r.g2_par == pytest.approx(1.0)
    r5 = harmonic_report(s, 5)
    assert r5.ellipticity is None and r5.visibility is None and r5.phase is None


def test_bad_arguments():
    s = synthetic_set([(_peak(1.0), _peak(1.0))])
    with pytest.raises(ValueError):
        g2(s, 3, "total")
    with pytest.raises(ValueError):
        g2(s, 3, "par", mode="spectral")


def _random_set(seed, n_rec=4):
    rng = np.random.default_rng(seed)
    pairs = [(rng.normal(size=N) + 1j * rng.normal(size=N),
              rng.normal(size=N) + 1j * rng.normal(size=N)) for _ in range(n_rec)]
    w = rng.random(n_rec) + 0.05
    w /= w.sum()
    w[-1] = 1 - w[:-1].sum()
    return synthetic_set(pairs, list(w))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), q=st.sampled_from([1, 3, 5, 7, 9]),
       mode=st.sampled_from(["windowed", "pointwise"]))
def test_g2_cauchy_schwarz_and_bounds(seed, q, mode):
    s = _random_set(seed)
    for mu in ("par", "perp"):
        assert g2(s, q, mu, mode=mode) >= 1 - 1e-9
    assert 0 <= ellipticity(s, q) <= 1
    assert -1 <= visibility(s, q) <= 1


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), mag=st.floats(1e-3, 1e3), ang=st.floats(-4, 4))
def test_invariances(seed, mag, ang):
    s = _random_set(seed)
    t = s.scaled(mag * cmath.exp(1j * ang))
    for q in (3, 7):
        assert g2(t, q, "par") == pytest.approx(g2(s, q, "par"), rel=1e-9)
        assert ellipticity(t, q) == pytest.approx(ellipticity(s, q), rel=1e-9, abs=1e-15)
        assert visibility(t, q) == pytest.approx(visibility(s, q), rel=1e-9, abs=1e-15)


def test_report_csv(tmp_path):
    s = synthetic_set([(_peak(1.0), np.zeros(N))])
    reps = harmonic_reports(s, [3, 5])
    path = tmp_path / "r.csv"
    write_reports_csv(reps, path, ("A",), [(0.5,), (0.5,)])
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["A", "q", "I_par", "I_perp", "E_q", "V", "g2_par", "g2_perp", "phase"]
    assert rows[1][:2] == ["0.5", "3"]
    assert rows[1][7] == ""  # dark perpendicular g2 is an empty cell
    assert rows[2][4] == ""
