import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swdecay.diffraction import (amplitudes, partial_e, partial_m, partials,
                                 totals_from_sum)
from swdecay.dynamics import total_populations
from swdecay.errors import GridNotConverged, TailNotConverged
from swdecay.model import ModelParams

P5 = ModelParams(5.0)

# |a_n|^2 for n = 0..5 from 30-digit quadrature of the Fourier integral
FROZEN = {
    (5.0, 2.0): [0.0023703827921295299, 0.037497923464690564, 0.018445176211747701,
                 0.05437653820861782, 0.082292211841918659, 0.026310568011329539],
    (3.0, 2.0): [0.0007233378900599185, 0.050265770460016414, 0.14962497021511163,
                 0.037309435770362967, 0.0084316134084025693, 0.00070817822778826807],
}


def test_initial_spectrum():
    s = amplitudes(P5, 0.0, 4)
    assert s.order(0, "m") == pytest.approx(1.0, abs=1e-15)
    w = np.concatenate([s.w_m, s.w_e])
    assert w.sum() == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_fourier_against_high_precision(key):
    rabi, t = key
    s = amplitudes(ModelParams(rabi), t, 5)
    for n, ref in enumerate(FROZEN[key]):
        got = s.w_m[5 + n] if n % 2 == 0 else s.w_e[5 + n]
        assert got == pytest.approx(ref, abs=1e-13)


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_closed_form_against_high_precision(key):
    rabi, t = key
    wm, we = partials(ModelParams(rabi), t, 2)
    ref = FROZEN[key]
    np.testing.assert_allclose(wm, ref[0::2], atol=1e-13)
    np.testing.assert_allclose(we, ref[1::2], atol=1e-13)


@pytest.mark.parametrize("rabi,t", [(5.0, 0.5), (5.0, 2.0), (5.0, 6.0), (3.0, 2.0)])
def test_selection_rules_and_mirror(rabi, t):
    nmax = int(math.ceil(rabi * t)) + 4
    s = amplitudes(ModelParams(rabi), t, nmax)
    odd = np.abs(s.orders) % 2 == 1
    assert np.abs(s.a_m[odd]).max() <= 1e-12
    assert np.abs(s.a_e[~odd]).max() <= 1e-12
    np.testing.assert_allclose(s.w_m, s.w_m[::-1], atol=1e-15)
    np.testing.assert_allclose(s.w_e, s.w_e[::-1], atol=1e-15)


@pytest.mark.parametrize("rabi,t", [(5.0, 0.5), (5.0, 2.0), (5.0, 6.0), (3.0, 2.0)])
def test_closed_form_matches_fourier(rabi, t):
    p = ModelParams(rabi)
    nmax = int(math.floor(rabi * t))
    s = amplitudes(p, t, nmax + 1)
    wm, we = partials(p, t, nmax // 2 + 1)
    for n in range(0, nmax + 1):
        if n % 2 == 0:
            assert abs(wm[n // 2] - abs(s.order(n, "m")) ** 2) <= 1e-8
        else:
            assert abs(we[(n - 1) // 2] - abs(s.order(n, "e")) ** 2) <= 1e-8


def test_parseval():
    s = amplitudes(P5, 2.0, 40)
    wm, we = total_populations(P5, 2.0, tol=1e-12)
    assert s.w_m.sum() == pytest.approx(wm, abs=1e-8)
    assert s.w_e.sum() == pytest.approx(we, abs=1e-8)


def test_partials_trivial():
    assert partial_m(P5, 0.0, 0) == 1.0
    assert partial_m(P5, 0.0, 3) == 0.0
    assert partial_e(P5, 0.0, 0) == 0.0
    with pytest.raises(ValueError):
        partial_m(P5, 1.0, -1)


def test_partials_unitary_limit_bessel():
    p = ModelParams(4.0, gamma=0.0)
    t = 1.7
    wm, we = partials(p, t, 4)
    for n in range(5):
        assert wm[n] == pytest.approx(float(mp.besselj(2 * n, 4.0 * t / 2)) ** 2, abs=1e-14)
    a = 4.0 * t / 2
    integral = mp.quad(lambda z: mp.besselj(2, a * z) - mp.besselj(0, a * z), [0, 1])
    assert we[0] == pytest.approx(float((4.0 * t / 4) ** 2 * integral**2), abs=1e-14)
    s = amplitudes(p, t, 3)
    assert we[0] == pytest.approx(abs(s.order(1, "e")) ** 2, abs=1e-12)


def test_partial_e_wrapper_consistent():
    wm, we = partials(P5, 2.0, 3)
    assert partial_m(P5, 2.0, 2) == pytest.approx(wm[2], abs=1e-15)
    assert partial_e(P5, 2.0, 1) == pytest.approx(we[1], abs=1e-15)


def test_large_decay_times_no_overflow():
    for t in (200.0, 400.0):
        wm, we = partials(P5, t, 3)
        assert np.all(np.isfinite(wm)) and np.all(np.isfinite(we))
        s = amplitudes(P5, t, 7)
        np.testing.assert_allclose(wm, s.w_m[7::2], atol=1e-10)


def test_totals_from_sum():
    wm, we, n = totals_from_sum(P5, 2.0)
    qm, qe = total_populations(P5, 2.0, tol=1e-12)
    assert wm == pytest.approx(qm, abs=1e-10) and we == pytest.approx(qe, abs=1e-10)
    assert n >= 10
    assert totals_from_sum(P5, 0.0)[:2] == (1.0, 0.0)


@pytest.mark.parametrize("t", [0.7, 3.0, 9.0])
def test_totals_from_sum_unitary(t):
    wm, we, _ = totals_from_sum(ModelParams(5.0, gamma=0.0), t, tail_tol=1e-12)
    assert wm + we == pytest.approx(1.0, abs=1e-11)


def test_totals_from_sum_errors():
    with pytest.raises(ValueError):
        totals_from_sum(P5, 1.0, tail_tol=0.0)
    with pytest.raises(TailNotConverged):
        totals_from_sum(P5, 6.0, n_limit=9)


def test_grid_not_converged():
    with pytest.raises(GridNotConverged):
        amplitudes(P5, 2.0, 4, tol=1e-30, max_points=1024)
    with pytest.raises(ValueError):
        amplitudes(P5, 2.0, 0)


def test_partials_first_minima_differ():
    ts = np.linspace(0.0, 6.0, 601)
    w0 = np.array([partials(P5, t, 1)[0] for t in ts])
    i0 = 1 + np.argmax((w0[1:-1, 0] < w0[:-2, 0]) & (w0[1:-1, 0] <= w0[2:, 0]))
    i2 = 1 + np.argmax((w0[1:-1, 1] < w0[:-2, 1]) & (w0[1:-1, 1] <= w0[2:, 1]))
    assert abs(ts[i0] - ts[i2]) > ts[1] - ts[0]


@settings(max_examples=40, deadline=None)
@given(rabi=st.floats(0.1, 8.0), gamma=st.floats(0.1, 3.0), t=st.floats(0.0, 8.0))
def test_partials_bounded(rabi, gamma, t):
    wm, we = partials(ModelParams(rabi, gamma), t, 6)
    assert np.all(wm >= 0) and np.all(wm <= 1 + 1e-12)
    assert np.all(we >= 0) and np.all(we <= 1 + 1e-12)
    assert wm[0] + 2 * wm[1:].sum() + 2 * we.sum() <= 1 + 1e-9


def test_phase_enters_excited_amplitudes_only():
    a = amplitudes(P5, 1.5, 4)
    b = amplitudes(ModelParams(5.0, rabi_phase=1.1), 1.5, 4)
    np.testing.assert_allclose(b.a_m, a.a_m, atol=1e-15)
    np.testing.assert_allclose(b.a_e, a.a_e * np.exp(-1.1j), atol=1e-15)


def test_rows_layout():
    rows = list(amplitudes(P5, 1.0, 2).rows())
    assert len(rows) == 10
    assert rows[0][:3] == (1.0, -2, "m") and rows[5][:3] == (1.0, -2, "e")
