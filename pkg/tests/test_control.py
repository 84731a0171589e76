"""Control shapes, Fourier transforms, couplings, lock-in selectivity."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from helpers import random_scenario
from wavedfs.control import (Constant, ControlSequence, Rect, Sampled,
                             Sinusoid, coupling_quadrature, coupling_strength,
                             fourier_transform, lockin_sequence,
                             per_sensor_couplings, rect_wave, scalar_product,
                             wave_lock_sequence, coupling_spectrum)
from wavedfs.wavefield import (MonochromaticField, PlaneWave, SensorArray,
                               SignString, phasor_at)

_TWO_PI = 2.0 * math.pi


def _numeric_ft(shape, T, wq):
    pts = list(shape.flip_times(T)) if isinstance(shape, Rect) else None
    re = quad(lambda t: math.cos(wq * t) * float(shape(t)), -T / 2, T / 2,
              points=pts, limit=400)[0]
    im = quad(lambda t: -math.sin(wq * t) * float(shape(t)), -T / 2, T / 2,
              points=pts, limit=400)[0]
    return complex(re, im)


@pytest.mark.parametrize("shape", [
    Constant(1), Constant(-1), Constant(0),
    Sinusoid(0.7, 1.2, 1.3), Sinusoid(1.0, 0.0, 0.8),
    Rect(1.1, 0.4, 1.3), Rect(math.pi / 2, -math.pi / 2, 1.0),
    Rect(2.9, 5.0, 0.6),
])
@pytest.mark.parametrize("wq", [0.0, 0.8, 1.3, 2.6, 3.9])
def test_fourier_transform_matches_numeric(shape, wq):
    omega = getattr(shape, "omega", 1.0)
    T = 3 * _TWO_PI / omega
    got = fourier_transform(shape, T, wq)
    want = _numeric_ft(shape, T, wq)
    assert abs(got - want) < 1e-8 * max(1.0, T)


def test_shape_validation():
    with pytest.raises(ValueError):
        Sinusoid(1.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        Rect(-0.1, 0.0, 1.0)
    with pytest.raises(ValueError):
        Rect(3.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        Constant(2)
    with pytest.raises(ValueError):
        Sampled((0.0, 1.5), 1.0)
    with pytest.raises(ValueError):
        rect_wave(4.0, 0.0)
    with pytest.raises(ValueError):
        ControlSequence((Sinusoid(1.0, 0.0, 1.0), Rect(1.0, 0.0, 2.0)), 1.0)


def test_rect_wave_values():
    assert rect_wave(1.0, 0.0) == 1.0
    assert rect_wave(1.0, 2.0) == -1.0
    assert rect_wave(1.0, _TWO_PI + 0.5) == 1.0
    assert rect_wave(1.0, -0.5) == 1.0


@given(gamma=st.floats(0.2, math.pi - 0.2), phase=st.floats(0.0, _TWO_PI),
       omega=st.floats(0.3, 3.0), periods=st.integers(1, 4))
def test_flip_times_are_sign_changes(gamma, phase, omega, periods):
    shape = Rect(gamma, phase, omega)
    T = periods * _TWO_PI / omega
    flips = shape.flip_times(T)
    assert all(-T / 2 < t < T / 2 for t in flips)
    eps = 1e-7 / omega
    for t in flips:
        assert float(shape(t - eps)) * float(shape(t + eps)) == -1.0
    # two flips per period (up to boundary effects at the window edges)
    assert abs(len(flips) - 2 * periods) <= 2


def test_sampled_control_interpolates():
    s = Sampled((0.0, 1.0, 0.0, -1.0, 0.0), 4.0)
    assert float(s(0.0)) == 0.0
    assert abs(float(s(-1.5)) - 0.5) < 1e-12
    ft = fourier_transform(s, 4.0, 0.0)
    assert abs(ft) < 1e-12  # odd samples integrate to zero


def test_coupling_linear_in_probe_profile():
    rng = np.random.default_rng(5)
    scenario = random_scenario(rng, n_max=5, d_max=2)
    control = lockin_sequence(scenario.omega, scenario.T, scenario.n)
    z = SignString.ones(scenario.n)
    w1, w2 = scenario.signal, scenario.noises[0]
    a, b = 1.7, -0.4
    combo = MonochromaticField(
        scenario.omega,
        lambda x: a * phasor_at(w1, x) + b * phasor_at(w2, x))
    g1 = coupling_strength(z, control, scenario.sensors, w1).g
    g2 = coupling_strength(z, control, scenario.sensors, w2).g
    g = coupling_strength(z, control, scenario.sensors, combo).g
    assert abs(g - (a * g1 + b * g2)) < 1e-10 * max(1.0, abs(g))


def test_coupling_odd_in_z():
    rng = np.random.default_rng(6)
    for _ in range(10):
        scenario = random_scenario(rng, n_max=6, d_max=3)
        control = lockin_sequence(scenario.omega, scenario.T, scenario.n)
        z = SignString(tuple(int(v) for v in
                             rng.choice((-1, 1), size=scenario.n)))
        g = coupling_strength(z, control, scenario.sensors, scenario.signal).g
        gm = coupling_strength(-z, control, scenario.sensors,
                               scenario.signal).g
        assert gm == -g


def test_lockin_resonant_and_even_harmonics():
    omega, periods, n = 1.3, 3, 1
    T = periods * _TWO_PI / omega
    control = lockin_sequence(omega, T, n)
    sensors = SensorArray(((0.0, 0.0),))
    z = SignString.ones(n)
    resonant = coupling_strength(
        z, control, sensors,
        PlaneWave(omega, (0.0, 0.0), math.pi / 2)).g
    assert abs(resonant - 4.0 * periods / omega) < 1e-9
    for harmonic in (2, 4, 6):
        probe = PlaneWave(harmonic * omega, (0.0, 0.0), math.pi / 2)
        assert abs(coupling_strength(z, control, sensors, probe).g) < 1e-10


def test_lockin_odd_harmonic_decay():
    omega, periods = 1.0, 2
    T = periods * _TWO_PI / omega
    control = lockin_sequence(omega, T, 1)
    sensors = SensorArray(((0.0, 0.0),))
    z = SignString.ones(1)
    base = coupling_strength(z, control, sensors,
                             PlaneWave(omega, (0.0, 0.0), math.pi / 2)).g
    for ell in (2, 3, 4):
        wq = (2 * ell - 1) * omega
        g = coupling_strength(z, control, sensors,
                              PlaneWave(wq, (0.0, 0.0), math.pi / 2)).g
        assert abs(abs(g) - abs(base) / (2 * ell - 1)) < 1e-9


def test_fourier_consistency_direct_integral():
    rng = np.random.default_rng(11)
    scenario = random_scenario(rng, n_max=4, d_max=2, periods=2)
    control = lockin_sequence(scenario.omega, scenario.T, scenario.n)
    z = SignString.ones(scenario.n)
    w = scenario.signal
    direct = coupling_quadrature(z, control, scenario.sensors, w)
    ftv = fourier_transform(control.per_sensor[0], control.T, w.omega)
    via_phasors = float(np.real(
        np.exp(1j * w.phi)
        * sum(zi * np.exp(1j * np.dot(w.kvec, x)) * ftv
              for zi, x in zip(z.z, scenario.sensors.positions))))
    assert abs(direct - via_phasors) < 1e-10 * max(1.0, abs(via_phasors))


def test_closed_form_matches_quadrature_random():
    rng = np.random.default_rng(12)
    for _ in range(15):
        scenario = random_scenario(rng, n_max=8, d_max=4, periods=2)
        shapes = []
        for _ in range(scenario.n):
            kind = rng.integers(0, 3)
            if kind == 0:
                shapes.append(Sinusoid(float(rng.uniform(0.1, 1.0)),
                                       float(rng.uniform(0, _TWO_PI)),
                                       scenario.omega))
            elif kind == 1:
                shapes.append(Rect(float(rng.uniform(0.3, math.pi - 0.3)),
                                   float(rng.uniform(0, _TWO_PI)),
                                   scenario.omega))
            else:
                shapes.append(Constant(int(rng.choice((-1, 1)))))
        control = ControlSequence(tuple(shapes), scenario.T)
        z = SignString(tuple(int(v) for v in
                             rng.choice((-1, 1), size=scenario.n)))
        probe = scenario.noises[0]
        closed = coupling_strength(z, control, scenario.sensors, probe).g
        numeric = coupling_quadrature(z, control, scenario.sensors, probe)
        scale = max(sum(abs(fourier_transform(s, control.T, probe.omega))
                        for s in control.per_sensor), 1e-6 * control.T)
        assert abs(closed - numeric) <= 1e-9 * max(abs(closed), scale)


def test_scalar_product_phasor_vs_callable():
    rng = np.random.default_rng(13)
    omega, periods = 1.2, 2
    T = periods * _TWO_PI / omega
    n = 4
    z = SignString((1, -1, 1, 1))
    cx = rng.normal(size=n) + 1j * rng.normal(size=n)
    cy = rng.normal(size=n) + 1j * rng.normal(size=n)
    fast = scalar_product(cx, cy, z, T)

    def funcs(c):
        return [lambda t, ci=ci: np.real(ci * np.exp(-1j * omega * t))
                for ci in c]

    slow = scalar_product(funcs(cx), funcs(cy), z, T)
    assert abs(fast - slow) < 1e-8 * max(1.0, abs(fast))


def test_wave_lock_sequence_rectifies_signal():
    rng = np.random.default_rng(14)
    omega, periods, n = 1.0, 3, 5
    T = periods * _TWO_PI / omega
    sensors = SensorArray(tuple(tuple(rng.uniform(-4.0, 4.0, 2))
                                for _ in range(n)))
    # the rectified coupling n·4N/ω is reached at local sine alignment
    signal = PlaneWave(omega, (0.6, -0.8), math.pi / 2)
    control = wave_lock_sequence(signal, sensors, T)
    g = coupling_strength(SignString.ones(n), control, sensors, signal).g
    assert abs(g - 4.0 * periods * n / omega) < 1e-9 * n


def test_coupling_spectrum():
    sensors = SensorArray(((0.0, 0.0), (1.0, 0.0)))
    control = lockin_sequence(1.0, _TWO_PI, 2)
    z = SignString.ones(2)
    grid = [0.0, 1.0, 2.0]
    out = coupling_spectrum(
        z, control, sensors,
        lambda a: PlaneWave(1.0, (math.cos(a), math.sin(a)), math.pi / 2),
        grid)
    assert [a for a, _ in out] == grid
    assert all(g2 >= 0.0 for _, g2 in out)
    with pytest.raises(ValueError):
        coupling_spectrum(z, control, sensors, lambda a: None, [])


def test_per_sensor_couplings_mismatch():
    control = lockin_sequence(1.0, _TWO_PI, 2)
    sensors = SensorArray(((0.0, 0.0),))
    with pytest.raises(ValueError):
        per_sensor_couplings(control, sensors, PlaneWave(1.0, (1.0, 0.0)))
