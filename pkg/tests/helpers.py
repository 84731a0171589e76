"""Shared scenario generators for the test suite."""

import math

import numpy as np

from wavedfs.scenarios import Scenario
from wavedfs.wavefield import PlaneWave, SensorArray


def random_scenario(rng, n_max=8, d_max=4, periods=None, omega=None):
    """Random non-degenerate scenario: n sensors, d < n noise waves."""
    n = int(rng.integers(2, n_max + 1))
    d = int(rng.integers(1, min(d_max, n - 1) + 1))
    omega = float(rng.uniform(0.5, 3.0)) if omega is None else omega
    periods = int(rng.integers(1, 5)) if periods is None else periods
    sensors = SensorArray(tuple(tuple(rng.uniform(-3.0, 3.0, 2))
                                for _ in range(n)))

    def wave():
        a = float(rng.uniform(0.0, 2.0 * math.pi))
        klen = float(rng.uniform(0.3, 2.0))
        return PlaneWave(omega, (klen * math.cos(a), klen * math.sin(a)),
                         float(rng.uniform(0.0, 2.0 * math.pi)))

    return Scenario(sensors, wave(), tuple(wave() for _ in range(d)), periods)


def generic_line_scenario(n, periods=3):
    """n sensors on a parabola with n−1 generic noise directions (m = n)."""
    sensors = SensorArray(tuple((0.7 * i, 0.31 * i * i) for i in range(n)))
    signal = PlaneWave(1.0, (math.cos(0.4), math.sin(0.4)), 0.0)
    noises = tuple(PlaneWave(1.0, (math.cos(2.0 + 0.5 * j),
                                   math.sin(2.0 + 0.5 * j)), 0.1 * j)
                   for j in range(n - 1))
    return Scenario(sensors, signal, noises, periods)


def uniform_noise_scenario(n=6, periods=2):
    """Spatially uniform noise (k = 0): every sensor couples identically.

    The sine phase keeps the per-sensor lock-in couplings nonzero (the
    lock-in fully rejects the cosine quadrature), so any sensor pair — but
    no single sensor — carries a decoupled sign-string pair.
    """
    rng = np.random.default_rng(7)
    sensors = SensorArray(tuple(tuple(rng.uniform(-2.0, 2.0, 2))
                                for _ in range(n)))
    signal = PlaneWave(1.0, (0.9, 0.3), 0.2)
    noises = (PlaneWave(1.0, (0.0, 0.0), math.pi / 2),)
    return Scenario(sensors, signal, noises, periods)
