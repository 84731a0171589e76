"""
wavedfs.scenarios — scenario container, JSON ingestion, canonical examples.

A Scenario bundles what a sensing task needs: the sensor array, the signal
wave, the noise waves, and the common interaction window (a whole number of
carrier periods).  Helpers build the recurring example geometries: the
point-symmetric circular array with virtual noise directions, and the
crowded-noise circle used for the entangled-versus-product comparison.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .wavefield import PlaneWave, SensorArray, SignString, build_field_matrix

__all__ = [
    "Scenario",
    "circular_scenario",
    "scaling_scenario",
    "CIRCLE_RADIUS",
    "NOISY_ARC",
]

_TWO_PI = 2.0 * math.pi

#: Circle radius for the point-symmetric aDFS construction (carrier ω = |k| = 1).
CIRCLE_RADIUS = 1.5

#: Angular interval containing all (real and virtual) noise directions.
NOISY_ARC = (3 * math.pi / 4, 7 * math.pi / 4)


@dataclass(frozen=True)
class Scenario:
    """A sensing task: sensors, one signal wave, noise waves, time window."""

    sensors: SensorArray
    signal: PlaneWave
    noises: tuple
    periods: int

    def __post_init__(self):
        object.__setattr__(self, "noises", tuple(self.noises))
        if self.periods < 1:
            raise ValueError("periods must be a positive integer")

    @property
    def omega(self) -> float:
        return self.signal.omega

    @property
    def T(self) -> float:
        return self.periods * _TWO_PI / self.omega

    @property
    def n(self) -> int:
        return self.sensors.n

    @property
    def d(self) -> int:
        return len(self.noises)

    def waves(self):
        """(wave, role) pairs in field-matrix order: noises first, signal last."""
        return [(w, "noise") for w in self.noises] + [(self.signal, "signal")]

    def field_matrix(self, mode: str = "known_phases",
                     z: Optional[SignString] = None):
        return build_field_matrix(self.waves(), self.sensors, self.T, mode, z)

    def to_json_dict(self) -> dict:
        def wave_dict(w, role):
            return {"role": role, "k": list(w.kvec),
                    "phi": w.phi if w.phase_known else "unknown"}
        return {
            "omega": self.omega,
            "sensors": [list(p) for p in self.sensors.positions],
            "waves": [wave_dict(w, r) for w, r in self.waves()],
            "periods": self.periods,
        }

    def scenario_hash(self) -> str:
        blob = json.dumps(self.to_json_dict(), sort_keys=True,
                          separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    @staticmethod
    def from_json_dict(doc: dict) -> "Scenario":
        omega = float(doc["omega"])
        sensors = SensorArray(tuple(tuple(p) for p in doc["sensors"]))
        signal = None
        noises = []
        for w in doc["waves"]:
            phi = w.get("phi", 0.0)
            unknown = phi == "unknown"
            wave = PlaneWave(omega, tuple(w["k"]),
                             0.0 if unknown else float(phi),
                             phase_known=not unknown)
            if w["role"] == "signal":
                if signal is not None:
                    raise ValueError("more than one signal wave")
                signal = wave
            elif w["role"] == "noise":
                noises.append(wave)
            else:
                raise ValueError(f"unknown wave role {w['role']!r}")
        if signal is None:
            raise ValueError("no signal wave in scenario")
        return Scenario(sensors, signal, tuple(noises), int(doc["periods"]))


def _circle_positions(n: int, radius: float, base_horizontal: bool) -> tuple:
    if base_horizontal:
        # orient the regular n-gon so its base edge is parallel to the x-axis
        ang = -math.pi / 2 + math.pi / n + _TWO_PI * np.arange(n) / n
    else:
        ang = _TWO_PI * np.arange(n) / n
    return tuple((radius * math.cos(a), radius * math.sin(a)) for a in ang)


def circular_scenario(n: int, radius: float = CIRCLE_RADIUS,
                      periods: int = 3) -> Scenario:
    """Point-symmetric circular array with n/2 virtual noise directions.

    An even number of sensors sits at angles 2πk/n on a circle.  The signal
    comes from the top right, k_s = (1,1)/√2, while the noise direction is
    only known to lie in the lower-left arc [3π/4, 7π/4].  The n/2 virtual
    noise waves are spread uniformly over that arc (endpoints included); the
    DFS construction then decouples them exactly.
    """
    if n < 2 or n % 2:
        raise ValueError("n must be even and at least 2")
    sensors = SensorArray(_circle_positions(n, radius, base_horizontal=False))
    s = 1.0 / math.sqrt(2.0)
    signal = PlaneWave(1.0, (s, s), 0.0)
    alphas = np.linspace(NOISY_ARC[0], NOISY_ARC[1], n // 2)
    noises = tuple(PlaneWave(1.0, (math.cos(a), math.sin(a)), 0.0)
                   for a in alphas)
    return Scenario(sensors, signal, noises, periods)


def _candidate_noise_angles(delta: float = math.pi / 20) -> np.ndarray:
    return np.linspace(3 * math.pi / 4 + delta, 7 * math.pi / 4 + delta, 19)


def _select_noise_angles(d: int, delta: float = math.pi / 20) -> list:
    """Pick d of the 19 candidate directions in the order the comparison uses.

    The first is the candidate closest to π/4 + π + δ (roughly opposite the
    signal); each further one is the unused candidate closest to the signal
    angle π/4.  Ties break toward the smaller angle (argmin semantics).
    """
    cand = _candidate_noise_angles(delta)
    signal_angle = math.pi / 4

    def circ_dist(a, b):
        return np.abs((a - b + math.pi) % _TWO_PI - math.pi)

    chosen: list[float] = []
    unused = list(range(len(cand)))
    first = int(np.argmin(circ_dist(cand, signal_angle + math.pi + delta)))
    chosen.append(float(cand[first]))
    unused.remove(first)
    while len(chosen) < d:
        dists = circ_dist(cand[unused], signal_angle)
        pick = unused[int(np.argmin(dists))]
        chosen.append(float(cand[pick]))
        unused.remove(pick)
    return chosen


def scaling_scenario(m: int, scaling: str = "minimal", periods: int = 3,
                     radius: float = 10 * math.pi) -> Scenario:
    """Crowded-noise circle for the entangled-versus-product comparison.

    n sensors sit on a circle of radius 10π with the base edge horizontal.
    The signal arrives from angle π/4; noise directions are drawn from 19
    candidates in [3π/4+δ, 7π/4+δ] (δ = π/20) and added until their rank on
    the sensor positions reaches m−1, so that a DFS needs m sensors.

    scaling: "minimal" (n = 2⌈m/2⌉), "linear" (4⌈m/2⌉), or
             "quadratic" (4⌈m/2⌉²).
    """
    half = (m + 1) // 2
    if scaling == "minimal":
        n = 2 * half
    elif scaling == "linear":
        n = 4 * half
    elif scaling == "quadratic":
        n = 4 * half * half
    else:
        raise ValueError(f"unknown scaling {scaling!r}")
    sensors = SensorArray(_circle_positions(n, radius, base_horizontal=True))
    s = math.cos(math.pi / 4)
    signal = PlaneWave(1.0, (s, s), 0.0)

    X = sensors.as_array()
    target_rank = m - 1
    angles: list[float] = []
    for d in range(1, 20):
        angles = _select_noise_angles(d)
        rows = np.array([np.exp(1j * (X @ np.array([math.cos(a), math.sin(a)])))
                         for a in angles])
        # dimension of the real span of the phasor rows on the sensor positions
        real_rows = np.hstack([rows.real, rows.imag])
        rank = np.linalg.matrix_rank(real_rows, tol=1e-9 * max(1.0, abs(rows).max()))
        if rank >= target_rank:
            break
    if target_rank == 0:
        angles = []
    noises = tuple(PlaneWave(1.0, (math.cos(a), math.sin(a)), 0.0)
                   for a in angles)
    return Scenario(sensors, signal, noises, periods)
