"""
wavedfs.wavefield — waves, sensors, phasors, and field matrices.

A monochromatic field is represented by its complex spatial profile f(x)
against the carrier e^{−iωt}:

    f(x, t) = Re( f(x) · e^{−iωt} )

For a plane wave cos(k·x − ωt + φ) the profile is e^{i(k·x+φ)}, so that time
integrals over whole periods reduce to phasor inner products (see
wavedfs.control.scalar_product).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "PlaneWave",
    "MonochromaticField",
    "SensorArray",
    "SignString",
    "FieldMatrix",
    "eval_field",
    "phasor_at",
    "build_field_matrix",
    "check_point_symmetry",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PlaneWave:
    """Plane wave cos(k·x − ωt + φ).

    omega : angular frequency (rad per unit time, > 0)
    kvec  : wave vector (2- or 3-component)
    phi   : phase offset, normalized to [0, 2π)
    phase_known : whether φ is known to the experimenter
    """

    omega: float
    kvec: tuple
    phi: float = 0.0
    phase_known: bool = True

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        object.__setattr__(self, "kvec", tuple(float(k) for k in self.kvec))
        object.__setattr__(self, "phi", float(self.phi) % _TWO_PI)

    def profile(self, x) -> complex:
        """Spatial phasor e^{i(k·x+φ)}."""
        kx = float(np.dot(self.kvec, x))
        return complex(np.exp(1j * (kx + self.phi)))


@dataclass(frozen=True)
class MonochromaticField:
    """General monochromatic field f(x,t) = Re( profile(x) e^{−iωt} ).

    The profile carries both local amplitude and local phase:
    profile(x) = |f(x)| e^{iφ(x)}.  Amplitudes β_j of the physical coupling
    live in the metrology layer, not here.
    """

    omega: float
    profile: Callable[[object], complex]
    phase_known: bool = True

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")


@dataclass(frozen=True)
class SensorArray:
    """Ordered sensor positions x_1..x_n (duplicates allowed)."""

    positions: tuple

    def __post_init__(self):
        pos = tuple(tuple(float(c) for c in p) for p in self.positions)
        if len(pos) < 1:
            raise ValueError("SensorArray needs at least one sensor")
        object.__setattr__(self, "positions", pos)

    @property
    def n(self) -> int:
        return len(self.positions)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.positions, dtype=float)


@dataclass(frozen=True)
class SignString:
    """Computational-basis label z ∈ {−1, +1}^n."""

    z: tuple

    def __post_init__(self):
        zz = tuple(int(v) for v in self.z)
        if any(v not in (-1, 1) for v in zz):
            raise ValueError(f"entries must be ±1, got {zz}")
        object.__setattr__(self, "z", zz)

    def __len__(self) -> int:
        return len(self.z)

    def __neg__(self) -> "SignString":
        return SignString(tuple(-v for v in self.z))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.z, dtype=float)

    @staticmethod
    def ones(n: int) -> "SignString":
        return SignString((1,) * n)


@dataclass(frozen=True)
class FieldMatrix:
    """Rows of per-sensor local signals used for orthogonalization.

    rows      : (r, n) complex array; row j holds phasors c_{ji} meaning the
                local signal Re(c_{ji} e^{−iωt}) at sensor i
    row_roles : length-r tuple of "noise" / "signal"; exactly one signal row,
                and it is the last row
    T         : total duration (positive whole number of periods 2π/ω)
    omega     : common carrier frequency
    """

    rows: np.ndarray
    row_roles: tuple
    T: float
    omega: float

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=complex))
        object.__setattr__(self, "rows", rows)
        roles = tuple(self.row_roles)
        if roles.count("signal") != 1 or roles[-1] != "signal":
            raise ValueError("exactly one signal row required, in last position")
        if len(roles) != rows.shape[0]:
            raise ValueError("row_roles length must match row count")
        periods = self.T * self.omega / _TWO_PI
        if not (self.T > 0 and abs(periods - round(periods)) < 1e-9):
            raise ValueError("T must be a positive whole number of periods")

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    @property
    def noise_rows(self) -> np.ndarray:
        return self.rows[:-1]

    @property
    def signal_row(self) -> np.ndarray:
        return self.rows[-1]


def eval_field(wave, x, t: float) -> float:
    """Field value f(x, t) = Re( profile(x) e^{−iωt} ).

    For a PlaneWave this equals cos(k·x − ωt + φ).
    """
    return float(np.real(phasor_at(wave, x) * np.exp(-1j * wave.omega * t)))


def phasor_at(wave, x) -> complex:
    """Complex phasor c with f(x, t) = Re(c e^{−iωt}) for all t."""
    return complex(wave.profile(x))


def build_field_matrix(waves: Sequence, sensors: SensorArray, T: float,
                       mode: str = "known_phases",
                       z: Optional[SignString] = None) -> FieldMatrix:
    """Assemble the field matrix F for the DFS construction.

    waves : sequence of (wave, role) pairs with role in {"noise", "signal"};
            exactly one signal wave, all waves sharing ω.
    mode  : "known_phases"    — one phasor row per wave;
            "unknown_phases"  — each noise wave contributes its cosine
                                component (phase set to 0) and the quadrature
                                component i·c, doubling the noise rows;
            "point_symmetric" — only the symmetric (cosine) component per
                                noise wave; requires the array to be point
                                symmetric for the intended sign string
                                (default all-ones).
    """
    waves = list(waves)
    signals = [w for w, role in waves if role == "signal"]
    noises = [w for w, role in waves if role == "noise"]
    if len(signals) != 1:
        raise ValueError(f"need exactly one signal wave, got {len(signals)}")
    if len(signals) + len(noises) != len(waves):
        raise ValueError("roles must be 'noise' or 'signal'")
    omega = signals[0].omega
    if any(abs(w.omega - omega) > 1e-12 for w in noises):
        raise ValueError("all waves must share the carrier frequency")

    if mode == "point_symmetric":
        zz = z if z is not None else SignString.ones(sensors.n)
        if check_point_symmetry(sensors, zz) is None:
            raise ValueError("sensor array is not point symmetric for z")

    def row_of(wave, strip_phase=False):
        c = np.array([phasor_at(wave, x) for x in sensors.positions])
        if strip_phase and isinstance(wave, PlaneWave):
            c = c * np.exp(-1j * wave.phi)
        return c

    rows, roles = [], []
    for w in noises:
        if mode == "known_phases":
            rows.append(row_of(w))
            roles.append("noise")
        elif mode == "unknown_phases":
            c = row_of(w, strip_phase=True)
            rows.append(c)
            roles.append("noise")
            rows.append(1j * c)
            roles.append("noise")
        elif mode == "point_symmetric":
            rows.append(row_of(w, strip_phase=True))
            roles.append("noise")
        else:
            raise ValueError(f"unknown mode {mode!r}")
    rows.append(row_of(signals[0]))
    roles.append("signal")
    return FieldMatrix(np.array(rows), tuple(roles), float(T), omega)


def check_point_symmetry(sensors: SensorArray, z: SignString):
    """Return the symmetry center if the array is point symmetric, else None.

    The array is point symmetric for z if there is a point p such that every
    sensor i has a partner i′ with x_i − p = −(x_{i′} − p) and z_i = z_{i′}.
    Only the centroid is tested — it is the unique candidate for a finite
    symmetric set.
    """
    X = sensors.as_array()
    if len(z) != sensors.n:
        raise ValueError("sign string length must match sensor count")
    center = X.mean(axis=0)
    rel = X - center
    diam = max(np.linalg.norm(rel, axis=1).max() * 2.0, 1.0)
    tol = 1e-9 * diam
    used = [False] * sensors.n
    for i in range(sensors.n):
        if used[i]:
            continue
        target = -rel[i]
        partner = None
        for j in range(sensors.n):
            if used[j] or j == i:
                continue
            if np.linalg.norm(rel[j] - target) < tol and z.z[i] == z.z[j]:
                partner = j
                break
        if partner is None:
            # a sensor sitting exactly at the center is its own partner
            if np.linalg.norm(rel[i]) < tol:
                used[i] = True
                continue
            return None
        used[i] = used[partner] = True
    return tuple(float(c) for c in center)
