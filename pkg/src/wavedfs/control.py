"""
wavedfs.control — control sequences, Fourier transforms, couplings.

A control sequence assigns each sensor a modulation C_i(t) ∈ [−1, 1] on the
window [−T/2, T/2].  The coupling strength of the basis label z to a
monochromatic probe is

    g_z = Σ_i z_i ∫_{−T/2}^{T/2} f(x_i, t) C_i(t) dt
        = Re( Σ_i z_i c_i · 𝔉(C_i)(ω) )

with c_i = phasor_at(probe, x_i) and 𝔉(C)(ω) = ∫ e^{−iωt} C(t) dt.  Closed
forms are used whenever both factors are monochromatic over whole periods;
everything is cross-checked against adaptive trapezoid quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.integrate import simpson

from .wavefield import SensorArray, SignString, eval_field, phasor_at

__all__ = [
    "Sinusoid",
    "Rect",
    "Constant",
    "Sampled",
    "ControlSequence",
    "CouplingValue",
    "rect_wave",
    "fourier_transform",
    "coupling_strength",
    "coupling_quadrature",
    "scalar_product",
    "lockin_sequence",
    "wave_lock_sequence",
    "coupling_spectrum",
]

_TWO_PI = 2.0 * math.pi


def _sinc(x: float) -> float:
    """sin(x)/x with sinc(0) = 1 by continuity."""
    return 1.0 if x == 0.0 else math.sin(x) / x


@dataclass(frozen=True)
class Sinusoid:
    """Fast control C(t) = A cos(ωt + ϕ), A ∈ [0, 1]."""

    amplitude: float
    phase: float
    omega: float

    def __post_init__(self):
        if not -1e-12 <= self.amplitude <= 1.0 + 1e-12:
            raise ValueError(f"amplitude must lie in [0, 1], got {self.amplitude}")
        object.__setattr__(self, "amplitude", float(np.clip(self.amplitude, 0.0, 1.0)))

    def __call__(self, t):
        return self.amplitude * np.cos(self.omega * t + self.phase)


@dataclass(frozen=True)
class Rect:
    """Slow control C(t) = Π_γ(ωt + ϕ) ∈ {−1, +1}."""

    gamma: float
    phase: float
    omega: float

    def __post_init__(self):
        if not 0.0 <= self.gamma <= math.pi:
            raise ValueError(f"gamma must lie in [0, π], got {self.gamma}")

    def __call__(self, t):
        return rect_wave(self.gamma, self.omega * np.asarray(t) + self.phase)

    def flip_times(self, T: float) -> np.ndarray:
        """All sign-change times of Π_γ(ωt + ϕ) inside (−T/2, T/2)."""
        flips = []
        for s in (self.gamma, -self.gamma):
            # ωt + ϕ = s + 2πm  →  t = (s − ϕ + 2πm)/ω
            t0 = (s - self.phase) / self.omega
            period = _TWO_PI / self.omega
            m_lo = math.ceil((-T / 2 - t0) / period)
            m_hi = math.floor((T / 2 - t0) / period)
            flips.extend(t0 + m * period for m in range(m_lo, m_hi + 1))
        return np.array(sorted(t for t in flips if -T / 2 < t < T / 2))


@dataclass(frozen=True)
class Constant:
    """Constant control with value in {−1, 0, +1}."""

    value: int

    def __post_init__(self):
        if self.value not in (-1, 0, 1):
            raise ValueError(f"value must be −1, 0 or +1, got {self.value}")

    def __call__(self, t):
        return np.full_like(np.asarray(t, dtype=float), float(self.value))


@dataclass(frozen=True)
class Sampled:
    """Generic control sampled on a uniform grid over [−T/2, T/2]."""

    values: tuple
    T: float

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise ValueError("need at least two samples")
        if max(abs(v) for v in vals) > 1.0 + 1e-12:
            raise ValueError("samples must lie in [−1, 1]")
        object.__setattr__(self, "values", vals)

    def grid(self) -> np.ndarray:
        return np.linspace(-self.T / 2, self.T / 2, len(self.values))

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=float), self.grid(),
                         np.asarray(self.values))


@dataclass(frozen=True)
class ControlSequence:
    """Per-sensor control shapes over a common window [−T/2, T/2]."""

    per_sensor: tuple
    T: float

    def __post_init__(self):
        object.__setattr__(self, "per_sensor", tuple(self.per_sensor))
        if not self.T > 0:
            raise ValueError("T must be positive")
        omegas = {s.omega for s in self.per_sensor
                  if isinstance(s, (Sinusoid, Rect))}
        if len(omegas) > 1:
            raise ValueError("Sinusoid/Rect shapes must share ω")

    @property
    def n(self) -> int:
        return len(self.per_sensor)


@dataclass(frozen=True)
class CouplingValue:
    """Coupling strength g_z (units of time)."""

    g: float

    def __post_init__(self):
        if not math.isfinite(self.g):
            raise ValueError("coupling must be finite")

    def __float__(self) -> float:
        return self.g


def rect_wave(gamma: float, t) -> np.ndarray:
    """Rectangular wave Π_γ(t): +1 iff −γ < t + 2πZ < γ, else −1."""
    if not 0.0 <= gamma <= math.pi:
        raise ValueError(f"gamma must lie in [0, π], got {gamma}")
    wrapped = np.mod(np.asarray(t, dtype=float) + math.pi, _TWO_PI) - math.pi
    out = np.where(np.abs(wrapped) < gamma, 1.0, -1.0)
    return out if out.ndim else float(out)


def fourier_transform(shape, T: float, omega_query: float) -> complex:
    """Windowed Fourier transform 𝔉(C)(ω_q) = ∫_{−T/2}^{T/2} e^{−iω_q t} C(t) dt."""
    if not T > 0:
        raise ValueError("T must be positive")
    wq = float(omega_query)
    if isinstance(shape, Constant):
        return complex(shape.value * T * _sinc(wq * T / 2))
    if isinstance(shape, Sinusoid):
        A, ph, w = shape.amplitude, shape.phase, shape.omega
        return (A * T / 2) * (np.exp(1j * ph) * _sinc((w - wq) * T / 2)
                              + np.exp(-1j * ph) * _sinc((w + wq) * T / 2))
    if isinstance(shape, Rect):
        # exact piecewise integration between analytic flip times
        knots = np.concatenate(([-T / 2], shape.flip_times(T), [T / 2]))
        total = 0.0 + 0.0j
        for a, b in zip(knots[:-1], knots[1:]):
            sign = float(shape(0.5 * (a + b)))
            if wq == 0.0:
                total += sign * (b - a)
            else:
                total += sign * (np.exp(-1j * wq * a) - np.exp(-1j * wq * b)) / (1j * wq)
        return complex(total)
    if isinstance(shape, Sampled):
        t = shape.grid()
        return complex(np.trapezoid(np.exp(-1j * wq * t) * shape(t), t))
    raise TypeError(f"unsupported control shape {type(shape).__name__}")


def per_sensor_couplings(control: ControlSequence, sensors: SensorArray,
                         probe) -> np.ndarray:
    """Single-sensor couplings γ_i = Re(c_i 𝔉(C_i)(ω)), so g_z = Σ z_i γ_i."""
    if control.n != sensors.n:
        raise ValueError("control/sensor count mismatch")
    ftv = np.array([fourier_transform(s, control.T, probe.omega)
                    for s in control.per_sensor])
    c = np.array([phasor_at(probe, x) for x in sensors.positions])
    return np.real(c * ftv)


def coupling_strength(z: SignString, control: ControlSequence,
                      sensors: SensorArray, probe) -> CouplingValue:
    """Coupling g_z = Σ_i z_i ∫ f(x_i, t) C_i(t) dt (closed form)."""
    gamma = per_sensor_couplings(control, sensors, probe)
    return CouplingValue(float(z.as_array() @ gamma))


def _quadrature(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                breakpoints: Iterable[float] = (), periods: float = 1.0,
                rtol: float = 1e-10) -> float:
    """Adaptive composite trapezoid with breakpoint-aligned grids.

    Starts at 256 samples per period, doubling until two successive results
    agree to `rtol` relative (cap 2^14 per period).  Breakpoints (e.g. Rect
    flip times) are inserted as grid nodes to avoid O(h) jump error.
    """
    knots = np.unique(np.concatenate(([a, b], np.asarray(list(breakpoints)))))
    knots = knots[(knots >= a) & (knots <= b)]
    per_period = 256
    prev = None
    while True:
        npts = max(int(per_period * periods), 64)
        total = 0.0
        for lo, hi in zip(knots[:-1], knots[1:]):
            k = max(int(math.ceil(npts * (hi - lo) / (b - a))), 2)
            k += k % 2  # Simpson needs an even interval count
            t = np.linspace(lo, hi, k + 1)
            # sample the endpoints one-sidedly: knots sit on jumps of the
            # integrand, where the node value would be ambiguous
            te = t.copy()
            nudge = 1e-9 * (hi - lo)
            te[0] += nudge
            te[-1] -= nudge
            total += float(simpson(f(te), x=t))
        if prev is not None:
            if abs(total - prev) <= rtol * max(abs(total), 1e-300):
                return total
            if per_period >= 2 ** 14:
                return total
        prev = total
        per_period *= 2
    # unreachable


def coupling_quadrature(z: SignString, control: ControlSequence,
                        sensors: SensorArray, probe,
                        rtol: float = 1e-10) -> float:
    """Quadrature oracle for coupling_strength (direct time integral)."""
    if control.n != sensors.n:
        raise ValueError("control/sensor count mismatch")
    T = control.T
    breaks: list[float] = []
    for s in control.per_sensor:
        if isinstance(s, Rect):
            breaks.extend(s.flip_times(T))

    zz = z.as_array()
    pos = sensors.positions
    shapes = control.per_sensor

    def integrand(t):
        acc = np.zeros_like(t)
        for i in range(sensors.n):
            c = phasor_at(probe, pos[i])
            fvals = np.real(c * np.exp(-1j * probe.omega * t))
            acc = acc + zz[i] * fvals * np.asarray(shapes[i](t), dtype=float)
        return acc

    periods = T * probe.omega / _TWO_PI
    return _quadrature(integrand, -T / 2, T / 2, breaks, max(periods, 1.0), rtol)


def scalar_product(row_x, row_y, z: SignString, T: float,
                   omega: float | None = None) -> float:
    """Weighted scalar product ⟨x, y⟩ = Σ_i z_i ∫ x_i(t) y_i(t) dt.

    Phasor rows (complex arrays, common ω, whole periods) use the fast path
    (T/2) Σ_i z_i Re(c^x_i conj(c^y_i)); Sampled rows fall back to trapezoid
    quadrature on their grids.
    """
    zz = z.as_array()
    if isinstance(row_x, np.ndarray) and isinstance(row_y, np.ndarray):
        return float((T / 2) * np.sum(zz * np.real(row_x * np.conj(row_y))))
    # sampled fallback: rows are sequences of per-sensor callables
    t = np.linspace(-T / 2, T / 2, 4097)
    total = 0.0
    for i, (fx, fy) in enumerate(zip(row_x, row_y)):
        total += zz[i] * float(np.trapezoid(np.asarray(fx(t)) * np.asarray(fy(t)), t))
    return total


def lockin_sequence(omega: float, T: float, n: int) -> ControlSequence:
    """Standard lock-in: every sensor gets C(t) = Π_{π/2}(ωt − π/2) = sign(sin ωt)."""
    periods = T * omega / _TWO_PI
    if abs(periods - round(periods)) > 1e-9 or round(periods) < 1:
        raise ValueError("T must be a whole number of periods")
    shape = Rect(math.pi / 2, -math.pi / 2, omega)
    return ControlSequence((shape,) * n, T)


def wave_lock_sequence(signal, sensors: SensorArray, T: float) -> ControlSequence:
    """Position-compensated lock-in: sensor i flips in phase with the local signal.

    Sensor i gets Π_{π/2}(ωt − k·x_i − π/2), rectifying its local plane-wave
    signal so that the all-ones coupling grows linearly in n.
    """
    omega = signal.omega
    periods = T * omega / _TWO_PI
    if abs(periods - round(periods)) > 1e-9 or round(periods) < 1:
        raise ValueError("T must be a whole number of periods")
    shapes = []
    for x in sensors.positions:
        kx = float(np.dot(signal.kvec, x))
        shapes.append(Rect(math.pi / 2, (-kx - math.pi / 2) % _TWO_PI, omega))
    return ControlSequence(tuple(shapes), T)


def coupling_spectrum(z: SignString, control: ControlSequence,
                      sensors: SensorArray, probe_family: Callable,
                      grid: Sequence[float]) -> list:
    """Squared coupling g² over a probe family (direction angle, frequency, …)."""
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be non-empty")
    out = []
    for p in grid:
        g = coupling_strength(z, control, sensors, probe_family(p)).g
        out.append((float(p), g * g))
    return out
