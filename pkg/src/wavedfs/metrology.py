"""
wavedfs.metrology — Fisher information for entangled and product strategies.

The signal imprints the phase θ g_z on each basis label z; strong correlated
noise twirls the state into a mixture of blocks supported on single affine
DFS classes.  The quantum Fisher information of such a block-diagonal state
decomposes as F = 4 Σ_κ p_κ Var_κ(g), and the classical Fisher information
of product projective measurements is computed from the exact outcome
distribution with its analytic θ-derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .wavefield import SignString
from .control import ControlSequence, fourier_transform
from .wavefield import SensorArray, phasor_at

__all__ = [
    "Gaussian",
    "PointMass",
    "StrongNoise",
    "NoiseModel",
    "DiagonalStateMixture",
    "MeasurementConfig",
    "qfi_ghz",
    "dephasing_factor",
    "qfim_within_dfs",
    "qfi_product_plus",
    "ProductState",
    "twirl",
    "qfi_mixed_via_dfs",
    "cfi_product_measurement",
    "optimize_cfi",
]

_PHASE_GRID = 64  # points for the unknown-phase average (periodic trapezoid)


@dataclass(frozen=True)
class Gaussian:
    """Zero-mean Gaussian amplitude distribution with spread σ."""

    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")

    def characteristic(self, g: float) -> complex:
        return complex(math.exp(-0.5 * (self.sigma * g) ** 2))


@dataclass(frozen=True)
class PointMass:
    """Deterministic amplitude β."""

    beta: float

    def characteristic(self, g: float) -> complex:
        return complex(np.exp(-1j * self.beta * g))


@dataclass(frozen=True)
class StrongNoise:
    """Twirl limit: full dephasing unless the coupling vanishes."""

    def characteristic(self, g: float) -> complex:
        return complex(1.0 if g == 0.0 else 0.0)


@dataclass(frozen=True)
class NoiseModel:
    """Per-noise amplitude distributions (Gaussian / PointMass / StrongNoise)."""

    distributions: tuple

    def __post_init__(self):
        object.__setattr__(self, "distributions", tuple(self.distributions))


@dataclass(frozen=True)
class DiagonalStateMixture:
    """Mixture of pure states each supported on one DFS class.

    blocks: list of (p_κ, {SignString: complex amplitude}) with Σ p_κ = 1 and
    per-block amplitudes normalized.
    """

    blocks: tuple

    def __post_init__(self):
        blocks = tuple((float(p), dict(amps)) for p, amps in self.blocks)
        total = sum(p for p, _ in blocks)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"block probabilities sum to {total}, not 1")
        for p, amps in blocks:
            norm = sum(abs(c) ** 2 for c in amps.values())
            if abs(norm - 1.0) > 1e-9:
                raise ValueError("block amplitudes must be normalized")
        object.__setattr__(self, "blocks", blocks)


@dataclass(frozen=True)
class MeasurementConfig:
    """Per-qubit rank-1 projective measurement, Bloch angles (θ_i, φ_i)."""

    angles: tuple  # ((theta, phi), ...) with θ ∈ [0, π], φ ∈ [0, 2π)

    def __post_init__(self):
        ang = tuple((float(t) % (2 * math.pi), float(p) % (2 * math.pi))
                    for t, p in self.angles)
        object.__setattr__(self, "angles", ang)

    @property
    def n(self) -> int:
        return len(self.angles)


def qfi_ghz(g_signal: float, d: complex = 1.0) -> float:
    """QFI of a GHZ probe with signal coupling g and dephasing factor d."""
    if abs(d) > 1.0 + 1e-12:
        raise ValueError("|d| must not exceed 1")
    return 4.0 * g_signal ** 2 * abs(d) ** 2


def dephasing_factor(noise: NoiseModel, residual_couplings: Sequence) -> complex:
    """Dephasing factor d = Π_j E[e^{−i β_j g_j}].

    residual_couplings holds one entry per noise: a scalar g_j for a known
    phase, or a pair (g_cos, g_sin) of quadrature couplings for an unknown
    phase, in which case the noise-phase average runs over a 64-point
    periodic grid of g(φ) = g_cos cos φ − g_sin sin φ.
    """
    if len(noise.distributions) != len(residual_couplings):
        raise ValueError("one coupling (or quadrature pair) per noise required")
    d = 1.0 + 0.0j
    for dist, g in zip(noise.distributions, residual_couplings):
        if np.isscalar(g):
            d *= dist.characteristic(float(g))
        else:
            gc, gs = g
            phis = np.linspace(0.0, 2 * math.pi, _PHASE_GRID, endpoint=False)
            vals = [dist.characteristic(gc * math.cos(p) - gs * math.sin(p))
                    for p in phis]
            d *= sum(vals) / len(vals)
    return complex(d)


def qfim_within_dfs(amplitudes: dict, couplings: Sequence[Callable]) -> np.ndarray:
    """QFI matrix of a pure state inside one DFS class.

    F_{ww′} = 4 ( E[g_w g_{w′}] − E[g_w] E[g_{w′}] ) with expectations over
    |c_z|².  couplings is one function z → g per signal parameter.
    """
    probs = {z: abs(c) ** 2 for z, c in amplitudes.items()}
    norm = sum(probs.values())
    if abs(norm - 1.0) > 1e-9:
        raise ValueError("amplitudes must be normalized")
    ds = len(couplings)
    means = np.array([sum(p * cp(z) for z, p in probs.items())
                      for cp in couplings])
    F = np.empty((ds, ds))
    for a in range(ds):
        for b in range(a, ds):
            second = sum(p * couplings[a](z) * couplings[b](z)
                         for z, p in probs.items())
            F[a, b] = F[b, a] = 4.0 * (second - means[a] * means[b])
    return F


def qfi_product_plus(control: ControlSequence, sensors: SensorArray,
                     probe) -> float:
    """QFI of the product probe |+⟩^{⊗n}: 4 Σ_i Re(c_i 𝔉(C_i)(ω))²."""
    total = 0.0
    for shape, x in zip(control.per_sensor, sensors.positions):
        gi = float(np.real(phasor_at(probe, x)
                           * fourier_transform(shape, control.T, probe.omega)))
        total += gi * gi
    return 4.0 * total


@dataclass(frozen=True)
class ProductState:
    """Product state with per-qubit amplitudes ⟨±1|ψ_i⟩ = (a_plus, a_minus)."""

    qubit_amps: tuple

    def __post_init__(self):
        amps = tuple((complex(a), complex(b)) for a, b in self.qubit_amps)
        for a, b in amps:
            if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-9:
                raise ValueError("qubit amplitudes must be normalized")
        object.__setattr__(self, "qubit_amps", amps)

    @property
    def n(self) -> int:
        return len(self.qubit_amps)

    def amplitude(self, z: SignString) -> complex:
        out = 1.0 + 0.0j
        for (a, b), zi in zip(self.qubit_amps, z.z):
            out *= a if zi == 1 else b
        return out

    @staticmethod
    def plus(n: int) -> "ProductState":
        r = 1.0 / math.sqrt(2.0)
        return ProductState(((r, r),) * n)


def twirl(initial, partition) -> DiagonalStateMixture:
    """Strong-noise twirl: project onto the DFS classes of a partition.

    initial is a ProductState or a {SignString: amplitude} dict.  Blocks with
    p_κ below 1e-15 are dropped and the rest renormalized.
    """
    if isinstance(initial, ProductState):
        amp = initial.amplitude
    else:
        table = dict(initial)
        amp = lambda z: table.get(z, 0.0)
    blocks = []
    for key, members in partition.classes.items():
        amps = {z: amp(z) for z in members}
        p = sum(abs(c) ** 2 for c in amps.values())
        if p <= 1e-15:
            continue
        scale = 1.0 / math.sqrt(p)
        blocks.append((p, {z: c * scale for z, c in amps.items()}))
    total = sum(p for p, _ in blocks)
    blocks = [(p / total, amps) for p, amps in blocks]
    return DiagonalStateMixture(tuple(blocks))


def qfi_mixed_via_dfs(mixture: DiagonalStateMixture,
                      coupling: Callable) -> float:
    """QFI of a block-diagonal mixture: F = 4 Σ_κ p_κ Var_κ(g)."""
    total = 0.0
    for p, amps in mixture.blocks:
        probs = {z: abs(c) ** 2 for z, c in amps.items()}
        mean = sum(q * coupling(z) for z, q in probs.items())
        second = sum(q * coupling(z) ** 2 for z, q in probs.items())
        total += 4.0 * p * (second - mean * mean)
    return total


def _projector_amps(angles) -> list:
    """Per-qubit ⟨o|z⟩ tables: out[i][o][z-index], z-index 0 ↔ z=+1."""
    out = []
    for theta, phi in angles:
        ct, st = math.cos(theta / 2), math.sin(theta / 2)
        ephi = np.exp(-1j * phi)
        out.append(((ct + 0.0j, st * ephi),        # outcome 0
                    (st + 0.0j, -ct * ephi)))      # outcome 1
    return out


def _cfi_terms(mixture: DiagonalStateMixture, theta: float,
               coupling: Callable, config: MeasurementConfig):
    """Outcome probabilities p(o|θ) and analytic derivatives ∂_θ p."""
    n = config.n
    proj = _projector_amps(config.angles)
    n_out = 2 ** n
    p = np.zeros(n_out)
    dp = np.zeros(n_out)
    for pk, amps in mixture.blocks:
        psi = np.zeros(n_out, dtype=complex)
        dpsi = np.zeros(n_out, dtype=complex)
        for z, c in amps.items():
            g = coupling(z)
            coeff = c * np.exp(-1j * theta * g)
            vec = np.ones(1, dtype=complex)
            for i, zi in enumerate(z.z):
                zi_idx = 0 if zi == 1 else 1
                vec = np.kron(vec, np.array([proj[i][0][zi_idx],
                                             proj[i][1][zi_idx]]))
            psi += coeff * vec
            dpsi += coeff * (-1j * g) * vec
        p += pk * np.abs(psi) ** 2
        dp += pk * 2.0 * np.real(np.conj(psi) * dpsi)
    return p, dp


def cfi_product_measurement(mixture: DiagonalStateMixture, theta: float,
                            coupling: Callable,
                            config: MeasurementConfig) -> float:
    """Classical Fisher information of a product projective measurement.

    p(o|θ) = Σ_κ p_κ |Σ_{z∈κ} c_z e^{−iθ g_z} Π_i ⟨o_i|z_i⟩|², with the
    analytic derivative; outcomes with p < 1e−14 are skipped.
    """
    if config.n > 14:
        raise ValueError("n > 14 exceeds the product-measurement cap")
    p, dp = _cfi_terms(mixture, theta, coupling, config)
    mask = p > 1e-14
    return float(np.sum(dp[mask] ** 2 / p[mask]))


def optimize_cfi(mixture: DiagonalStateMixture, coupling: Callable,
                 restarts: int = 16, budget: int = 2000,
                 theta: float = 0.0, seed: int = 0):
    """Best product-measurement CFI found by seeded multistart Nelder–Mead.

    The reported value is a lower bound on the separable-measurement optimum.
    The equatorial configuration (θ_i = π/2, φ_i = 0) is always included as a
    deterministic start; doubling `restarts` can only improve the result.
    """
    n = len(next(iter(mixture.blocks[0][1])).z)
    rng = np.random.default_rng(seed)

    def objective(x):
        config = MeasurementConfig(tuple((x[2 * i], x[2 * i + 1])
                                         for i in range(n)))
        return -cfi_product_measurement(mixture, theta, coupling, config)

    starts = [np.array([math.pi / 2, 0.0] * n)]
    for _ in range(max(restarts - 1, 0)):
        starts.append(np.concatenate(
            [rng.uniform(0, math.pi, n)[:, None],
             rng.uniform(0, 2 * math.pi, n)[:, None]], axis=1).ravel())

    best_val, best_x = -math.inf, starts[0]
    for x0 in starts:
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxfev": budget, "xatol": 1e-8,
                                "fatol": 1e-12})
        if -res.fun > best_val:
            best_val, best_x = -res.fun, res.x
    config = MeasurementConfig(tuple((best_x[2 * i], best_x[2 * i + 1])
                                     for i in range(n)))
    return config, float(best_val)
