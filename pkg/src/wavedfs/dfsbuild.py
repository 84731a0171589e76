"""
wavedfs.dfsbuild — DFS construction, placement, enumeration, approximate DFS.

The three-step construction: build the field matrix, orthogonalize the signal
row against the noise rows under the z-weighted scalar product, and read the
fast control A_i cos(ωt + ϕ_i) off the normalized orthogonal signal component
s_⊥.  The slow (±1) control Π_{arcsin A_i}(ωt + ϕ_i) shares the fundamental
Fourier component up to the universal factor 4/π.

The z weight is absorbed into the rows (orthogonalize z⊙row under the plain
positive-definite product); decoupling is equivalent —
⟨s_⊥, row_j⟩_z = ⟨s_⊥, z⊙row_j⟩ = 0 — and the plain product keeps the
Gram–Schmidt recursion numerically well behaved for any sign string.
Crucially the projection is REAL-linear over the phasor rows: a known-phase
noise row spans only one real direction, not a complex line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .wavefield import (FieldMatrix, PlaneWave, SensorArray, SignString,
                        phasor_at)
from .control import (ControlSequence, Rect, Sinusoid, coupling_strength,
                      per_sensor_couplings, scalar_product)
from .scenarios import NOISY_ARC, Scenario

__all__ = [
    "DegenerateSignal",
    "OrthogonalizationResult",
    "DfsPlan",
    "DfsPartition",
    "ApproxDfs",
    "SnrResult",
    "orthogonalize",
    "fast_control_phasors",
    "build_dfs_plan",
    "stack_field_matrix",
    "placement",
    "enumerate_affine_dfs",
    "approx_dfs",
    "snr",
]

_TWO_PI = 2.0 * math.pi

#: Post-projection norm below this fraction of the original row norm counts
#: as linear dependence.
DROP_TOL = 1e-10


class DegenerateSignal(ValueError):
    """Signal is linearly dependent on the noise at the sensor positions.

    Use more sensors (n > d for known phases, n > 2d for unknown) or fall
    back to an approximate DFS.
    """


@dataclass(frozen=True)
class OrthogonalizationResult:
    """Outcome of the weighted Gram–Schmidt pass.

    ortho_rows    : orthonormalized (z-absorbed) noise rows actually kept
    s_perp        : residual of the signal row, z-absorbed coordinates —
                    usable directly as the per-sensor control phasors
    residual_norm : √⟨s_⊥, s_⊥⟩
    """

    ortho_rows: np.ndarray
    s_perp: np.ndarray
    residual_norm: float


@dataclass(frozen=True)
class DfsPlan:
    """Control pair protecting {z, −z} from every noise row.

    fast/slow             : the two control sequences
    amplitudes, phases    : the harmonic-addition form A_i cos(ωt + ϕ_i)
    signal_coupling_fast/slow : couplings of z to the signal wave
    """

    fast: ControlSequence
    slow: ControlSequence
    z: SignString
    amplitudes: np.ndarray
    phases: np.ndarray
    signal_coupling_fast: float
    signal_coupling_slow: float

    def to_json_dict(self) -> dict:
        return {
            "z": list(self.z.z),
            "amplitudes": [float(a) for a in self.amplitudes],
            "phases": [float(p) for p in self.phases],
            "gammas": [float(s.gamma) for s in self.slow.per_sensor],
            "signal_coupling_fast": self.signal_coupling_fast,
            "signal_coupling_slow": self.signal_coupling_slow,
            "T": self.fast.T,
        }


@dataclass(frozen=True)
class DfsPartition:
    """Partition of all 2^n sign strings into affine DFS classes.

    classes maps the rounded κ-vector (tuple of ints, units of kappa_tol) to
    the list of member SignStrings.
    """

    classes: dict
    kappa_tol: float

    def class_of(self, z: SignString):
        for key, members in self.classes.items():
            if z in members:
                return key, members
        raise KeyError(f"{z} not found in partition")

    def sizes(self) -> dict:
        return {key: len(members) for key, members in self.classes.items()}


@dataclass(frozen=True)
class ApproxDfs:
    """Sign strings whose every noise coupling is below ε."""

    epsilon: float
    members: tuple


@dataclass(frozen=True)
class SnrResult:
    """Signal-to-noise ratio g²(signal) / max_grid g²(noise direction)."""

    value: float
    signal_g2: float
    max_noise_g2: float
    degenerate: bool = False


def orthogonalize(F: FieldMatrix, z: SignString, T: Optional[float] = None,
                  drop_tol: float = DROP_TOL) -> OrthogonalizationResult:
    """Modified Gram–Schmidt of the signal row against the noise rows.

    Projections are real-linear over the phasor rows under the z-weighted
    scalar product (z absorbed into the rows, see module docstring).  Noise
    rows whose residual falls below drop_tol × their original norm are
    dropped as linearly dependent.
    """
    T = F.T if T is None else T
    zz = z.as_array()
    ones = SignString.ones(F.n)

    def ip(a, b):
        return scalar_product(a, b, ones, T)

    kept = []
    for row in F.noise_rows:
        v = (zz * row).astype(complex)
        orig = math.sqrt(ip(v, v))
        for b in kept:
            v = v - ip(v, b) * b
        nv = math.sqrt(max(ip(v, v), 0.0))
        if orig > 0 and nv > drop_tol * orig:
            kept.append(v / nv)

    s = (zz * F.signal_row).astype(complex)
    for _ in range(2):  # re-orthogonalize once for extra accuracy
        for b in kept:
            s = s - ip(s, b) * b
    res = math.sqrt(max(ip(s, s), 0.0))
    ortho = np.array(kept) if kept else np.zeros((0, F.n), dtype=complex)
    return OrthogonalizationResult(ortho, s, res)


def fast_control_phasors(F: FieldMatrix, z: SignString,
                         drop_tol: float = DROP_TOL) -> np.ndarray:
    """Max-normalized orthogonal signal component as per-sensor phasors u_i.

    The fast control is C_i(t) = Re(u_i e^{−iωt}) = |u_i| cos(ωt − arg u_i);
    amplitudes are |u_i| with max 1, phases ϕ_i = −arg u_i.
    """
    ortho = orthogonalize(F, z, drop_tol=drop_tol)
    sig_norm = math.sqrt(max(scalar_product(F.signal_row, F.signal_row,
                                            SignString.ones(F.n), F.T), 0.0))
    if ortho.residual_norm <= drop_tol * max(sig_norm, 1.0):
        raise DegenerateSignal(
            "signal is linearly dependent on the noise at the sensor "
            f"positions (residual {ortho.residual_norm:.3e}); add sensors "
            "(n > d known phases, n > 2d unknown) or use approx_dfs")
    return ortho.s_perp / np.abs(ortho.s_perp).max()


def build_dfs_plan(scenario: Scenario, z: Optional[SignString] = None,
                   mode: str = "known_phases",
                   drop_tol: float = DROP_TOL) -> DfsPlan:
    """Result-1 construction: field matrix → orthogonalize → controls.

    Fast control: C_i = A_i cos(ωt + ϕ_i) from the max-normalized orthogonal
    signal component.  Slow control: Π_{arcsin A_i}(ωt + ϕ_i), which shares
    the fundamental with the fast control up to the universal 4/π and hence
    decouples the same noise rows at the carrier frequency (but not their
    harmonics).
    """
    z = z if z is not None else SignString.ones(scenario.n)
    F = scenario.field_matrix(mode, z)
    # harmonic addition: phasor c ↦ |c| cos(ωt − arg c)
    u = fast_control_phasors(F, z, drop_tol)
    amps = np.abs(u)
    phases = np.where(amps > 0, -np.angle(u), 0.0)
    omega = scenario.omega
    fast = ControlSequence(tuple(Sinusoid(a, p, omega)
                                 for a, p in zip(amps, phases)), scenario.T)
    slow = ControlSequence(tuple(Rect(math.asin(min(a, 1.0)), p, omega)
                                 for a, p in zip(amps, phases)), scenario.T)
    g_fast = coupling_strength(z, fast, scenario.sensors, scenario.signal).g
    g_slow = coupling_strength(z, slow, scenario.sensors, scenario.signal).g
    return DfsPlan(fast, slow, z, amps, phases, g_fast, g_slow)


def stack_field_matrix(scenario: Scenario, states: Sequence[SignString],
                       mode: str = "known_phases") -> FieldMatrix:
    """Global field matrix protecting several sign strings at once.

    Stacks the z^l-weighted noise rows for every protected state, then the
    unweighted signal row; orthogonalization of the result under the plain
    (all-ones) scalar product decouples every |z^l⟩ from every noise row.
    """
    states = list(states)
    seen = set()
    for s in states:
        if s.z in seen:
            raise ValueError("protected states must be distinct")
        seen.add(s.z)
    F = scenario.field_matrix(mode)
    rows, roles = [], []
    for s in states:
        zz = s.as_array()
        for row in F.noise_rows:
            rows.append(zz * row)
            roles.append("noise")
    rows.append(F.signal_row)
    roles.append("signal")
    return FieldMatrix(np.array(rows), tuple(roles), F.T, F.omega)


def placement(noise_waves: Sequence[PlaneWave], x0) -> SensorArray:
    """Sensor-placement construction: 2^d positions cancelling d noise waves.

    Starting from x0, each wave doubles the current set, shifting the copy by
    half a wavelength along k̂_j (shift π k_j/|k_j|², spatial phase offset π)
    so paired sensors see opposite field values.  With z = all-ones and any
    control applied identically to all sensors, each noise coupling vanishes
    for every phase φ and all t.
    """
    if not noise_waves:
        raise ValueError("need at least one noise wave")
    positions = [np.asarray(x0, dtype=float)]
    for w in noise_waves:
        k = np.asarray(w.kvec, dtype=float)
        k2 = float(k @ k)
        if k2 == 0.0:
            raise ValueError("noise wave vector must be nonzero")
        shift = math.pi * k / k2
        positions = positions + [p + shift for p in positions]
    return SensorArray(tuple(tuple(p) for p in positions))


def _all_sign_strings(n: int) -> np.ndarray:
    bits = ((np.arange(2 ** n)[:, None] >> np.arange(n)[::-1]) & 1)
    return 1.0 - 2.0 * bits  # bit 0 → +1, bit 1 → −1


def enumerate_affine_dfs(scenario: Scenario, control: ControlSequence,
                         kappa_tol: Optional[float] = None,
                         n_max: int = 20) -> DfsPartition:
    """Group all 2^n sign strings by their noise-coupling vector κ(z).

    κ(z) = Γ z with Γ_{ji} the single-sensor coupling of noise j at sensor i;
    one matmul covers the whole cube, and g_{−z} = −g_z pairs classes κ/−κ.
    """
    n = scenario.n
    if n > n_max:
        raise ValueError(f"n = {n} above enumeration cap {n_max}")
    Gamma = np.array([per_sensor_couplings(control, scenario.sensors, w)
                      for w in scenario.noises])  # (d, n)
    if kappa_tol is None:
        # anchor the tolerance to the attainable single-sensor coupling
        # magnitude (unit-amplitude phasors), not to the post-control Γ,
        # which is pure roundoff when the control decouples perfectly
        from .control import fourier_transform
        scale = max((abs(fourier_transform(s, control.T, w.omega))
                     for s in control.per_sensor for w in scenario.noises),
                    default=1.0)
        kappa_tol = 1e-8 * max(scale, 1e-300)
    Z = _all_sign_strings(n)
    kappas = Z @ Gamma.T if Gamma.size else np.zeros((2 ** n, 0))
    keys = np.round(kappas / kappa_tol).astype(np.int64)
    classes: dict = {}
    for row, key in zip(Z, keys):
        classes.setdefault(tuple(int(k) for k in key), []).append(
            SignString(tuple(int(v) for v in row)))
    return DfsPartition(classes, kappa_tol)


def approx_dfs(scenario: Scenario, control: ControlSequence,
               epsilon: float, n_max: int = 20) -> ApproxDfs:
    """Sign strings with every noise coupling below ε (ε-approximate DFS)."""
    n = scenario.n
    if n > n_max:
        raise ValueError(f"n = {n} above enumeration cap {n_max}")
    Gamma = np.array([per_sensor_couplings(control, scenario.sensors, w)
                      for w in scenario.noises])
    Z = _all_sign_strings(n)
    kappas = Z @ Gamma.T if Gamma.size else np.zeros((2 ** n, 0))
    ok = (np.abs(kappas) < epsilon).all(axis=1) if kappas.size else \
        np.ones(2 ** n, dtype=bool)
    members = tuple(SignString(tuple(int(v) for v in row))
                    for row in Z[ok])
    return ApproxDfs(epsilon, members)


def snr(scenario: Scenario, control: ControlSequence, z: SignString,
        noise_region: tuple = NOISY_ARC, grid: int = 1024) -> SnrResult:
    """SNR = g²(signal direction) / worst-case g²(α) over the noisy arc.

    Probes are unit-|k| plane waves at φ = 0 with direction angle α swept
    over noise_region on `grid` points.
    """
    if grid < 1:
        raise ValueError("grid must be non-empty")
    omega = scenario.omega
    g_sig = coupling_strength(z, control, scenario.sensors, scenario.signal).g
    alphas = np.linspace(noise_region[0], noise_region[1], grid)
    worst = 0.0
    for a in alphas:
        probe = PlaneWave(omega, (math.cos(a), math.sin(a)), 0.0)
        g = coupling_strength(z, control, scenario.sensors, probe).g
        worst = max(worst, g * g)
    sig2 = g_sig * g_sig
    if worst == 0.0:
        return SnrResult(math.inf, sig2, 0.0, degenerate=(sig2 == 0.0))
    return SnrResult(sig2 / worst, sig2, worst)
