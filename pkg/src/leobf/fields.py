"""Plane-wave superposition, time-averaged Poynting vectors and enhancement bounds."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from leobf import kernels
from leobf.constants import FREE_SPACE_IMPEDANCE, TWO_PI
from leobf.errors import UnderResolvedError
from leobf.geometry import BeamAtPoint

DEFAULT_STEPS_PER_PERIOD = 256
MIN_STEPS_PER_PERIOD = 64


@dataclass(frozen=True)
class PlaneWave:
    beam: BeamAtPoint
    amplitude: float  # peak E at the receiver, V/m
    omega: float  # rad/s

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError("plane-wave amplitude must be > 0")
        if not self.omega > 0:
            raise ValueError("plane-wave angular frequency must be > 0")


@dataclass(frozen=True)
class PlaneWaveSet:
    """Waves superposed at one receiver.

    ``reference_amplitude`` is the equalized arrival amplitude sqrt(2) E0
    that defines the single-satellite reference.
    """

    waves: tuple
    reference_amplitude: float = math.sqrt(2.0)

    def __post_init__(self):
        object.__setattr__(self, "waves", tuple(self.waves))
        if not self.waves:
            raise ValueError("PlaneWaveSet needs at least one wave")
        if not self.reference_amplitude > 0:
            raise ValueError("reference_amplitude must be > 0")

    def __len__(self):
        return len(self.waves)

    @property
    def e_pol(self) -> np.ndarray:
        return np.array([w.beam.e_pol_unit for w in self.waves], dtype=float)

    @property
    def h_pol(self) -> np.ndarray:
        return np.array([w.beam.h_pol_unit for w in self.waves], dtype=float)

    @property
    def phases(self) -> np.ndarray:
        return np.array([w.beam.arrival_phase_rad for w in self.waves], dtype=float)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([w.amplitude for w in self.waves], dtype=float)

    @property
    def omegas(self) -> np.ndarray:
        return np.array([w.omega for w in self.waves], dtype=float)


@dataclass(frozen=True)
class PoyntingResult:
    s_avg: tuple  # W/m^2
    magnitude: float
    window_s: float
    integration_steps: int

    @property
    def vertical(self) -> float:
        """Downward (-z) component of the averaged flux."""
        return -self.s_avg[2]


def instantaneous_fields(waves: PlaneWaveSet, t: float):
    """E (V/m) and H (A/m) vectors at time ``t``."""
    a = waves.amplitudes * np.sin(waves.omegas * t + waves.phases)
    E = a @ waves.e_pol
    H = (a / FREE_SPACE_IMPEDANCE) @ waves.h_pol
    return E, H


def required_steps(window: float, max_frequency_hz: float,
                   steps_per_period: float = MIN_STEPS_PER_PERIOD) -> int:
    """Smallest node count giving ``steps_per_period`` per fastest carrier period."""
    # 1e-9 slack keeps exact multiples (e.g. one full period) from rounding up
    return max(1, math.ceil(steps_per_period * window * max_frequency_hz - 1e-9))


def resolve_quadrature(omegas, window: float | None, steps: int | None):
    """Fill in default window/steps and check the sampling precondition."""
    omegas = np.asarray(omegas, dtype=float)
    f_max = float(omegas.max()) / TWO_PI
    if window is None:
        if not np.all(omegas == omegas[0]):
            raise ValueError("an explicit window is required for multi-frequency beam sets")
        window = 1.0 / f_max
    if not window > 0:
        raise ValueError(f"window must be > 0, got {window}")
    if steps is None:
        steps = required_steps(window, f_max, DEFAULT_STEPS_PER_PERIOD)
    floor = required_steps(window, f_max, MIN_STEPS_PER_PERIOD)
    if steps < floor:
        raise UnderResolvedError(
            f"{steps} quadrature steps over {window:.6g} s; at least {floor} needed "
            f"({MIN_STEPS_PER_PERIOD} per carrier period)"
        )
    return window, int(steps)


def time_avg_poynting(waves: PlaneWaveSet, window: float | None = None,
                      steps: int | None = None, backend: str | None = None) -> PoyntingResult:
    """Average of E x H over [0, T] by the composite midpoint rule.

    The window defaults to one carrier period for equal-frequency sets, and
    ``steps`` to 256 nodes per carrier period.
    """
    window, steps = resolve_quadrature(waves.omegas, window, steps)
    s = kernels.poynting_average(
        waves.e_pol[None], waves.h_pol[None], waves.phases[None],
        waves.amplitudes, waves.omegas, window, steps, backend=backend,
    )[0]
    return PoyntingResult(
        s_avg=tuple(float(v) for v in s),
        magnitude=float(np.linalg.norm(s)),
        window_s=float(window),
        integration_steps=steps,
    )


def zenith_beam() -> BeamAtPoint:
    """A beam arriving straight down, polarized along +y."""
    return BeamAtPoint(
        propagation_unit=(0.0, 0.0, -1.0),
        path_length_m=1.0,
        e_pol_unit=(0.0, 1.0, 0.0),
        h_pol_unit=(1.0, 0.0, 0.0),
        arrival_phase_rad=0.0,
        incidence_theta_rad=0.0,
    )


def reference_poynting(omega: float, e0: float = 1.0, window: float | None = None,
                       steps: int | None = None, backend: str | None = None) -> PoyntingResult:
    """Single zenith satellite arriving with amplitude sqrt(2) E0 (the 0 dB reference)."""
    amp = math.sqrt(2.0) * e0
    ref = PlaneWaveSet((PlaneWave(zenith_beam(), amp, omega),), reference_amplitude=amp)
    return time_avg_poynting(ref, window, steps, backend=backend)


def enhancement_db(combined: PoyntingResult, single_ref: PoyntingResult,
                   projection: str = "magnitude") -> float:
    """Received-power enhancement of ``combined`` over ``single_ref`` in dB.

    ``projection`` selects ``"magnitude"`` (|S_av|, default) or ``"vertical"``
    (the downward component).
    """
    if projection == "magnitude":
        num, den = combined.magnitude, single_ref.magnitude
    elif projection == "vertical":
        num, den = combined.vertical, single_ref.vertical
    else:
        raise ValueError(f"unknown projection {projection!r}")
    if not den > 0:
        raise ZeroDivisionError("reference Poynting magnitude must be > 0")
    return 10.0 * math.log10(num / den)


def ratio_to_db(ratio: float) -> float:
    return 10.0 * math.log10(ratio)


def closed_form_parallel_max(n: int) -> int:
    """Peak enhancement of ``n`` co-polarized beams: n**2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * n


def closed_form_perpendicular_max(n: int) -> float:
    """Peak enhancement with half the satellites in each of two perpendicular orbits."""
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    return n * n / 2


def closed_form_intersecting_max(n: int, m: int, xi: float) -> float:
    """Peak enhancement when ``m`` of ``n`` satellites fly an orbit crossing the others at ``xi``.

    Returns n**2 - m n (1 - cos xi).
    """
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got n={n}, m={m}")
    if not 0.0 <= xi <= math.pi / 2:
        raise ValueError(f"xi must lie in [0, pi/2], got {xi}")
    return n * n - m * n * (1.0 - math.cos(xi))


def miso_gain(n: int) -> int:
    """Diversity-only power gain of ``n`` transmitters into one receive antenna."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n


def phased_array_field(d: float, phase_offset: float, theta: float, phi: float,
                       wavelength: float, element_pattern: float = 1.0) -> complex:
    """Normalized far-field response of a two-element array.

    Elements sit on the x axis ``d`` apart; the second is driven
    ``phase_offset`` ahead. Far field: equal 1/r and a path difference of
    d cos(gamma) with cos(gamma) = sin(theta) cos(phi). ``abs`` of the result
    ranges over [0, 2].
    """
    if not d > 0:
        raise ValueError("element spacing must be > 0")
    k = TWO_PI / wavelength
    cos_gamma = math.sin(theta) * math.cos(phi)
    return element_pattern * (1.0 + cmath.exp(1j * (phase_offset + k * d * cos_gamma)))
