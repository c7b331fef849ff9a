"""Doppler shift of a LEO pass, Doppler-degraded combining, arrival-time offsets."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from leobf import kernels
from leobf.constants import SPEED_OF_LIGHT, TWO_PI
from leobf.errors import GeometryError
from leobf.fields import (
    MIN_STEPS_PER_PERIOD,
    PlaneWave,
    PlaneWaveSet,
    required_steps,
    zenith_beam,
)
from leobf.geometry import EarthModel


@dataclass(frozen=True)
class DopplerPassConfig:
    """One satellite pass seen from a ground point.

    ``inclination_rad`` sets how much Earth rotation is projected onto the
    orbit plane; the default (pi, retrograde equatorial) gives the largest
    ground-relative angular rate and hence the worst-case shift.
    """

    carrier_hz: float
    altitude_km: float = 600.0
    max_elevation_rad: float = math.pi / 2
    earth: EarthModel = EarthModel()
    inclination_rad: float = math.pi

    def __post_init__(self):
        if not self.carrier_hz > 0:
            raise ValueError("carrier_hz must be > 0")
        if not self.altitude_km > 0:
            raise ValueError("altitude_km must be > 0")
        if not 0.0 < self.max_elevation_rad <= math.pi / 2:
            raise ValueError("max_elevation_rad must lie in (0, pi/2]")

    @property
    def orbit_radius_km(self) -> float:
        return self.earth.radius_km + self.altitude_km


def orbital_angular_rate(cfg: DopplerPassConfig) -> float:
    """Satellite angular velocity in the Earth-fixed frame (rad/s), circular orbit."""
    r = cfg.orbit_radius_km
    inertial = math.sqrt(cfg.earth.gravitational_parameter / r**3)
    return inertial - cfg.earth.rotation_rate * math.cos(cfg.inclination_rad)


def min_central_angle(cfg: DopplerPassConfig) -> float:
    """Earth-centre angle between UE and satellite at the max-elevation instant."""
    r_e, r = cfg.earth.radius_km, cfg.orbit_radius_km
    return math.acos(r_e / r * math.cos(cfg.max_elevation_rad)) - cfg.max_elevation_rad


def horizon_offset(cfg: DopplerPassConfig) -> float:
    """Along-track angle from the max-elevation point to the horizon crossing."""
    r_e, r = cfg.earth.radius_km, cfg.orbit_radius_km
    return math.acos(min(1.0, r_e / (r * math.cos(min_central_angle(cfg)))))


def normalized_doppler(cfg: DopplerPassConfig, angular_offset: float) -> float:
    """Doppler shift over carrier, df/f, at ``angular_offset`` from max elevation.

    Positive offsets are after the max-elevation instant (receding, negative
    shift).
    """
    psi_h = horizon_offset(cfg)
    if abs(angular_offset) > psi_h:
        raise GeometryError(
            f"angular offset {angular_offset} rad is outside the visible pass (+/-{psi_h} rad)"
        )
    r_e, r = cfg.earth.radius_km, cfg.orbit_radius_km
    cos_g = math.cos(min_central_angle(cfg))
    rng = math.sqrt(r_e**2 + r**2 - 2.0 * r_e * r * math.cos(angular_offset) * cos_g)
    range_rate = r_e * r * math.sin(angular_offset) * cos_g * orbital_angular_rate(cfg) / rng
    # range_rate in km/s
    return -range_rate * 1e3 / SPEED_OF_LIGHT


def max_doppler_hz(cfg: DopplerPassConfig) -> float:
    """Largest |df| over the pass, reached at the horizon."""
    return abs(normalized_doppler(cfg, horizon_offset(cfg))) * cfg.carrier_hz


@dataclass(frozen=True)
class DopplerSweepConfig:
    """Two zenith beams, the second offset in frequency by each swept df.

    The window is ``window_cycles`` periods of the reference carrier.
    """

    carrier_hz: float = 3.5e9
    window_cycles: float = 12000
    df_min_hz: float = 0.0
    df_max_hz: float = 3.98e6
    df_step_hz: float = 20e3
    steps_per_cycle: int = MIN_STEPS_PER_PERIOD
    e0: float = 1.0

    def __post_init__(self):
        if not self.carrier_hz > 0:
            raise ValueError("carrier_hz must be > 0")
        if not self.window_cycles >= 1:
            raise ValueError("window_cycles must be >= 1")
        if not self.df_step_hz > 0:
            raise ValueError("df_step_hz must be > 0")
        if self.df_max_hz < self.df_min_hz:
            raise ValueError("df_max_hz must be >= df_min_hz")
        if self.steps_per_cycle < MIN_STEPS_PER_PERIOD:
            raise ValueError(f"steps_per_cycle must be >= {MIN_STEPS_PER_PERIOD}")
        if self.carrier_hz + self.df_min_hz <= 0:
            raise ValueError("swept carrier must stay positive")

    @property
    def window_s(self) -> float:
        return self.window_cycles / self.carrier_hz

    def offsets(self) -> np.ndarray:
        n = int(math.floor((self.df_max_hz - self.df_min_hz) / self.df_step_hz + 1e-9)) + 1
        return self.df_min_hz + self.df_step_hz * np.arange(n)


def doppler_enhancement_sweep(cfg: DopplerSweepConfig, backend: str | None = None):
    """Enhancement (dB) of two co-located zenith beams versus their frequency offset.

    Returns a list of ``(df_hz, enhancement_db)`` in ascending df order.
    """
    amp = math.sqrt(2.0) * cfg.e0
    w0 = TWO_PI * cfg.carrier_hz
    beam = zenith_beam()
    e = np.array([beam.e_pol_unit] * 2)[None]
    h = np.array([beam.h_pol_unit] * 2)[None]
    window = cfg.window_s
    dfs = cfg.offsets()
    f_top = cfg.carrier_hz + max(0.0, float(dfs.max()))
    steps = required_steps(window, f_top, cfg.steps_per_cycle)

    ref_tables = kernels.time_tables([w0], window, steps)
    ref = kernels.poynting_average(
        e[:, :1], h[:, :1], np.zeros((1, 1)), [amp], [w0], window, steps,
        backend=backend, tables=ref_tables,
    )[0]
    ref_mag = float(np.linalg.norm(ref))

    sin_t = np.vstack([ref_tables[0], ref_tables[0]])
    cos_t = np.vstack([ref_tables[1], ref_tables[1]])
    out = []
    for df in dfs:
        w1 = TWO_PI * (cfg.carrier_hz + df)
        sin_t[1], cos_t[1] = (t[0] for t in kernels.time_tables([w1], window, steps))
        tables = (sin_t, cos_t)
        s = kernels.poynting_average(
            e, h, np.zeros((1, 2)), [amp, amp], [w0, w1], window, steps,
            backend=backend, tables=tables,
        )[0]
        ratio = float(np.linalg.norm(s)) / ref_mag
        out.append((float(df), 10.0 * math.log10(max(ratio, 1e-6))))
    return out


def first_crossing(sweep, level_db: float) -> float | None:
    """First df where the sweep falls through ``level_db`` (linear interpolation)."""
    for (f0, v0), (f1, v1) in zip(sweep, sweep[1:]):
        if v0 >= level_db > v1:
            return f0 + (v0 - level_db) * (f1 - f0) / (v0 - v1)
    return None


@dataclass(frozen=True)
class TimeOffsetSpec:
    per_beam_offset_s: tuple

    def __post_init__(self):
        offsets = tuple(float(v) for v in self.per_beam_offset_s)
        object.__setattr__(self, "per_beam_offset_s", offsets)
        if not all(math.isfinite(v) for v in offsets):
            raise ValueError("time offsets must be finite")

    def negated(self) -> TimeOffsetSpec:
        return TimeOffsetSpec(tuple(-v for v in self.per_beam_offset_s))


def offset_phase_shifts(omegas, offsets: TimeOffsetSpec) -> np.ndarray:
    """Phase added to each beam by its arrival delay: -w * dt, reduced to a cycle fraction.

    Delays that are whole carrier periods up to the rounding of ``dt * f``
    give an exact zero shift.
    """
    omegas = np.asarray(omegas, dtype=float)
    if len(offsets.per_beam_offset_s) != len(omegas):
        raise ValueError(
            f"{len(offsets.per_beam_offset_s)} offsets given for {len(omegas)} beams"
        )
    shifts = np.zeros(len(omegas))
    for m, (w, dt) in enumerate(zip(omegas, offsets.per_beam_offset_s)):
        cycles = dt * (w / TWO_PI)
        frac = math.remainder(cycles, 1.0)
        if abs(frac) <= 4.0 * np.finfo(float).eps * abs(cycles):
            continue
        shifts[m] = -TWO_PI * frac
    return shifts


def apply_time_offsets(waves: PlaneWaveSet, offsets: TimeOffsetSpec) -> PlaneWaveSet:
    """Delay each beam by its offset; amplitudes and directions are unchanged."""
    shifts = offset_phase_shifts(waves.omegas, offsets)
    new = []
    for w, d in zip(waves.waves, shifts):
        if d == 0.0:
            new.append(w)
            continue
        phase = math.fmod(w.beam.arrival_phase_rad + d, TWO_PI)
        if phase < 0.0:
            phase += TWO_PI
        new.append(PlaneWave(replace(w.beam, arrival_phase_rad=phase), w.amplitude, w.omega))
    return PlaneWaveSet(tuple(new), waves.reference_amplitude)
