"""Satellite / Earth-centre / ground-point geometry.

Two frames are used. The Earth-centred triangle (Earth centre, UE, satellite)
gives slant ranges and incidence angles in closed form. For ground grids the
satellite is placed in a local Cartesian frame with the UE at the origin,
x/y in the tangent plane and z pointing away from the Earth centre, and all
path lengths are exact Euclidean distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from leobf.constants import (
    EARTH_MU_KM3_S2,
    EARTH_RADIUS_KM,
    EARTH_ROTATION_RAD_S,
    TWO_PI,
)
from leobf.errors import BelowHorizonError, DegenerateGeometryError, GeometryError

_DEGENERATE_TOL = 1e-9


@dataclass(frozen=True)
class EarthModel:
    radius_km: float = EARTH_RADIUS_KM
    gravitational_parameter: float = EARTH_MU_KM3_S2  # km^3/s^2
    rotation_rate: float = EARTH_ROTATION_RAD_S  # rad/s

    def __post_init__(self):
        if not self.radius_km > 0:
            raise ValueError(f"radius_km must be > 0, got {self.radius_km}")
        if not self.gravitational_parameter > 0:
            raise ValueError("gravitational_parameter must be > 0")

    @property
    def radius_m(self) -> float:
        return self.radius_km * 1e3


@dataclass(frozen=True)
class SatelliteBeamSpec:
    """One array element: a satellite and the wave it delivers to the UE.

    Parameters
    ----------
    altitude_km : float
        Orbit altitude above the spherical Earth.
    polar_angle_rad : float
        Angle at the Earth centre between the satellite and the UE.
    azimuth_rad : float
        Direction of the satellite's sub-point from the UE, measured in the
        tangent plane from +x towards +y.
    heading_unit : tuple of 3 floats
        Direction of motion in the UE frame; sets the E-field polarization.
    initial_phase_rad : float
        Transmit phase.
    amplitude_at_receiver : float
        Peak E-field amplitude at the receiver (V/m).
    """

    altitude_km: float
    polar_angle_rad: float = 0.0
    azimuth_rad: float = 0.0
    heading_unit: tuple = (0.0, 1.0, 0.0)
    initial_phase_rad: float = 0.0
    amplitude_at_receiver: float = math.sqrt(2.0)

    def __post_init__(self):
        heading = tuple(float(v) for v in self.heading_unit)
        object.__setattr__(self, "heading_unit", heading)
        if not self.altitude_km > 0:
            raise ValueError(f"altitude_km must be > 0, got {self.altitude_km}")
        if not 0.0 <= self.polar_angle_rad < math.pi / 2:
            raise ValueError(
                f"polar_angle_rad must lie in [0, pi/2), got {self.polar_angle_rad}"
            )
        if len(heading) != 3 or abs(math.sqrt(sum(v * v for v in heading)) - 1.0) > 1e-12:
            raise ValueError(f"heading_unit must be a unit 3-vector, got {heading}")
        if not self.amplitude_at_receiver > 0:
            raise ValueError("amplitude_at_receiver must be > 0")


@dataclass(frozen=True)
class GroundPoint:
    x_m: float = 0.0
    y_m: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x_m) and math.isfinite(self.y_m)):
            raise ValueError("ground point coordinates must be finite")


@dataclass(frozen=True)
class BeamAtPoint:
    """Plane-wave description of one satellite's wave at one ground point."""

    propagation_unit: tuple
    path_length_m: float
    e_pol_unit: tuple
    h_pol_unit: tuple
    arrival_phase_rad: float
    incidence_theta_rad: float


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha < math.pi / 2:
        raise GeometryError(f"polar angle must lie in [0, pi/2), got {alpha}")


def slant_range(alpha: float, h: float, earth: EarthModel = EarthModel()) -> float:
    """Satellite-to-UE distance from the law of cosines.

    ``h`` and the result share units with ``earth.radius_km`` (km).
    """
    _check_alpha(alpha)
    if not h > 0:
        raise GeometryError(f"altitude must be > 0, got {h}")
    r_e = earth.radius_km
    r_s = r_e + h
    # (r_s - r_e)^2 + 2 r_e r_s (1 - cos a), written to avoid cancellation near a = 0
    return math.sqrt(h * h + 4.0 * r_e * r_s * math.sin(alpha / 2.0) ** 2)


def horizon_polar_angle(h: float, earth: EarthModel = EarthModel()) -> float:
    """Largest polar angle at which the satellite is still above the UE horizon."""
    return math.acos(earth.radius_km / (earth.radius_km + h))


def incidence_theta(alpha: float, h: float, earth: EarthModel = EarthModel()) -> float:
    """Angle between the arriving beam and the UE's local vertical.

    theta = alpha + beta with beta = asin(r_E sin(alpha) / R). Beyond the
    horizon the arcsine branch is wrong, so that region is rejected.
    """
    R = slant_range(alpha, h, earth)
    if alpha > horizon_polar_angle(h, earth):
        raise BelowHorizonError(f"polar angle {alpha} rad is below the UE horizon")
    beta = math.asin(min(1.0, earth.radius_km * math.sin(alpha) / R))
    return alpha + beta


def polar_angle_for_incidence(theta: float, h: float, earth: EarthModel = EarthModel()) -> float:
    """Inverse of :func:`incidence_theta` on [0, pi/2)."""
    if not 0.0 <= theta < math.pi / 2:
        raise GeometryError(f"incidence angle must lie in [0, pi/2), got {theta}")
    r_e = earth.radius_km
    return theta - math.asin(r_e * math.sin(theta) / (r_e + h))


def path_phase_difference(R1: float, R2: float, wavelength: float) -> float:
    """Propagation phase difference |R1 - R2| * 2 pi / lambda (not wrapped)."""
    if not wavelength > 0:
        raise ValueError("wavelength must be > 0")
    return abs(R1 - R2) * TWO_PI / wavelength


def polarization_basis(heading_unit, propagation_unit):
    """E and H unit directions for a wave polarized along the heading.

    E is the heading with its component along the propagation removed, H
    completes the right-handed triple so that E x H points along propagation.
    """
    heading = np.asarray(heading_unit, dtype=float)
    k = np.asarray(propagation_unit, dtype=float)
    e, h = _polarization(heading, k)
    return e, h


def _polarization(heading, k):
    # heading: (3,) or broadcastable to k; k: (..., 3)
    e = heading - np.sum(heading * k, axis=-1, keepdims=True) * k
    norm = np.linalg.norm(e, axis=-1, keepdims=True)
    if np.any(norm < _DEGENERATE_TOL):
        raise DegenerateGeometryError("heading is parallel to the propagation direction")
    e = e / norm
    h = np.cross(k, e)
    h = h / np.linalg.norm(h, axis=-1, keepdims=True)
    return e, h


def satellite_position(sat: SatelliteBeamSpec, earth: EarthModel = EarthModel()) -> np.ndarray:
    """Satellite position in the UE frame (metres)."""
    r_s = (earth.radius_km + sat.altitude_km) * 1e3
    horizontal = r_s * math.sin(sat.polar_angle_rad)
    # r_s cos(a) - r_E, arranged to keep precision for small a
    vertical = sat.altitude_km * 1e3 - 2.0 * r_s * math.sin(sat.polar_angle_rad / 2.0) ** 2
    return np.array(
        [
            horizontal * math.cos(sat.azimuth_rad),
            horizontal * math.sin(sat.azimuth_rad),
            vertical,
        ]
    )


def satellite_spacing_m(a: SatelliteBeamSpec, b: SatelliteBeamSpec,
                        earth: EarthModel = EarthModel()) -> float:
    """Straight-line distance between two satellites."""
    return float(np.linalg.norm(satellite_position(a, earth) - satellite_position(b, earth)))


class BeamArrays(NamedTuple):
    """Vectorized :class:`BeamAtPoint` fields over a set of ground points."""

    propagation: np.ndarray  # (..., 3)
    path_length: np.ndarray  # (...)
    e_pol: np.ndarray  # (..., 3)
    h_pol: np.ndarray  # (..., 3)
    arrival_phase: np.ndarray  # (...)
    incidence_theta: np.ndarray  # (...)


def beams_on_grid(sat: SatelliteBeamSpec, x, y, earth: EarthModel = EarthModel(),
                  wavelength: float = 1.0) -> BeamArrays:
    """Plane-wave geometry of ``sat`` at every tangent-plane point (x, y) in metres."""
    if not wavelength > 0:
        raise ValueError("wavelength must be > 0")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    pos = satellite_position(sat, earth)
    if pos[2] <= 0.0:
        raise BelowHorizonError("satellite is below the local horizon of the ground points")
    d = np.stack([x - pos[0], y - pos[1], np.broadcast_to(-pos[2], x.shape)], axis=-1)
    R = np.linalg.norm(d, axis=-1)
    k = d / R[..., None]

    e, h = _polarization(np.asarray(sat.heading_unit), k)

    # Local vertical at each point is the Earth-radial direction through it.
    up = np.stack([x, y, np.broadcast_to(earth.radius_m, x.shape)], axis=-1)
    up = up / np.linalg.norm(up, axis=-1, keepdims=True)
    toward_sat = -k
    cos_t = np.sum(toward_sat * up, axis=-1)
    sin_t = np.linalg.norm(np.cross(toward_sat, up), axis=-1)
    theta = np.arctan2(sin_t, cos_t)

    cycles = R / wavelength
    frac = cycles - np.floor(cycles)
    phase = np.mod(sat.initial_phase_rad - TWO_PI * frac, TWO_PI)
    return BeamArrays(k, R, e, h, phase, theta)


def beam_at_point(sat: SatelliteBeamSpec, p: GroundPoint, earth: EarthModel = EarthModel(),
                  wavelength: float = 1.0) -> BeamAtPoint:
    """Exact (no far-field approximation) wave geometry of ``sat`` at ``p``."""
    b = beams_on_grid(sat, p.x_m, p.y_m, earth, wavelength)
    return BeamAtPoint(
        propagation_unit=tuple(float(v) for v in b.propagation),
        path_length_m=float(b.path_length),
        e_pol_unit=tuple(float(v) for v in b.e_pol),
        h_pol_unit=tuple(float(v) for v in b.h_pol),
        arrival_phase_rad=float(b.arrival_phase),
        incidence_theta_rad=float(b.incidence_theta),
    )
