"""Scenario presets, ground enhancement maps and the metrics read off them."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from leobf import kernels
from leobf.constants import DB_FLOOR, SPEED_OF_LIGHT, TWO_PI
from leobf.errors import NoFringeError
from leobf.fields import (
    closed_form_intersecting_max,
    closed_form_parallel_max,
    closed_form_perpendicular_max,
    reference_poynting,
    resolve_quadrature,
)
from leobf.geometry import (
    EarthModel,
    SatelliteBeamSpec,
    beams_on_grid,
    polar_angle_for_incidence,
    satellite_spacing_m,
)
from leobf.impairments import TimeOffsetSpec, offset_phase_shifts


class Case(str, Enum):
    SINGLE = "single"
    TWO_PARALLEL = "two_parallel"
    TWO_PERPENDICULAR = "two_perpendicular"
    FOUR_PARALLEL = "four_parallel"
    FOUR_PERPENDICULAR = "four_perpendicular"
    FOUR_INTERSECTING = "four_intersecting"
    CUSTOM = "custom"


SATELLITE_COUNT = {
    Case.SINGLE: 1,
    Case.TWO_PARALLEL: 2,
    Case.TWO_PERPENDICULAR: 2,
    Case.FOUR_PARALLEL: 4,
    Case.FOUR_PERPENDICULAR: 4,
    Case.FOUR_INTERSECTING: 4,
}

DEFAULT_ALTITUDE_KM = 550.0
DEFAULT_FREQUENCY_HZ = 3.5e9
DEFAULT_SEPARATION_RAD = math.radians(0.2)
DEFAULT_INTERSECT_RAD = math.radians(60.0)
DEFAULT_GRID_SIDE_M = 48.0
DEFAULT_GRID_RESOLUTION = 481
# four-satellite maps are read at a 6 dB cut
PRESET_CUTOFF_DB = {
    Case.FOUR_PARALLEL: 6.0,
    Case.FOUR_PERPENDICULAR: 6.0,
    Case.FOUR_INTERSECTING: 6.0,
}

_X = (1.0, 0.0, 0.0)
_Y = (0.0, 1.0, 0.0)
_UNSET = object()


@dataclass(frozen=True)
class ScenarioConfig:
    case_id: Case
    satellites: tuple
    wavelength_m: float
    intersect_angle_rad: float | None = None
    separation_rad: float | None = None
    grid_side_m: float = DEFAULT_GRID_SIDE_M
    grid_resolution: int = DEFAULT_GRID_RESOLUTION
    cutoff_db: float | None = None
    e0: float = 1.0
    earth: EarthModel = EarthModel()

    def __post_init__(self):
        object.__setattr__(self, "case_id", Case(self.case_id))
        object.__setattr__(self, "satellites", tuple(self.satellites))
        want = SATELLITE_COUNT.get(self.case_id)
        if want is not None and len(self.satellites) != want:
            raise ValueError(
                f"case {self.case_id.value} needs {want} satellites, got {len(self.satellites)}"
            )
        if not self.satellites:
            raise ValueError("at least one satellite is required")
        if not self.wavelength_m > 0:
            raise ValueError("wavelength_m must be > 0")
        if self.grid_resolution < 2:
            raise ValueError("grid_resolution must be >= 2")
        if not self.grid_side_m > 0:
            raise ValueError("grid_side_m must be > 0")
        if not self.e0 > 0:
            raise ValueError("e0 must be > 0")

    @property
    def omega(self) -> float:
        return TWO_PI * SPEED_OF_LIGHT / self.wavelength_m

    @property
    def pitch_m(self) -> float:
        return self.grid_side_m / (self.grid_resolution - 1)

    def axis_m(self) -> np.ndarray:
        """Grid coordinates along x (and y), symmetric about the UE."""
        n = self.grid_resolution
        return (np.arange(n) - (n - 1) / 2.0) * self.pitch_m


def _mirror_pairs(alpha, altitude_km, azimuths, headings, amp):
    return tuple(
        SatelliteBeamSpec(
            altitude_km=altitude_km,
            polar_angle_rad=alpha,
            azimuth_rad=az,
            heading_unit=hd,
            amplitude_at_receiver=amp,
        )
        for az, hd in zip(azimuths, headings)
    )


def build_scenario(case_id, *, altitude_km: float = DEFAULT_ALTITUDE_KM,
                   separation_rad: float = DEFAULT_SEPARATION_RAD,
                   frequency_hz: float | None = None, wavelength_m: float | None = None,
                   intersect_angle_rad=_UNSET, grid_side_m: float = DEFAULT_GRID_SIDE_M,
                   grid_resolution: int = DEFAULT_GRID_RESOLUTION, cutoff_db=_UNSET,
                   e0: float = 1.0, earth: EarthModel = EarthModel(),
                   satellites=None) -> ScenarioConfig:
    """Concrete satellite placement for a named coverage case.

    Multi-satellite cases sit in mirror pairs about the UE, each satellite
    arriving ``separation_rad / 2`` off zenith, so opposite beams meet at
    ``separation_rad``. Pair order is (+x, -x, +y, -y) for four satellites
    and (+y, -y) for two. Headings: parallel cases all fly +y; in the
    perpendicular cases the x-axis pair flies +x; in the intersecting case
    the x-axis pair flies at ``intersect_angle_rad`` from +y.
    """
    try:
        case = Case(case_id)
    except ValueError:
        raise ValueError(f"unknown case id {case_id!r}") from None
    if frequency_hz is not None and wavelength_m is not None:
        raise ValueError("give frequency_hz or wavelength_m, not both")
    if wavelength_m is None:
        wavelength_m = SPEED_OF_LIGHT / (frequency_hz or DEFAULT_FREQUENCY_HZ)

    if case is Case.FOUR_INTERSECTING:
        xi = DEFAULT_INTERSECT_RAD if intersect_angle_rad is _UNSET else intersect_angle_rad
        if xi is None or not 0.0 <= xi <= math.pi / 2:
            raise ValueError(f"intersect_angle_rad must lie in [0, pi/2], got {xi}")
    else:
        if intersect_angle_rad not in (_UNSET, None):
            raise ValueError(f"intersect_angle_rad does not apply to case {case.value}")
        xi = None
    if cutoff_db is _UNSET:
        cutoff_db = PRESET_CUTOFF_DB.get(case)

    if case is Case.CUSTOM:
        if not satellites:
            raise ValueError("custom case needs an explicit satellite list")
        sats = tuple(satellites)
        separation = None
    else:
        if satellites is not None:
            raise ValueError(f"preset {case.value} places its own satellites")
        if not 0.0 <= separation_rad < math.pi:
            raise ValueError(f"separation_rad must lie in [0, pi), got {separation_rad}")
        amp = math.sqrt(2.0) * e0
        separation = separation_rad
        alpha = polar_angle_for_incidence(separation_rad / 2.0, altitude_km, earth)
        east, west, north, south = 0.0, math.pi, math.pi / 2, 3 * math.pi / 2
        if case is Case.SINGLE:
            sats = _mirror_pairs(0.0, altitude_km, [0.0], [_Y], amp)
            separation = None
        elif case is Case.TWO_PARALLEL:
            sats = _mirror_pairs(alpha, altitude_km, [north, south], [_Y, _Y], amp)
        elif case is Case.TWO_PERPENDICULAR:
            sats = _mirror_pairs(alpha, altitude_km, [north, south], [_Y, _X], amp)
        else:
            if case is Case.FOUR_PARALLEL:
                cross = _Y
            elif case is Case.FOUR_PERPENDICULAR:
                cross = _X
            else:
                cross = (math.sin(xi), math.cos(xi), 0.0)
            sats = _mirror_pairs(
                alpha, altitude_km, [east, west, north, south], [cross, cross, _Y, _Y], amp
            )

    return ScenarioConfig(
        case_id=case,
        satellites=sats,
        wavelength_m=wavelength_m,
        intersect_angle_rad=xi,
        separation_rad=separation,
        grid_side_m=grid_side_m,
        grid_resolution=grid_resolution,
        cutoff_db=cutoff_db,
        e0=e0,
        earth=earth,
    )


def lateral_spacing_m(cfg: ScenarioConfig) -> float:
    """Distance between the first two satellites of a scenario."""
    if len(cfg.satellites) < 2:
        raise ValueError("lateral spacing needs at least two satellites")
    return satellite_spacing_m(cfg.satellites[0], cfg.satellites[1], cfg.earth)


def closed_form_max(cfg: ScenarioConfig) -> float:
    """Upper bound on the enhancement ratio for the scenario."""
    case = cfg.case_id
    if case is Case.SINGLE:
        return 1.0
    if case in (Case.TWO_PARALLEL, Case.FOUR_PARALLEL):
        return float(closed_form_parallel_max(len(cfg.satellites)))
    if case in (Case.TWO_PERPENDICULAR, Case.FOUR_PERPENDICULAR):
        return float(closed_form_perpendicular_max(len(cfg.satellites)))
    if case is Case.FOUR_INTERSECTING:
        return closed_form_intersecting_max(4, 2, cfg.intersect_angle_rad)
    # fully coherent, co-polarized bound relative to a sqrt(2) E0 reference
    total = sum(s.amplitude_at_receiver for s in cfg.satellites)
    return total * total / (2.0 * cfg.e0 * cfg.e0)


@dataclass
class EnhancementMap:
    """Enhancement in dB over a square ground patch centred on the UE.

    ``values_db[i, j]`` is the point (x = coords_m[j], y = coords_m[i]).
    """

    values_db: np.ndarray
    extent_m: float
    coords_m: np.ndarray
    scenario: ScenarioConfig | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def resolution(self) -> int:
        return self.values_db.shape[0]

    @property
    def pitch_m(self) -> float:
        return self.extent_m / (self.resolution - 1)

    @property
    def center_index(self):
        return (self.resolution // 2, self.resolution // 2)

    def mesh(self):
        return np.meshgrid(self.coords_m, self.coords_m)


def _grid_fields(cfg: ScenarioConfig):
    axis = cfg.axis_m()
    X, Y = np.meshgrid(axis, axis)
    beams = [beams_on_grid(s, X, Y, cfg.earth, cfg.wavelength_m) for s in cfg.satellites]
    n_pts = X.size
    e = np.stack([b.e_pol for b in beams], axis=2).reshape(n_pts, len(beams), 3)
    h = np.stack([b.h_pol for b in beams], axis=2).reshape(n_pts, len(beams), 3)
    phases = np.stack([b.arrival_phase for b in beams], axis=-1).reshape(n_pts, len(beams))
    return np.ascontiguousarray(e), np.ascontiguousarray(h), np.ascontiguousarray(phases)


def enhancement_map(cfg: ScenarioConfig, offsets: TimeOffsetSpec | None = None,
                    workers: int | None = None, backend: str | None = None) -> EnhancementMap:
    """Enhancement over the ground grid relative to one zenith satellite.

    Each grid row is an independent work unit written into a preallocated
    output, so the result does not depend on ``workers``.
    """
    n = cfg.grid_resolution
    e, h, phases = _grid_fields(cfg)
    amps = np.array([s.amplitude_at_receiver for s in cfg.satellites])
    omegas = np.full(len(cfg.satellites), cfg.omega)
    if offsets is not None:
        shifts = offset_phase_shifts(omegas, offsets)
        for m, d in enumerate(shifts):
            if d != 0.0:
                phases[:, m] = np.mod(phases[:, m] + d, TWO_PI)

    window, steps = resolve_quadrature(omegas, None, None)
    tables = kernels.time_tables(omegas, window, steps)
    s_avg = np.empty((n * n, 3))

    def row(i):
        sl = slice(i * n, (i + 1) * n)
        s_avg[sl] = kernels.poynting_average(
            e[sl], h[sl], phases[sl], amps, omegas, window, steps,
            backend=backend, tables=tables,
        )

    if workers is None or workers <= 1:
        for i in range(n):
            row(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(row, range(n)))

    ref = reference_poynting(cfg.omega, cfg.e0, window, steps, backend=backend)
    ratio = np.linalg.norm(s_avg, axis=1) / ref.magnitude
    floor = 10.0 ** (DB_FLOOR / 10.0)
    values = 10.0 * np.log10(np.maximum(ratio, floor)).reshape(n, n)
    meta = {
        "closed_form_max_db": 10.0 * math.log10(closed_form_max(cfg)),
        "time_offsets_s": list(offsets.per_beam_offset_s) if offsets else None,
        "window_s": window,
        "integration_steps": steps,
    }
    return EnhancementMap(values, cfg.grid_side_m, cfg.axis_m(), cfg, meta)


def misaligned_map(cfg: ScenarioConfig, offsets: TimeOffsetSpec, **kwargs) -> EnhancementMap:
    """:func:`enhancement_map` with per-beam arrival-time offsets."""
    return enhancement_map(cfg, offsets=offsets, **kwargs)


@dataclass(frozen=True)
class FringeMetrics:
    period_m: float
    bright_width_m: float
    orientation_rad: float  # direction of the fringe lines, in [0, pi)


def _cosine(s, mean, amp, period, phase):
    return mean + amp * np.cos(TWO_PI * s / period + phase)


def fringe_metrics(emap: EnhancementMap, min_samples_per_period: int = 8) -> FringeMetrics:
    """Period, bright-band width and orientation of a striped map.

    The stripe direction comes from the structure tensor of the linear
    power map; the period from a cosine fit to the profile across the
    stripes; the bright width from the above-midlevel band around the
    central bright fringe (half the period when that band runs off the map).
    """
    power = 10.0 ** (emap.values_db / 10.0)
    pitch = emap.pitch_m
    if power.max() - power.min() <= 1e-6 * power.max():
        raise NoFringeError("map is flat")
    gy, gx = np.gradient(power, pitch)
    tensor = np.array([[np.sum(gx * gx), np.sum(gx * gy)], [np.sum(gx * gy), np.sum(gy * gy)]])
    evals, evecs = np.linalg.eigh(tensor)
    coherence = (evals[1] - evals[0]) / (evals[1] + evals[0])
    if coherence < 0.5:
        raise NoFringeError(f"map is not striped (orientation coherence {coherence:.2f})")
    ux, uy = evecs[:, 1]

    X, Y = emap.mesh()
    s = X * ux + Y * uy
    idx = np.rint((s - s.min()) / pitch).astype(int)
    counts = np.bincount(idx.ravel())
    sums = np.bincount(idx.ravel(), weights=power.ravel())
    keep = counts >= 0.5 * counts.max()
    pos = s.min() + pitch * np.arange(len(counts))[keep]
    profile = sums[keep] / counts[keep]

    pad = 16 * len(profile)
    spec = np.abs(np.fft.rfft(profile - profile.mean(), n=pad))
    spec[0] = 0.0
    k = int(np.argmax(spec))
    if k == 0:
        raise NoFringeError("no dominant spatial frequency")
    guess_period = pad * pitch / k
    half_swing = 0.5 * (profile.max() - profile.min())
    try:
        with warnings.catch_warnings():
            # covariance is not used; a perfect fit makes it undefined
            warnings.simplefilter("ignore", OptimizeWarning)
            params, _ = curve_fit(
                _cosine, pos, profile,
                p0=[profile.mean(), half_swing, guess_period, 0.0],
                maxfev=20000,
            )
    except RuntimeError as exc:
        raise NoFringeError(f"fringe fit did not converge: {exc}") from None
    period = abs(params[2])
    if period < min_samples_per_period * pitch:
        raise NoFringeError(
            f"fringe period {period:.3g} m is under-sampled at {pitch:.3g} m pitch"
        )

    bright = _bright_band_width(pos, profile)
    if bright is None:
        bright = period / 2.0
    orientation = math.atan2(uy, ux) + math.pi / 2
    return FringeMetrics(period, bright, orientation % math.pi)


def _bright_band_width(pos, profile):
    level = 0.5 * (profile.max() + profile.min())
    inner = np.arange(1, len(profile) - 1)
    peaks = inner[(profile[inner] >= profile[inner - 1]) & (profile[inner] >= profile[inner + 1])
                  & (profile[inner] > level)]
    if len(peaks) == 0:
        return None
    centre = np.argmin(np.abs(pos))
    peak = peaks[np.argmin(np.abs(peaks - centre))]

    lo = peak
    while lo > 0 and profile[lo - 1] >= level:
        lo -= 1
    hi = peak
    while hi < len(profile) - 1 and profile[hi + 1] >= level:
        hi += 1
    if lo == 0 or hi == len(profile) - 1:
        return None

    def crossing(a, b):
        t = (profile[a] - level) / (profile[a] - profile[b])
        return pos[a] + t * (pos[b] - pos[a])

    return crossing(hi, hi + 1) - crossing(lo, lo - 1)


@dataclass(frozen=True)
class SpotMetrics:
    area_m2: float
    equivalent_radius_m: float
    diagonal_m: float


def ascent_roots(values: np.ndarray) -> np.ndarray:
    """Flat index of the local maximum each cell reaches by steepest 8-neighbour ascent."""
    n0, n1 = values.shape
    padded = np.pad(values, 1, constant_values=-np.inf)
    offsets = [(0, 0)] + [(di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1) if (di, dj) != (0, 0)]
    stack = np.stack([padded[1 + di:1 + di + n0, 1 + dj:1 + dj + n1] for di, dj in offsets])
    best = np.argmax(stack, axis=0)  # ties keep the cell itself (offset 0)
    di = np.array([o[0] for o in offsets])[best]
    dj = np.array([o[1] for o in offsets])[best]
    ii, jj = np.indices(values.shape)
    parent = ((ii + di) * n1 + (jj + dj)).ravel()
    while True:
        nxt = parent[parent]
        if np.array_equal(nxt, parent):
            return parent.reshape(values.shape)
        parent = nxt


def spot_region(emap: EnhancementMap, threshold_db: float) -> np.ndarray:
    """Boolean mask of the central spot at or above ``threshold_db``.

    The spot is the part of the peak's ascent basin above the threshold,
    for the peak nearest the UE. Neighbouring lobes that touch the spot at a
    saddle belong to their own basins and are left out.
    """
    values = emap.values_db
    mask = values >= threshold_db
    if not mask.any():
        return mask
    roots = ascent_roots(values)
    centre = emap.center_index
    root = roots[centre]
    if not mask.flat[root]:
        ii, jj = np.nonzero(mask)
        d = (ii - centre[0]) ** 2 + (jj - centre[1]) ** 2
        k = int(np.argmin(d))
        root = roots[ii[k], jj[k]]
    return mask & (roots == root)


def spot_metrics(emap: EnhancementMap, threshold_db: float) -> SpotMetrics:
    """Area, equal-area radius and largest extent of the central spot."""
    region = spot_region(emap, threshold_db)
    count = int(region.sum())
    if count == 0:
        return SpotMetrics(0.0, 0.0, 0.0)
    area = count * emap.pitch_m**2
    ii, jj = np.nonzero(region)
    pts = np.column_stack([emap.coords_m[jj], emap.coords_m[ii]])
    if count >= 3:
        try:
            pts = pts[ConvexHull(pts).vertices]
        except QhullError:  # collinear cells; use all points
            pass
    diagonal = float(pdist(pts).max()) if len(pts) > 1 else 0.0
    return SpotMetrics(area, math.sqrt(area / math.pi), diagonal)


def single_sat_cell_radius(beamwidth: float, altitude: float) -> float:
    """Radius of a nadir beam footprint, in the units of ``altitude``."""
    if not 0.0 < beamwidth < math.pi:
        raise ValueError(f"beamwidth must lie in (0, pi), got {beamwidth}")
    if not altitude > 0:
        raise ValueError("altitude must be > 0")
    return altitude * math.tan(beamwidth / 2.0)
