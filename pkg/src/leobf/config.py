"""JSON run configuration: parsing, validation and the inverse dump.

Angles may be given in degrees (``*_deg``) or radians (``*_rad``); they are
held in radians after parsing. :func:`request_to_dict` writes radians so a
dump parses back to an identical request.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from leobf.coverage import (
    DEFAULT_ALTITUDE_KM,
    DEFAULT_FREQUENCY_HZ,
    DEFAULT_GRID_RESOLUTION,
    DEFAULT_GRID_SIDE_M,
    DEFAULT_SEPARATION_RAD,
    Case,
    ScenarioConfig,
    build_scenario,
)
from leobf.constants import SPEED_OF_LIGHT
from leobf.errors import ConfigError
from leobf.geometry import EarthModel, SatelliteBeamSpec, polar_angle_for_incidence
from leobf.impairments import DopplerSweepConfig, TimeOffsetSpec
from leobf.link_budget import LinkBudget, SensitivityRef

OUTPUT_KINDS = ("grid_csv", "heatmap_pgm", "summary_json")
OUT_DIR_ENV = "LEOBF_OUT_DIR"

_TOP_KEYS = {
    "scenario", "outputs", "doppler_sweep", "link_budget", "sensitivity_dbm",
    "time_offsets_s", "time_offsets_periods", "out_dir",
}
_SCENARIO_KEYS = {
    "case", "altitude_km", "separation_deg", "separation_rad", "frequency_hz",
    "wavelength_m", "intersect_angle_deg", "intersect_angle_rad", "grid_side_m",
    "grid_resolution", "cutoff_db", "e0", "earth_radius_km", "satellites",
}
_SATELLITE_KEYS = {
    "altitude_km", "polar_angle_deg", "polar_angle_rad", "incidence_deg", "incidence_rad",
    "azimuth_deg", "azimuth_rad", "heading", "heading_deg", "heading_rad",
    "initial_phase_deg", "initial_phase_rad", "amplitude",
}


@dataclass(frozen=True)
class RunRequest:
    scenario: ScenarioConfig
    outputs: frozenset = frozenset(OUTPUT_KINDS)
    sweep: DopplerSweepConfig | None = None
    budget: LinkBudget | None = None
    sensitivity: SensitivityRef = SensitivityRef()
    offsets: TimeOffsetSpec | None = None
    out_dir: Path = Path("out")
    defaults_applied: tuple = field(default=(), compare=False)


class _Reader:
    """Pulls typed fields out of one JSON object, recording every problem."""

    def __init__(self, data, where, problems, allowed):
        self.where = where
        self.problems = problems
        if not isinstance(data, dict):
            problems.append(f"{where}: expected an object")
            data = {}
        self.data = data
        self.defaults = []
        for key in sorted(set(data) - allowed):
            problems.append(f"{where}.{key}: unknown field")

    def has(self, key):
        return key in self.data

    def number(self, key, default=None, *, positive=False, nonneg=False, integer=False,
               optional=False):
        name = f"{self.where}.{key}"
        if key not in self.data:
            if default is not None:
                self.defaults.append(f"{name}={default}")
            return default
        value = self.data[key]
        if value is None and optional:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.problems.append(f"{name}: expected a number, got {value!r}")
            return default
        if not math.isfinite(value):
            self.problems.append(f"{name}: must be finite")
            return default
        if integer and value != int(value):
            self.problems.append(f"{name}: expected an integer, got {value!r}")
            return default
        if positive and not value > 0:
            self.problems.append(f"{name}: must be > 0, got {value!r}")
        if nonneg and value < 0:
            self.problems.append(f"{name}: must be >= 0, got {value!r}")
        return int(value) if integer else float(value)

    def angle(self, stem, default_rad=None, **kw):
        """Reads ``stem_deg`` or ``stem_rad`` and returns radians."""
        deg, rad = f"{stem}_deg", f"{stem}_rad"
        if self.has(deg) and self.has(rad):
            self.problems.append(f"{self.where}: give {deg} or {rad}, not both")
            return default_rad
        if self.has(deg):
            v = self.number(deg, **kw)
            return None if v is None else math.radians(v)
        if self.has(rad):
            return self.number(rad, **kw)
        if default_rad is not None:
            self.defaults.append(f"{self.where}.{rad}={default_rad!r}")
        return default_rad

    def number_list(self, key):
        name = f"{self.where}.{key}"
        value = self.data.get(key)
        if not isinstance(value, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)
            for v in value
        ):
            self.problems.append(f"{name}: expected a list of finite numbers")
            return None
        return [float(v) for v in value]


def _parse_satellite(data, where, problems, e0):
    r = _Reader(data, where, problems, _SATELLITE_KEYS)
    altitude = r.number("altitude_km", positive=True)
    if altitude is None:
        problems.append(f"{where}.altitude_km: required")
    polar = r.angle("polar_angle", nonneg=True)
    incidence = r.angle("incidence", nonneg=True)
    if polar is not None and incidence is not None:
        problems.append(f"{where}: give polar_angle_* or incidence_*, not both")
    elif incidence is not None and altitude:
        if incidence >= math.pi / 2:
            problems.append(f"{where}.incidence: must be below 90 degrees")
        else:
            polar = polar_angle_for_incidence(incidence, altitude)
    if polar is None:
        polar = 0.0
    if polar >= math.pi / 2:
        problems.append(f"{where}.polar_angle: must be below 90 degrees")
    azimuth = r.angle("azimuth", 0.0)
    phase = r.angle("initial_phase", 0.0)
    amplitude = r.number("amplitude", math.sqrt(2.0) * e0, positive=True)

    heading = None
    heading_az = r.angle("heading")
    if r.has("heading"):
        if heading_az is not None:
            problems.append(f"{where}: give heading or heading_deg/heading_rad, not both")
        vec = r.number_list("heading")
        if vec is not None:
            if len(vec) != 3 or abs(math.sqrt(sum(v * v for v in vec)) - 1.0) > 1e-12:
                problems.append(f"{where}.heading: must be a unit 3-vector, got {vec}")
            else:
                heading = tuple(vec)
    elif heading_az is not None:
        heading = (math.cos(heading_az), math.sin(heading_az), 0.0)
    else:
        heading = (0.0, 1.0, 0.0)
        r.defaults.append(f"{where}.heading=[0, 1, 0]")

    if altitude is None or heading is None or amplitude is None or not altitude > 0:
        return None, r.defaults
    if not 0.0 <= polar < math.pi / 2 or not amplitude > 0:
        return None, r.defaults
    return SatelliteBeamSpec(altitude, polar, azimuth, heading, phase, amplitude), r.defaults


def _parse_scenario(data, problems, preset=None, grid_res=None):
    r = _Reader(data, "scenario", problems, _SCENARIO_KEYS)
    case = preset or r.data.get("case", Case.SINGLE.value)
    if "case" not in r.data and preset is None:
        r.defaults.append("scenario.case=single")
    try:
        case = Case(case)
    except ValueError:
        problems.append(
            f"scenario.case: unknown case {case!r}; expected one of "
            + ", ".join(c.value for c in Case)
        )
        case = None

    altitude = r.number("altitude_km", DEFAULT_ALTITUDE_KM, positive=True)
    separation = r.angle("separation", DEFAULT_SEPARATION_RAD, nonneg=True)
    if r.has("frequency_hz") and r.has("wavelength_m"):
        problems.append("scenario: give frequency_hz or wavelength_m, not both")
    frequency = r.number("frequency_hz", positive=True) if r.has("frequency_hz") else None
    wavelength = r.number("wavelength_m", positive=True) if r.has("wavelength_m") else None
    xi_given = r.has("intersect_angle_deg") or r.has("intersect_angle_rad")
    xi = r.angle("intersect_angle", nonneg=True) if xi_given else None
    side = r.number("grid_side_m", DEFAULT_GRID_SIDE_M, positive=True)
    res = r.number("grid_resolution", DEFAULT_GRID_RESOLUTION, integer=True)
    if grid_res is not None:
        res = grid_res
    if res is not None and res < 2:
        problems.append(f"scenario.grid_resolution: must be >= 2, got {res}")
    cutoff_given = r.has("cutoff_db")
    cutoff = r.number("cutoff_db", optional=True) if cutoff_given else None
    e0 = r.number("e0", 1.0, positive=True)
    radius = r.number("earth_radius_km", EarthModel().radius_km, positive=True)

    sats = None
    if r.has("satellites"):
        raw = r.data["satellites"]
        if not isinstance(raw, list) or not raw:
            problems.append("scenario.satellites: expected a non-empty list")
        else:
            sats = []
            for i, item in enumerate(raw):
                sat, defaults = _parse_satellite(item, f"scenario.satellites[{i}]", problems, e0 or 1.0)
                r.defaults.extend(defaults)
                sats.append(sat)
    elif case is Case.CUSTOM:
        problems.append("scenario.satellites: required for the custom case")

    if case is not None and case is not Case.FOUR_INTERSECTING and xi is not None:
        problems.append(f"scenario.intersect_angle: does not apply to case {case.value}")
    if xi is not None and not 0.0 <= xi <= math.pi / 2:
        problems.append("scenario.intersect_angle: must lie in [0, 90] degrees")
    if separation is not None and not separation < math.pi:
        problems.append("scenario.separation: must be below 180 degrees")

    if problems or case is None:
        return None, r.defaults
    earth = EarthModel(radius_km=radius)
    try:
        if sats is not None:
            lam = wavelength or SPEED_OF_LIGHT / (frequency or DEFAULT_FREQUENCY_HZ)
            scenario = ScenarioConfig(
                case_id=case, satellites=tuple(sats), wavelength_m=lam,
                intersect_angle_rad=xi, separation_rad=separation if r.has("separation_rad")
                or r.has("separation_deg") else None,
                grid_side_m=side, grid_resolution=res, cutoff_db=cutoff, e0=e0, earth=earth,
            )
        else:
            kwargs = {}
            if xi_given:
                kwargs["intersect_angle_rad"] = xi
            if cutoff_given:
                kwargs["cutoff_db"] = cutoff
            scenario = build_scenario(
                case, altitude_km=altitude, separation_rad=separation,
                frequency_hz=frequency, wavelength_m=wavelength, grid_side_m=side,
                grid_resolution=res, e0=e0, earth=earth, **kwargs,
            )
    except ValueError as exc:
        problems.append(f"scenario: {exc}")
        return None, r.defaults
    return scenario, r.defaults


def _build(cls, data, where, problems, allowed):
    r = _Reader(data, where, problems, allowed)
    values = {}
    for key in allowed:
        if r.has(key):
            v = r.number(key, integer=(key == "steps_per_cycle"))
            if v is not None:
                values[key] = v
    if problems:
        return None
    try:
        return cls(**values)
    except ValueError as exc:
        problems.append(f"{where}: {exc}")
        return None


def parse_config(text: str, *, preset: str | None = None, grid_res: int | None = None,
                 out_dir: str | os.PathLike | None = None) -> RunRequest:
    """Parse and validate a JSON run configuration.

    Raises
    ------
    ConfigError
        On malformed JSON (with line and column) or on any invalid field;
        ``problems`` lists every violation found.
    """
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    problems = []
    top = _Reader(data, "config", problems, _TOP_KEYS)
    data = top.data

    scenario, defaults = _parse_scenario(data.get("scenario", {}), problems, preset, grid_res)
    defaults = list(defaults)

    outputs = frozenset(OUTPUT_KINDS)
    if "outputs" in data:
        raw = data["outputs"]
        if not isinstance(raw, list) or not raw:
            problems.append("config.outputs: expected a non-empty list")
        else:
            bad = [o for o in raw if o not in OUTPUT_KINDS]
            if bad:
                problems.append(f"config.outputs: unknown kinds {bad}; expected {list(OUTPUT_KINDS)}")
            outputs = frozenset(raw)
    else:
        defaults.append("config.outputs=" + ",".join(OUTPUT_KINDS))

    sweep = None
    if "doppler_sweep" in data:
        sweep = _build(DopplerSweepConfig, data["doppler_sweep"], "doppler_sweep", problems,
                       set(DopplerSweepConfig.__dataclass_fields__))
    budget = None
    if "link_budget" in data:
        budget = _build(LinkBudget, data["link_budget"], "link_budget", problems,
                        set(LinkBudget.__dataclass_fields__))
    threshold = top.number("sensitivity_dbm", SensitivityRef().threshold_dbm)

    offsets = None
    if "time_offsets_s" in data and "time_offsets_periods" in data:
        problems.append("config: give time_offsets_s or time_offsets_periods, not both")
    elif "time_offsets_s" in data or "time_offsets_periods" in data:
        key = "time_offsets_s" if "time_offsets_s" in data else "time_offsets_periods"
        vals = top.number_list(key)
        if vals is not None and scenario is not None:
            if len(vals) != len(scenario.satellites):
                problems.append(
                    f"config.{key}: {len(vals)} offsets for {len(scenario.satellites)} satellites"
                )
            else:
                if key == "time_offsets_periods":
                    period = 2.0 * math.pi / scenario.omega
                    vals = [v * period for v in vals]
                offsets = TimeOffsetSpec(tuple(vals))
    defaults.extend(top.defaults)

    if out_dir is None:
        if "out_dir" in data:
            if not isinstance(data["out_dir"], str) or not data["out_dir"]:
                problems.append("config.out_dir: expected a path string")
            out_dir = data.get("out_dir") or "out"
        else:
            out_dir = os.environ.get(OUT_DIR_ENV, "out")
            defaults.append(f"config.out_dir={out_dir}")

    if problems:
        raise ConfigError(problems)
    return RunRequest(
        scenario=scenario,
        outputs=outputs,
        sweep=sweep,
        budget=budget,
        sensitivity=SensitivityRef(threshold),
        offsets=offsets,
        out_dir=Path(out_dir),
        defaults_applied=tuple(defaults),
    )


def load_config(path, **overrides) -> RunRequest:
    return parse_config(Path(path).read_text(), **overrides)


def satellite_to_dict(sat: SatelliteBeamSpec) -> dict:
    return {
        "altitude_km": sat.altitude_km,
        "polar_angle_rad": sat.polar_angle_rad,
        "azimuth_rad": sat.azimuth_rad,
        "heading": list(sat.heading_unit),
        "initial_phase_rad": sat.initial_phase_rad,
        "amplitude": sat.amplitude_at_receiver,
    }


def scenario_to_dict(s: ScenarioConfig) -> dict:
    out = {
        "case": s.case_id.value,
        "wavelength_m": s.wavelength_m,
        "grid_side_m": s.grid_side_m,
        "grid_resolution": s.grid_resolution,
        "cutoff_db": s.cutoff_db,
        "e0": s.e0,
        "earth_radius_km": s.earth.radius_km,
        "satellites": [satellite_to_dict(sat) for sat in s.satellites],
    }
    if s.separation_rad is not None:
        out["separation_rad"] = s.separation_rad
    if s.intersect_angle_rad is not None:
        out["intersect_angle_rad"] = s.intersect_angle_rad
    return out


def request_to_dict(req: RunRequest) -> dict:
    out = {
        "scenario": scenario_to_dict(req.scenario),
        "outputs": sorted(req.outputs),
        "sensitivity_dbm": req.sensitivity.threshold_dbm,
        "out_dir": str(req.out_dir),
    }
    if req.sweep is not None:
        out["doppler_sweep"] = asdict(req.sweep)
    if req.budget is not None:
        out["link_budget"] = asdict(req.budget)
    if req.offsets is not None:
        out["time_offsets_s"] = list(req.offsets.per_beam_offset_s)
    return out
