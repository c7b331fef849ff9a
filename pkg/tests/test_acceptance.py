"""Acceptance gate: one test per criterion, each checked at its stated tolerance.

Every test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria". Run alone with

    pytest tests/test_acceptance.py -v
"""

import math

import numpy as np
import pytest

from leobf.coverage import (
    build_scenario,
    closed_form_max,
    enhancement_map,
    fringe_metrics,
    lateral_spacing_m,
    misaligned_map,
    spot_metrics,
)
from leobf.fields import (
    PlaneWave,
    PlaneWaveSet,
    closed_form_intersecting_max,
    closed_form_parallel_max,
    closed_form_perpendicular_max,
    enhancement_db,
    miso_gain,
    ratio_to_db,
    reference_poynting,
    time_avg_poynting,
)
from leobf.geometry import BeamAtPoint
from leobf.impairments import (
    DopplerPassConfig,
    DopplerSweepConfig,
    TimeOffsetSpec,
    first_crossing,
    max_doppler_hz,
    normalized_doppler,
)
from leobf.link_budget import LinkBudget, fspl_db, received_power_dbm

pytestmark = pytest.mark.acceptance

F = 3.5e9
OMEGA = 2 * math.pi * F
AMP = math.sqrt(2.0)
THREE_DB = 10 * math.log10(2.0)


def record(log, name, checks):
    """Log ``checks`` (label -> (ok, shown value)) and assert them all."""
    ok = all(c for c, _ in checks.values())
    detail = "; ".join(f"{label} {shown}{'' if c else ' [X]'}" for label, (c, shown) in checks.items())
    log.append((name, ok, detail))
    failed = [label for label, (c, _) in checks.items() if not c]
    assert not failed, f"{name}: {failed} ({detail})"


def zenith_wave(heading, phase=0.0):
    heading = np.asarray(heading, dtype=float)
    k = np.array([0.0, 0.0, -1.0])
    h = np.cross(k, heading)
    beam = BeamAtPoint(tuple(k), 1.0, tuple(heading), tuple(h), phase, 0.0)
    return PlaneWave(beam, AMP, OMEGA)


def zenith_enhancement_db(headings):
    combined = time_avg_poynting(PlaneWaveSet(tuple(zenith_wave(h) for h in headings)))
    return enhancement_db(combined, reference_poynting(OMEGA))


def test_criterion_1_link_budget(acceptance_log):
    fspl = fspl_db(600e3, 3.5e9)
    p_rx = received_power_dbm(LinkBudget())
    record(acceptance_log, "criterion 1 link budget", {
        "FSPL": (abs(fspl - 158.9) <= 0.05, f"{fspl:.3f} dB"),
        "P_rx": (abs(p_rx + 101.2) <= 0.05, f"{p_rx:.3f} dBm"),
    })


def test_criterion_2_closed_form_vs_quadrature(acceptance_log):
    y, x = (0.0, 1.0, 0.0), (1.0, 0.0, 0.0)
    xi = math.radians(60.0)
    tilted = (math.sin(xi), math.cos(xi), 0.0)
    rows = {
        "N=2 parallel": ([y, y], closed_form_parallel_max(2), 6.02),
        "N=4 parallel": ([y] * 4, closed_form_parallel_max(4), 12.04),
        "N=2 perpendicular": ([y, x], closed_form_perpendicular_max(2), 3.01),
        "N=4 perpendicular": ([y, y, x, x], closed_form_perpendicular_max(4), 9.03),
        "N=4 M=2 xi=60": ([y, y, tilted, tilted], closed_form_intersecting_max(4, 2, xi), 10.79),
    }
    checks = {}
    for label, (headings, ratio, quoted) in rows.items():
        numeric = zenith_enhancement_db(headings)
        closed = ratio_to_db(ratio)
        ok = abs(numeric - closed) <= 0.02 and abs(closed - quoted) <= 0.005
        checks[label] = (ok, f"{numeric:.4f}/{closed:.4f} dB")
    record(acceptance_log, "criterion 2 closed-form maxima", checks)


def test_criterion_3_miso_comparison(acceptance_log):
    checks = {}
    for n in (2, 4, 8):
        distributed = zenith_enhancement_db([(0.0, 1.0, 0.0)] * n)
        miso = ratio_to_db(miso_gain(n))
        checks[f"N={n}"] = (abs(distributed - 2 * miso) < 1e-9, f"{distributed:.4f} = 2x{miso:.4f} dB")
    record(acceptance_log, "criterion 3 MISO comparison", checks)


def test_criterion_4_doppler_sweep(acceptance_log, default_sweep):
    cfg = DopplerSweepConfig()
    window = cfg.window_s
    dfs = np.array([df for df, _ in default_sweep])
    vals = np.array([db for _, db in default_sweep])
    x = 2 * np.pi * dfs * window
    oracle = 10 * np.log10(2 * (1 + np.sinc(x / np.pi)))
    crossing = first_crossing(default_sweep, THREE_DB)
    tail = vals[dfs > 3e6]
    record(acceptance_log, "criterion 4 Doppler sweep", {
        "T": (abs(window - 12000 / F) < 1e-18, f"{window * 1e6:.4f} us"),
        "3.01 dB crossing": (crossing is not None and abs(crossing - 145.8e3) <= 2e3,
                             "none" if crossing is None else f"{crossing / 1e3:.2f} kHz"),
        "df=0": (abs(vals[0] - 6.02) <= 0.02, f"{vals[0]:.4f} dB"),
        "tail > 3 MHz": (len(tail) > 0 and np.all(np.abs(tail - THREE_DB) <= 0.5),
                         f"[{tail.min():.3f}, {tail.max():.3f}] dB"),
        "sinc oracle": (len(vals) == 200 and np.max(np.abs(vals - oracle)) <= 0.05,
                        f"max dev {np.max(np.abs(vals - oracle)):.2e} dB at {len(vals)} points"),
    })


def test_criterion_5_doppler_model(acceptance_log):
    f2 = max_doppler_hz(DopplerPassConfig(carrier_hz=2e9))
    f35 = max_doppler_hz(DopplerPassConfig(carrier_hz=3.5e9))
    zero = normalized_doppler(DopplerPassConfig(carrier_hz=2e9), 0.0)
    record(acceptance_log, "criterion 5 Doppler model", {
        "2 GHz": (abs(f2 / 48e3 - 1) <= 0.05, f"{f2 / 1e3:.2f} kHz"),
        "3.5 GHz": (abs(f35 / 84e3 - 1) <= 0.05, f"{f35 / 1e3:.2f} kHz"),
        "max elevation": (zero == 0.0, f"{abs(zero):.1e}"),
    })


def test_criterion_6_case2_fringes(acceptance_log, case2_map):
    fm = fringe_metrics(case2_map)
    spacing = lateral_spacing_m(case2_map.scenario)
    # baseline runs along y; fringe lines perpendicular to it run along x (orientation 0)
    tilt = min(fm.orientation_rad, math.pi - fm.orientation_rad)
    vmax = float(case2_map.values_db.max())
    record(acceptance_log, "criterion 6 two_parallel map", {
        "period": (abs(fm.period_m / 24.6 - 1) <= 0.05, f"{fm.period_m:.3f} m"),
        "bright width": (abs(fm.bright_width_m / 12.3 - 1) <= 0.05, f"{fm.bright_width_m:.3f} m"),
        "orientation": (math.degrees(tilt) <= 1.0, f"{math.degrees(tilt):.3f} deg off"),
        "max": (abs(vmax - 6.0) <= 0.1, f"{vmax:.4f} dB"),
        "spacing": (abs(spacing / 1920 - 1) <= 0.01, f"{spacing / 1e3:.4f} km"),
    })


def test_criterion_7_spot_metrics(acceptance_log, case4_map, case5_map):
    s4 = spot_metrics(case4_map, 6.0)
    s5 = spot_metrics(case5_map, 6.0)
    record(acceptance_log, "criterion 7 spot metrics", {
        "four_parallel area": (abs(s4.area_m2 / 452 - 1) <= 0.1, f"{s4.area_m2:.1f} m^2"),
        "four_parallel radius": (abs(s4.equivalent_radius_m / 12 - 1) <= 0.1,
                          f"{s4.equivalent_radius_m:.2f} m"),
        "four_perpendicular area": (abs(s5.area_m2 / 288 - 1) <= 0.1, f"{s5.area_m2:.1f} m^2"),
        "four_perpendicular diagonal": (abs(s5.diagonal_m / 24 - 1) <= 0.1, f"{s5.diagonal_m:.2f} m"),
    })


def test_criterion_8_property_suite(acceptance_log, case2_map, case4_map, case5_map, case6_map):
    single = enhancement_map(build_scenario("single"))
    flat = float(np.max(np.abs(single.values_db)))

    maps = {"2": case2_map, "4": case4_map, "5": case5_map, "6": case6_map}
    excess = max(
        float(m.values_db.max()) - 10 * math.log10(closed_form_max(m.scenario))
        for m in maps.values()
    )

    v4, v5, v6 = case4_map.values_db, case5_map.values_db, case6_map.values_db
    sym = max(
        np.max(np.abs(v4 - v4[:, ::-1])), np.max(np.abs(v4 - v4[::-1, :])),
        np.max(np.abs(v5 - v5.T)), np.max(np.abs(v5 - v5[::-1, ::-1])),
        np.max(np.abs(v6 - v6[::-1, ::-1])),
    )

    threaded = enhancement_map(case5_map.scenario, workers=4).values_db
    deterministic = np.array_equal(threaded, v5)

    shifted = misaligned_map(case2_map.scenario, TimeOffsetSpec((0.0, 0.5 / F))).values_db
    v2 = case2_map.values_db
    swapped = bool(shifted[v2 >= v2.max() - 0.01].max() < -20
                   and v2[shifted >= shifted.max() - 0.01].max() < -20)
    max_shift = abs(float(shifted.max()) - float(v2.max()))

    record(acceptance_log, "criterion 8 property suite", {
        "single flat": (flat < 1e-9, f"{flat:.1e} dB"),
        "bound": (excess <= 0.01, f"max excess {excess:.2e} dB"),
        "symmetry": (sym <= 1e-6, f"{sym:.1e} dB"),
        "determinism": (deterministic, "bit-identical" if deterministic else "differs"),
        "misalignment": (swapped and max_shift <= 0.5, f"extrema swapped, max moved {max_shift:.3f} dB"),
    })


def test_criterion_9_excluded(acceptance_log):
    acceptance_log.append((
        "criterion 9 full-scale claims", None,
        "handset reception, ephemerides and hardware sync are out of scope",
    ))
    pytest.skip("excluded: covered by the invariant checks of criterion 8")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
