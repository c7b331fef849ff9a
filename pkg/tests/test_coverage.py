import math

import numpy as np
import pytest

from leobf.constants import SPEED_OF_LIGHT
from leobf.coverage import (
    Case,
    EnhancementMap,
    ScenarioConfig,
    ascent_roots,
    build_scenario,
    closed_form_max,
    enhancement_map,
    fringe_metrics,
    lateral_spacing_m,
    misaligned_map,
    single_sat_cell_radius,
    spot_metrics,
    spot_region,
)
from leobf.errors import NoFringeError
from leobf.impairments import TimeOffsetSpec

F = 3.5e9


def fringe_oracle_period(separation_rad, frequency=F):
    return SPEED_OF_LIGHT / frequency / (2 * math.sin(separation_rad / 2))


def test_lateral_spacing_case2():
    cfg = build_scenario("two_parallel")
    assert lateral_spacing_m(cfg) == pytest.approx(550e3 * math.tan(math.radians(0.2)), rel=0.01)
    assert lateral_spacing_m(cfg) == pytest.approx(1920.0, rel=0.01)


@pytest.mark.parametrize("case, n", [("single", 1), ("two_parallel", 2), ("four_intersecting", 4)])
def test_build_scenario_counts(case, n):
    assert len(build_scenario(case).satellites) == n


def test_build_scenario_headings():
    par = build_scenario("four_parallel")
    assert len({s.heading_unit for s in par.satellites}) == 1
    perp = build_scenario("two_perpendicular")
    a, b = (np.array(s.heading_unit) for s in perp.satellites)
    assert a @ b == pytest.approx(0.0)
    xi = math.radians(45)
    inter = build_scenario("four_intersecting", intersect_angle_rad=xi)
    a, c = (np.array(inter.satellites[i].heading_unit) for i in (0, 2))
    assert a @ c == pytest.approx(math.cos(xi))


def test_build_scenario_errors():
    with pytest.raises(ValueError):
        build_scenario("seven_sats")
    with pytest.raises(ValueError):
        build_scenario("two_parallel", intersect_angle_rad=0.5)
    with pytest.raises(ValueError):
        build_scenario("custom")
    with pytest.raises(ValueError):
        build_scenario("two_parallel", frequency_hz=3e9, wavelength_m=0.1)


def test_single_map_is_flat_zero():
    emap = enhancement_map(build_scenario("single", grid_resolution=101))
    assert np.max(np.abs(emap.values_db)) < 1e-9


def test_single_map_has_no_fringes():
    emap = enhancement_map(build_scenario("single", grid_resolution=41))
    with pytest.raises(NoFringeError):
        fringe_metrics(emap)


@pytest.mark.parametrize("fixture", ["case2_map", "case4_map", "case5_map", "case6_map"])
def test_map_never_exceeds_closed_form(fixture, request):
    emap = request.getfixturevalue(fixture)
    bound = 10 * math.log10(closed_form_max(emap.scenario))
    assert emap.values_db.max() <= bound + 0.01


def test_case3_smooth_three_db():
    emap = enhancement_map(build_scenario("two_perpendicular", grid_resolution=121))
    assert emap.values_db.max() == pytest.approx(3.0103, abs=0.01)
    # no deep nulls: the two beams are orthogonally polarized
    assert emap.values_db.min() > 2.9


def test_case4_center_and_reflections(case4_map):
    v = case4_map.values_db
    assert v[case4_map.center_index] == pytest.approx(12.0412, abs=0.01)
    np.testing.assert_allclose(v, v[:, ::-1], atol=1e-6)
    np.testing.assert_allclose(v, v[::-1, :], atol=1e-6)


def test_case5_transpose_and_rotation(case5_map):
    v = case5_map.values_db
    np.testing.assert_allclose(v, v.T, atol=1e-6)
    np.testing.assert_allclose(v, v[::-1, ::-1], atol=1e-6)
    np.testing.assert_allclose(v, v[:, ::-1], atol=1e-6)
    np.testing.assert_allclose(v, v[::-1, :], atol=1e-6)


def test_case6_max(case6_map):
    assert case6_map.values_db.max() == pytest.approx(10.79, abs=0.05)
    v = case6_map.values_db
    np.testing.assert_allclose(v, v[::-1, ::-1], atol=1e-6)


def test_case2_fringes(case2_map):
    fm = fringe_metrics(case2_map)
    oracle = fringe_oracle_period(math.radians(0.2))
    assert fm.period_m == pytest.approx(oracle, rel=0.01)
    assert fm.bright_width_m == pytest.approx(oracle / 2, rel=0.05)
    # baseline along y, so fringe lines run along x
    assert min(fm.orientation_rad, math.pi - fm.orientation_rad) < math.radians(1.0)


def test_halved_separation_doubles_period():
    full = build_scenario("two_parallel", grid_side_m=160.0, grid_resolution=321)
    half = build_scenario("two_parallel", separation_rad=math.radians(0.1),
                          grid_side_m=160.0, grid_resolution=321)
    p_full = fringe_metrics(enhancement_map(full)).period_m
    p_half = fringe_metrics(enhancement_map(half)).period_m
    assert p_half / p_full == pytest.approx(2.0, rel=0.01)


def test_wider_separation_bright_width():
    emap = enhancement_map(build_scenario("two_parallel", separation_rad=math.radians(0.4)))
    assert fringe_metrics(emap).bright_width_m == pytest.approx(6.1, rel=0.05)


def test_under_sampled_fringes_rejected():
    cfg = build_scenario("two_parallel", separation_rad=math.radians(2.0), grid_resolution=121)
    with pytest.raises(NoFringeError):
        fringe_metrics(enhancement_map(cfg))


def test_case4_spot(case4_map):
    sm = spot_metrics(case4_map, 6.0)
    assert sm.area_m2 == pytest.approx(452, rel=0.1)
    assert sm.equivalent_radius_m == pytest.approx(12, rel=0.1)


def test_case5_spot(case5_map):
    sm = spot_metrics(case5_map, 6.0)
    assert sm.area_m2 == pytest.approx(288, rel=0.1)
    assert sm.diagonal_m == pytest.approx(24, rel=0.1)


def test_spot_above_max_is_empty(case4_map):
    sm = spot_metrics(case4_map, 20.0)
    assert (sm.area_m2, sm.equivalent_radius_m, sm.diagonal_m) == (0.0, 0.0, 0.0)


def test_spot_region_excludes_neighbour_lobes():
    # two separated bumps, both above threshold: only the central one counts
    x = np.linspace(-10, 10, 81)
    X, Y = np.meshgrid(x, x)
    v = 10 * np.exp(-(X**2 + Y**2) / 4) + 8 * np.exp(-((X - 6) ** 2 + Y**2) / 2)
    emap = EnhancementMap(v, 20.0, x)
    region = spot_region(emap, 5.0)
    assert region[40, 40]
    assert not region[40, 64]
    assert (v >= 5.0)[40, 64]


def test_ascent_roots_single_peak():
    v = -np.add.outer(np.arange(-3, 4) ** 2, np.arange(-3, 4) ** 2).astype(float)
    roots = ascent_roots(v)
    assert np.all(roots == 3 * 7 + 3)


def test_determinism_under_workers():
    cfg = build_scenario("four_intersecting", grid_resolution=81)
    a = enhancement_map(cfg).values_db
    b = enhancement_map(cfg, workers=4).values_db
    c = enhancement_map(cfg, workers=3).values_db
    assert np.array_equal(a, b) and np.array_equal(a, c)


def test_zero_offsets_bit_identical(case2_map):
    cfg = case2_map.scenario
    m = misaligned_map(cfg, TimeOffsetSpec((0.0, 0.0)))
    assert np.array_equal(m.values_db, case2_map.values_db)


def test_integer_period_offsets_bit_identical(case5_map):
    cfg = case5_map.scenario
    m = misaligned_map(cfg, TimeOffsetSpec((1 / F, 0.0, 7 / F, 12000 / F)))
    assert np.array_equal(m.values_db, case5_map.values_db)


def test_half_period_swaps_fringes(case2_map):
    cfg = case2_map.scenario
    m = misaligned_map(cfg, TimeOffsetSpec((0.0, 0.5 / F)))
    a, b = case2_map.values_db, m.values_db
    # former maxima become minima and the other way round
    assert b[a >= a.max() - 0.01].max() < -20
    assert a[b >= b.max() - 0.01].max() < -20
    assert abs(a.max() - b.max()) < 0.5


def test_staggered_offsets_case5_keep_max(case5_map):
    cfg = case5_map.scenario
    half = 0.5 / F
    m = misaligned_map(cfg, TimeOffsetSpec((0.0, half, 0.0, half)))
    assert abs(m.values_db.max() - case5_map.values_db.max()) < 0.5
    assert not np.allclose(m.values_db, case5_map.values_db, atol=0.1)


def test_custom_scenario_bound():
    base = build_scenario("two_parallel")
    sats = (base.satellites[0], base.satellites[1])
    cfg = ScenarioConfig(Case.CUSTOM, sats, base.wavelength_m, grid_resolution=41)
    assert closed_form_max(cfg) == pytest.approx(4.0)
    assert enhancement_map(cfg).values_db.max() <= 6.03


def test_single_sat_cell_radius():
    assert single_sat_cell_radius(math.radians(2.5), 550.0) == pytest.approx(12.0, rel=0.01)
    assert single_sat_cell_radius(math.radians(2.5), 600.0) == pytest.approx(13.1, rel=0.01)
    assert single_sat_cell_radius(1e-12, 600.0) < 1e-9
    with pytest.raises(ValueError):
        single_sat_cell_radius(0.0, 550.0)
