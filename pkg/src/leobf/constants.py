"""Physical constants shared across the simulator (SI units)."""

import math

SPEED_OF_LIGHT = 299_792_458.0  # m/s
VACUUM_PERMEABILITY = 1.25663706212e-6  # H/m, CODATA 2018
FREE_SPACE_IMPEDANCE = VACUUM_PERMEABILITY * SPEED_OF_LIGHT  # ~376.730 ohm

EARTH_RADIUS_KM = 6371.0
EARTH_MU_KM3_S2 = 398_600.4418
EARTH_ROTATION_RAD_S = 7.2921159e-5

TWO_PI = 2.0 * math.pi

# Map values are clamped here so nulls stay finite in output files.
DB_FLOOR = -60.0
