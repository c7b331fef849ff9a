import math
import subprocess
import sys

import numpy as np
import pytest

from leobf import kernels
from leobf.coverage import build_scenario, enhancement_map

needs_compiled = pytest.mark.skipif(
    "compiled" not in kernels.BACKENDS, reason="compiled extension not built"
)


def random_inputs(seed, points=7, beams=3):
    rng = np.random.default_rng(seed)
    k = rng.normal(size=(points, beams, 3))
    k /= np.linalg.norm(k, axis=-1, keepdims=True)
    e = rng.normal(size=(points, beams, 3))
    e -= np.sum(e * k, axis=-1, keepdims=True) * k
    e /= np.linalg.norm(e, axis=-1, keepdims=True)
    h = np.cross(k, e)
    phases = rng.uniform(0, 2 * math.pi, size=(points, beams))
    amps = rng.uniform(0.5, 2.0, size=beams)
    return e, h, phases, amps


def test_python_backend_always_available():
    assert "python" in kernels.BACKENDS
    assert kernels.BACKEND in kernels.BACKENDS


@pytest.mark.parametrize("steps", [64, 1000, 3000])
def test_time_tables_match_direct(steps):
    omegas = np.array([2 * math.pi * 3.5e9, 2 * math.pi * 3.5002e9])
    window = 2.0 / 3.5e9
    s, c = kernels.time_tables(omegas, window, steps)
    t = (np.arange(steps) + 0.5) * window / steps
    np.testing.assert_allclose(s, np.sin(np.outer(omegas, t)), atol=1e-12)
    np.testing.assert_allclose(c, np.cos(np.outer(omegas, t)), atol=1e-12)


@needs_compiled
@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    e, h, phases, amps = random_inputs(seed)
    omegas = np.full(len(amps), 2 * math.pi * 3.5e9)
    window = 1 / 3.5e9
    a = kernels.poynting_average(e, h, phases, amps, omegas, window, 256, backend="python")
    b = kernels.poynting_average(e, h, phases, amps, omegas, window, 256, backend="compiled")
    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-16)


@needs_compiled
def test_backend_maps_agree():
    cfg = build_scenario("four_perpendicular", grid_resolution=61)
    a = enhancement_map(cfg, backend="python").values_db
    b = enhancement_map(cfg, backend="compiled").values_db
    assert np.max(np.abs(a - b)) < 1e-8


def test_unknown_backend_rejected():
    e, h, phases, amps = random_inputs(0)
    with pytest.raises(ValueError):
        kernels.poynting_average(e, h, phases, amps, [1.0] * 3, 1.0, 64, backend="fortran")


def test_fallback_when_extension_missing():
    code = (
        "import sys; sys.modules['leobf._kernels'] = None\n"
        "from leobf import kernels\n"
        "print(kernels.BACKEND, sorted(kernels.BACKENDS))\n"
    )
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert proc.stdout.split()[0] == "python"
