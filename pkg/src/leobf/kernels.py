"""Kernel backend selection and the shared quadrature plumbing.

The compiled ``_kernels`` extension is used when importable; otherwise the
numpy port in ``_pykernels`` takes over. Both are exposed through
:data:`BACKENDS` so they can be compared directly.
"""

from __future__ import annotations

import numpy as np

from leobf import _pykernels
from leobf.constants import FREE_SPACE_IMPEDANCE

try:
    from leobf import _kernels
except ImportError:  # extension not built
    _kernels = None

BACKENDS = {"python": _pykernels.poynting_average}
if _kernels is not None:
    BACKENDS["compiled"] = _kernels.poynting_average

BACKEND = "compiled" if _kernels is not None else "python"


def time_tables(omegas, window: float, steps: int, block: int = 1024):
    """sin/cos of w_m t_j at the composite-midpoint nodes t_j = (j + 1/2) T/steps.

    Long windows are built by angle addition from a block-start table and an
    in-block table, which avoids a transcendental call per node.
    """
    omegas = np.asarray(omegas, dtype=float)
    dt = window / steps
    if steps <= block:
        wt = omegas[:, None] * ((np.arange(steps) + 0.5) * dt)[None, :]
        return np.ascontiguousarray(np.sin(wt)), np.ascontiguousarray(np.cos(wt))
    n_blocks = -(-steps // block)
    w_in = omegas[:, None] * ((np.arange(block) + 0.5) * dt)[None, :]
    w_out = omegas[:, None] * (np.arange(n_blocks) * (block * dt))[None, :]
    s_in, c_in = np.sin(w_in)[:, None, :], np.cos(w_in)[:, None, :]
    s_out, c_out = np.sin(w_out)[:, :, None], np.cos(w_out)[:, :, None]
    m = len(omegas)
    sin_t = (s_out * c_in + c_out * s_in).reshape(m, -1)[:, :steps]
    cos_t = (c_out * c_in - s_out * s_in).reshape(m, -1)[:, :steps]
    return np.ascontiguousarray(sin_t), np.ascontiguousarray(cos_t)


def poynting_average(e_pol, h_pol, phases, amplitudes, omegas, window, steps,
                     backend: str | None = None, tables=None):
    """Time-averaged Poynting vector (W/m^2) for P points x M plane waves.

    Parameters
    ----------
    e_pol, h_pol : (P, M, 3) arrays
        Unit E and H directions of each wave at each point.
    phases : (P, M) array
        Arrival phase of each wave at each point.
    amplitudes, omegas : (M,) arrays
        Peak E amplitude (V/m) and angular frequency (rad/s) per wave.
    window : float
        Integration window T in seconds.
    steps : int
        Number of midpoint nodes over the window.
    tables : tuple, optional
        Precomputed ``time_tables(omegas, window, steps)``.

    Returns
    -------
    (P, 3) ndarray
    """
    name = backend or BACKEND
    if name not in BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}")
    kernel = BACKENDS[name]
    e_pol = np.ascontiguousarray(e_pol, dtype=float)
    h_pol = np.ascontiguousarray(h_pol, dtype=float)
    phases = np.ascontiguousarray(phases, dtype=float)
    amplitudes = np.ascontiguousarray(amplitudes, dtype=float)
    if tables is None:
        tables = time_tables(omegas, window, steps)
    sin_t, cos_t = tables
    out = np.empty((e_pol.shape[0], 3))
    kernel(e_pol, h_pol, phases, amplitudes, sin_t, cos_t, out)
    out /= FREE_SPACE_IMPEDANCE
    return out
