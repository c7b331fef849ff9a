# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled midpoint-quadrature kernel for the time-averaged E x H product."""

from libc.math cimport cos, sin
from libc.stdlib cimport free, malloc


def poynting_average(const double[:, :, ::1] e_pol,
                     const double[:, :, ::1] h_pol,
                     const double[:, ::1] phases,
                     const double[::1] amplitudes,
                     const double[:, ::1] sin_table,
                     const double[:, ::1] cos_table,
                     double[:, ::1] out):
    """Accumulate mean_j E(t_j) x H'(t_j) per point into ``out``.

    H' is H scaled by the wave impedance (the caller divides by Z0).
    """
    cdef Py_ssize_t n_points = e_pol.shape[0]
    cdef Py_ssize_t n_beams = e_pol.shape[1]
    cdef Py_ssize_t n_steps = sin_table.shape[1]
    cdef Py_ssize_t p, m, j
    cdef double ex, ey, ez, hx, hy, hz, a, sx, sy, sz
    cdef double *cphi
    cdef double *sphi

    if h_pol.shape[0] != n_points or phases.shape[0] != n_points or out.shape[0] != n_points:
        raise ValueError("point dimension mismatch")
    if amplitudes.shape[0] != n_beams or cos_table.shape[1] != n_steps:
        raise ValueError("beam/step dimension mismatch")

    cphi = <double *> malloc(n_beams * sizeof(double))
    sphi = <double *> malloc(n_beams * sizeof(double))
    if cphi == NULL or sphi == NULL:
        free(cphi)
        free(sphi)
        raise MemoryError()
    try:
        with nogil:
            for p in range(n_points):
                for m in range(n_beams):
                    cphi[m] = amplitudes[m] * cos(phases[p, m])
                    sphi[m] = amplitudes[m] * sin(phases[p, m])
                sx = 0.0
                sy = 0.0
                sz = 0.0
                for j in range(n_steps):
                    ex = 0.0
                    ey = 0.0
                    ez = 0.0
                    hx = 0.0
                    hy = 0.0
                    hz = 0.0
                    for m in range(n_beams):
                        # sin(wt + phi) by angle addition against the shared tables
                        a = sin_table[m, j] * cphi[m] + cos_table[m, j] * sphi[m]
                        ex = ex + a * e_pol[p, m, 0]
                        ey = ey + a * e_pol[p, m, 1]
                        ez = ez + a * e_pol[p, m, 2]
                        hx = hx + a * h_pol[p, m, 0]
                        hy = hy + a * h_pol[p, m, 1]
                        hz = hz + a * h_pol[p, m, 2]
                    sx = sx + (ey * hz - ez * hy)
                    sy = sy + (ez * hx - ex * hz)
                    sz = sz + (ex * hy - ey * hx)
                out[p, 0] = sx / n_steps
                out[p, 1] = sy / n_steps
                out[p, 2] = sz / n_steps
    finally:
        free(cphi)
        free(sphi)
