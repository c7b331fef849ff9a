"""Pure numpy implementation of the kernels in ``_kernels.pyx``.

Used when the compiled extension is not built. Same contract: fills ``out``
with the midpoint-rule mean of E x H' (H' = Z0 * H) per point.
"""

import numpy as np


def poynting_average(e_pol, h_pol, phases, amplitudes, sin_table, cos_table, out):
    n_steps = sin_table.shape[1]
    cphi = amplitudes * np.cos(phases)  # (P, M)
    sphi = amplitudes * np.sin(phases)
    # a[p, m, j] = A_m sin(w_m t_j + phi_pm)
    a = cphi[:, :, None] * sin_table[None] + sphi[:, :, None] * cos_table[None]
    # Time-averaged products of the scalar waveforms, then the vector algebra.
    gram = np.matmul(a, a.transpose(0, 2, 1)) / n_steps  # (P, M, M)
    cross = np.cross(e_pol[:, :, None, :], h_pol[:, None, :, :])  # (P, M, M, 3)
    out[...] = np.einsum("pmn,pmnk->pk", gram, cross)
