"""Distributed beamforming by cooperating LEO satellites.

Submodules
----------
geometry
    Slant ranges, incidence angles, polarization bases, per-point beams.
fields
    Plane-wave superposition, time-averaged Poynting vectors, closed-form maxima.
impairments
    LEO Doppler model, Doppler-degraded combining, arrival-time offsets.
link_budget
    dB link-budget chain and sensitivity margin.
coverage
    Scenario presets, ground enhancement maps, fringe and spot metrics.
config, output, cli
    JSON configuration, CSV/PGM/JSON writers and the ``leobf`` command.
"""

__version__ = "0.1.0"
