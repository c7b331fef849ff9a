"""Additive dB link budget for a satellite-to-smartphone downlink."""

from __future__ import annotations

import math
from dataclasses import dataclass

from leobf.constants import SPEED_OF_LIGHT


@dataclass(frozen=True)
class LinkBudget:
    """Link budget terms.

    EIRP already contains the transmit antenna gain, so
    ``tx_antenna_gain_dbi`` is carried for reporting only and never added.
    The defaults are a 600 km, 3.5 GHz direct-to-handset downlink.
    """

    distance_km: float = 600.0
    frequency_hz: float = 3.5e9
    eirp_dbw: float = 36.7
    tx_antenna_gain_dbi: float = 37.1
    rx_antenna_gain_dbi: float = 0.0
    atmospheric_rain_loss_db: float = 5.0
    tx_loss_db: float = 2.0
    rx_loss_db: float = 2.0

    def __post_init__(self):
        if not self.distance_km > 0:
            raise ValueError("distance_km must be > 0")
        if not self.frequency_hz > 0:
            raise ValueError("frequency_hz must be > 0")
        for name in ("atmospheric_rain_loss_db", "tx_loss_db", "rx_loss_db"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class SensitivityRef:
    threshold_dbm: float = -96.5  # 5G NR band n78 reference sensitivity

    def __post_init__(self):
        if not math.isfinite(self.threshold_dbm):
            raise ValueError("threshold_dbm must be finite")


def fspl_db(distance_m: float, frequency_hz: float) -> float:
    """Free-space path loss 20 log10(4 pi d f / c)."""
    if not distance_m > 0 or not frequency_hz > 0:
        raise ValueError("distance and frequency must be > 0")
    return 20.0 * math.log10(4.0 * math.pi * distance_m * frequency_hz / SPEED_OF_LIGHT)


def dbw_to_dbm(p_dbw: float) -> float:
    return p_dbw + 30.0


def received_power_dbm(b: LinkBudget) -> float:
    return (
        dbw_to_dbm(b.eirp_dbw)
        - fspl_db(b.distance_km * 1e3, b.frequency_hz)
        - b.atmospheric_rain_loss_db
        - b.tx_loss_db
        - b.rx_loss_db
        + b.rx_antenna_gain_dbi
    )


def margin_db(p_rx_dbm: float, sens: SensitivityRef = SensitivityRef(),
              enhancement_db: float = 0.0) -> float:
    """Margin over the sensitivity threshold; positive means the link closes."""
    return p_rx_dbm + enhancement_db - sens.threshold_dbm


def budget_report(b: LinkBudget, sens: SensitivityRef = SensitivityRef(),
                  enhancement_db: float = 0.0) -> dict:
    p_rx = received_power_dbm(b)
    return {
        "fspl_db": fspl_db(b.distance_km * 1e3, b.frequency_hz),
        "received_power_dbm": p_rx,
        "enhancement_db": enhancement_db,
        "enhanced_power_dbm": p_rx + enhancement_db,
        "sensitivity_dbm": sens.threshold_dbm,
        "margin_db": margin_db(p_rx, sens, enhancement_db),
    }
