"""Exact arithmetic for tilt stability and BG-type inequalities on threefolds."""

from .chern import ChernVector, Polarization, beta_bar, bg_quantity, bms_check, delta_bar, nabla_bar
from .coh_ring import CohRing, CurveClass, DivisorClass, Threefold, preset, PRESET_NAMES
from .numbers import QuadExt, TowerExt, Interval

__version__ = "0.1.0"

__all__ = [
    "ChernVector",
    "CohRing",
    "CurveClass",
    "DivisorClass",
    "Interval",
    "PRESET_NAMES",
    "Polarization",
    "QuadExt",
    "Threefold",
    "TowerExt",
    "beta_bar",
    "bg_quantity",
    "bms_check",
    "delta_bar",
    "nabla_bar",
    "preset",
]
