"""Unit conventions.

Every frequency and rate inside the library is an angular quantity in rad/s.
User-facing documents (JSON configs, CSV output, CLI flags) carry plain
cycles-per-second values; conversion happens once, at the boundary.
"""

import math

TWO_PI = 2.0 * math.pi


def from_hz(value_hz: float) -> float:
    """Cycles/s -> rad/s."""
    return TWO_PI * value_hz


def to_hz(value_rad: float) -> float:
    """rad/s -> cycles/s."""
    return value_rad / TWO_PI
