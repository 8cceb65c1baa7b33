"""Boundary unit conversions.

Internally everything is angular frequency (rad/s) and SI lengths.
External interfaces (config files, CSV) speak ordinary frequency in
MHz/kHz, lengths in cm, wavelengths in nm, densities in 1/cm^3.
"""

import math

TWO_PI = 2.0 * math.pi


def mhz(value: float) -> float:
    """Ordinary MHz -> rad/s."""
    return TWO_PI * 1e6 * value


def khz(value: float) -> float:
    """Ordinary kHz -> rad/s."""
    return TWO_PI * 1e3 * value


def to_mhz(omega: float) -> float:
    """rad/s -> ordinary MHz."""
    return omega / (TWO_PI * 1e6)


def to_khz(omega: float) -> float:
    """rad/s -> ordinary kHz."""
    return omega / (TWO_PI * 1e3)


def cm(value: float) -> float:
    return value * 1e-2


def nm(value: float) -> float:
    return value * 1e-9


def per_cm3(value: float) -> float:
    return value * 1e6
