"""Circular array geometry, frequency and direction conventions.

Angles are radians throughout. Directions use the physics convention:
theta from +z, phi from +x in the xy-plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

SPEED_OF_LIGHT = 299_792_458.0
"Speed of light in vacuum, m/s (exact SI value)."


@dataclass(frozen=True)
class Frequency:
    hertz: float

    def __post_init__(self):
        if not np.isfinite(self.hertz) or self.hertz <= 0:
            raise InvalidArgumentError(f"frequency must be positive, got {self.hertz!r} Hz")

    @classmethod
    def from_ghz(cls, ghz: float) -> Frequency:
        return cls(float(ghz) * 1e9)

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.hertz

    @property
    def wavenumber(self) -> float:
        return 2.0 * np.pi / self.wavelength


def wavelength(frequency: Frequency) -> float:
    "Free-space wavelength in metres."
    return SPEED_OF_LIGHT / frequency.hertz


def unit_vector(theta, phi) -> np.ndarray:
    """Cartesian unit vector(s) for spherical angles.

    Broadcasts over array inputs; the trailing axis holds (x, y, z).
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack(np.broadcast_arrays(st * np.cos(phi), st * np.sin(phi), np.cos(theta)), axis=-1)


@dataclass(frozen=True)
class Direction:
    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= np.pi):
            raise InvalidArgumentError(f"theta must lie in [0, pi], got {self.theta!r}")
        # phi is stored reduced to [0, 2pi)
        object.__setattr__(self, "phi", float(np.mod(self.phi, 2.0 * np.pi)))

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float) -> Direction:
        return cls(np.radians(theta_deg), np.radians(phi_deg))

    def unit_vector(self) -> np.ndarray:
        return unit_vector(self.theta, self.phi)


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Uniform circular array lying in the xy-plane, centred on the origin.

    Elements are equally spaced starting on the +x axis and point radially
    outward.
    """

    n_elements: int
    radius: float
    frequency: Frequency
    element_angles: np.ndarray = field(init=False, repr=False)
    element_positions: np.ndarray = field(init=False, repr=False)
    element_boresights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise InvalidArgumentError(f"n_elements must be a positive integer, got {self.n_elements!r}")
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise InvalidArgumentError(f"radius must be positive, got {self.radius!r}")
        n = int(self.n_elements)
        object.__setattr__(self, "n_elements", n)
        angles = 2.0 * np.pi * np.arange(n) / n
        boresights = np.stack([np.cos(angles), np.sin(angles), np.zeros(n)], axis=1)
        for arr in (angles, boresights):
            arr.setflags(write=False)
        positions = self.radius * boresights
        positions.setflags(write=False)
        object.__setattr__(self, "element_angles", angles)
        object.__setattr__(self, "element_boresights", boresights)
        object.__setattr__(self, "element_positions", positions)

    @property
    def wavelength(self) -> float:
        return self.frequency.wavelength

    @property
    def wavenumber(self) -> float:
        return self.frequency.wavenumber

    @property
    def ka(self) -> float:
        return self.wavenumber * self.radius

    @property
    def diameter_mm(self) -> float:
        return 2e3 * self.radius

    def __eq__(self, other):
        if not isinstance(other, ArrayGeometry):
            return NotImplemented
        return (
            self.n_elements == other.n_elements
            and self.radius == other.radius
            and self.frequency == other.frequency
        )

    def __hash__(self):
        return hash((self.n_elements, self.radius, self.frequency))


def build_uniform_circular_array(n_elements: int, diameter_mm: float, frequency: Frequency) -> ArrayGeometry:
    """Build an ``n_elements`` ring of the given diameter (mm)."""
    if not isinstance(frequency, Frequency):
        raise InvalidArgumentError("frequency must be a Frequency")
    if not np.isfinite(diameter_mm) or diameter_mm <= 0:
        raise InvalidArgumentError(f"diameter must be positive, got {diameter_mm!r} mm")
    return ArrayGeometry(n_elements, diameter_mm * 1e-3 / 2.0, frequency)


DEFAULT_N_ELEMENTS = 12
DEFAULT_DIAMETER_MM = 19.38
DEFAULT_FREQUENCY_GHZ = 28.0


def default_geometry() -> ArrayGeometry:
    "The 12-element, 19.38 mm, 28 GHz ring."
    return build_uniform_circular_array(
        DEFAULT_N_ELEMENTS, DEFAULT_DIAMETER_MM, Frequency.from_ghz(DEFAULT_FREQUENCY_GHZ)
    )
