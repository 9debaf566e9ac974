"""Scalar near field on a plane above the ring, vortex charge and time snapshots.

Each element is a point source with its element pattern,
E(p) = sum_n w_n g_n(u_np) exp(-i k R_n) / (k R_n), R_n = |p - r_n|.
There are no reactive terms; the model targets the phase structure of the
radiated field a couple of wavelengths above the array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from ._parallel import map_rows
from .elements import ElementPatternModel
from .errors import InvalidArgumentError, LowMagnitudeError, RangeError, SingularityError
from .geometry import ArrayGeometry, Frequency
from .modes import ExcitationVector

DEFAULT_Z_LAMBDA = 2.0
DEFAULT_HALF_EXTENT_LAMBDA = 2.0
DEFAULT_SAMPLES = 201
MIN_CIRCLE_SAMPLES = 256
LOW_MAGNITUDE = 1e-8


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """Complex field sampled on the plane z = ``z_height``.

    ``values[i, j]`` is the field at (``x_samples[i]``, ``y_samples[j]``).
    """

    z_height: float
    x_samples: np.ndarray
    y_samples: np.ndarray
    values: np.ndarray
    frequency: Frequency

    def __post_init__(self):
        if not self.z_height > 0:
            raise InvalidArgumentError("z_height must be positive")
        if self.values.shape != (len(self.x_samples), len(self.y_samples)):
            raise InvalidArgumentError("field values do not match the sample grid")

    @property
    def max_magnitude(self) -> float:
        return float(np.abs(self.values).max())

    def interpolate(self, x, y) -> np.ndarray:
        """Bilinear interpolation of the complex field at points (x, y)."""
        pts = np.stack(np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float)), axis=-1)
        re = RegularGridInterpolator((self.x_samples, self.y_samples), self.values.real)
        im = RegularGridInterpolator((self.x_samples, self.y_samples), self.values.imag)
        return re(pts) + 1j * im(pts)


def efield_at_points(geometry: ArrayGeometry, model: ElementPatternModel, excitation: ExcitationVector,
                     points) -> np.ndarray:
    """Field at arbitrary points ``(..., 3)`` in metres."""
    if excitation.n_elements != geometry.n_elements:
        raise InvalidArgumentError(
            f"excitation has {excitation.n_elements} weights but the array has {geometry.n_elements} elements"
        )
    p = np.asarray(points, dtype=float)
    sep = p[..., None, :] - geometry.element_positions  # (..., N, 3)
    dist = np.sqrt(sep[..., 0] ** 2 + sep[..., 1] ** 2 + sep[..., 2] ** 2)
    if np.any(dist < geometry.wavelength / 100):
        raise SingularityError("observation point coincides with an element position")
    u = sep / dist[..., None]
    gains = model.gains_per_element(geometry.element_boresights, u)
    kr = geometry.wavenumber * dist
    return np.sum(excitation.weights * gains * np.exp(-1j * kr) / kr, axis=-1)


def symmetric_samples(half_extent: float, n: int) -> np.ndarray:
    "``n`` equally spaced samples on [-h, h]; with odd ``n`` the centre is exactly 0."
    c = (n - 1) / 2
    return half_extent * (np.arange(n) - c) / c


def efield_on_plane(geometry, model, excitation, z_height: float, half_extent: float,
                    samples_per_axis: int = DEFAULT_SAMPLES) -> FieldGrid:
    if not z_height > 0:
        raise InvalidArgumentError(f"z_height must be positive, got {z_height!r}")
    if not half_extent > 0:
        raise InvalidArgumentError(f"half_extent must be positive, got {half_extent!r}")
    if int(samples_per_axis) != samples_per_axis or samples_per_axis < 2:
        raise InvalidArgumentError("samples_per_axis must be an integer >= 2")
    xs = symmetric_samples(half_extent, int(samples_per_axis))
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    pts = np.stack([X, Y, np.full_like(X, z_height)], axis=-1)
    values = map_rows(lambda block: efield_at_points(geometry, model, excitation, block), pts)
    return FieldGrid(float(z_height), xs, xs.copy(), values, geometry.frequency)


def _circle(grid: FieldGrid, radius: float, n_samples: int):
    if not radius > 0:
        raise RangeError("circle radius must be positive")
    x, y = grid.x_samples, grid.y_samples
    if -radius < x[0] or radius > x[-1] or -radius < y[0] or radius > y[-1]:
        raise RangeError(f"circle of radius {radius:g} m does not fit inside the grid")
    ang = 2 * np.pi * np.arange(n_samples) / n_samples
    return ang, grid.interpolate(radius * np.cos(ang), radius * np.sin(ang))


def winding_number(grid: FieldGrid, circle_radius: float, n_samples: int = 720) -> int:
    """Topological charge of the field around the z axis.

    Counterclockwise circulation seen from +z counts as positive.
    """
    n_samples = max(int(n_samples), MIN_CIRCLE_SAMPLES)
    _, samples = _circle(grid, circle_radius, n_samples)
    if np.abs(samples).min() < LOW_MAGNITUDE * grid.max_magnitude:
        raise LowMagnitudeError("field nearly vanishes on the circle; phase is undefined there")
    phase = np.unwrap(np.angle(np.append(samples, samples[0])))
    return int(round((phase[-1] - phase[0]) / (2 * np.pi)))


def time_snapshots(grid: FieldGrid, n_frames: int) -> list[np.ndarray]:
    """Real field at ``n_frames`` equally spaced instants of one period.

    Frame t is Re{E exp(+i 2 pi t / n_frames)}; frame 0 is the instant of zero
    field phase.
    """
    if int(n_frames) != n_frames or n_frames < 1:
        raise InvalidArgumentError("n_frames must be a positive integer")
    n_frames = int(n_frames)
    return [np.real(grid.values * np.exp(2j * np.pi * t / n_frames)) for t in range(n_frames)]


def frame_rotation(grid: FieldGrid, frame_a: np.ndarray, frame_b: np.ndarray, radii,
                   n_angles: int = 720) -> float:
    """Rotation angle (rad, counterclockwise positive) that best maps frame_a onto frame_b.

    Both frames are resampled on circles of the given radii; the circular
    cross-correlation over angle is summed across radii and its maximum located
    with parabolic sub-sample refinement. Result lies in (-pi, pi].
    """
    ang = 2 * np.pi * np.arange(n_angles) / n_angles
    interp_a = RegularGridInterpolator((grid.x_samples, grid.y_samples), frame_a)
    interp_b = RegularGridInterpolator((grid.x_samples, grid.y_samples), frame_b)
    xcorr = np.zeros(n_angles)
    for r in np.atleast_1d(radii):
        pts = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=-1)
        a = interp_a(pts)
        b = interp_b(pts)
        a = a - a.mean()
        b = b - b.mean()
        # xcorr[s] = sum_k b[k] a[k - s]: b equals a rotated by s samples
        xcorr += np.real(np.fft.ifft(np.fft.fft(b) * np.conj(np.fft.fft(a))))
    s = int(np.argmax(xcorr))
    ym, y0, yp = xcorr[(s - 1) % n_angles], xcorr[s], xcorr[(s + 1) % n_angles]
    denom = ym - 2 * y0 + yp
    delta = 0.5 * (ym - yp) / denom if denom < 0 else 0.0
    rot = (s + delta) * 2 * np.pi / n_angles
    return float((rot + np.pi) % (2 * np.pi) - np.pi) if rot > np.pi else float(rot)
