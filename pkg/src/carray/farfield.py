"""Far-field patterns, directivity and beam-peak detection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import find_peaks

from ._parallel import map_rows
from .bessel import bessel_j
from .elements import ElementPatternModel
from .errors import DegeneratePatternError, InvalidArgumentError, PreconditionError, RangeError
from .geometry import ArrayGeometry, Direction, unit_vector
from .modes import ExcitationVector

DEFAULT_N_THETA = 181
DEFAULT_N_PHI = 360
MIN_N_THETA = 91
MIN_N_PHI = 180


@dataclass(frozen=True, eq=False)
class RadiationPattern:
    theta_samples: np.ndarray
    phi_samples: np.ndarray
    values: np.ndarray
    geometry_ref: ArrayGeometry
    model_ref: Optional[ElementPatternModel] = None
    excitation_ref: Optional[ExcitationVector] = None

    def __post_init__(self):
        if self.values.shape != (len(self.theta_samples), len(self.phi_samples)):
            raise InvalidArgumentError("pattern values do not match the sample grid")
        if not np.all(np.isfinite(self.values)):
            raise InvalidArgumentError("pattern values must be finite")

    @property
    def power(self) -> np.ndarray:
        return np.abs(self.values) ** 2


@dataclass(frozen=True)
class DirectivityReport:
    peak_dbi: float
    peak_direction: Direction
    total_radiated: float


def _check_excitation(geometry: ArrayGeometry, excitation: ExcitationVector):
    if excitation.n_elements != geometry.n_elements:
        raise InvalidArgumentError(
            f"excitation has {excitation.n_elements} weights but the array has {geometry.n_elements} elements"
        )


def field_toward(geometry, model, excitation, directions) -> np.ndarray:
    """Array far field toward unit vectors ``directions`` of shape (..., 3).

    F(u) = sum_n w_n g_n(u) exp(+i k r_n . u)
    """
    _check_excitation(geometry, excitation)
    u = np.asarray(directions, dtype=float)
    gains = model.gains(geometry.element_boresights, u)
    r = geometry.element_positions
    u3 = u[..., None, :]
    phase = geometry.wavenumber * (u3[..., 0] * r[:, 0] + u3[..., 1] * r[:, 1] + u3[..., 2] * r[:, 2])
    return np.sum(excitation.weights * gains * np.exp(1j * phase), axis=-1)


def total_field(geometry: ArrayGeometry, model: ElementPatternModel, excitation: ExcitationVector,
                direction: Direction) -> complex:
    return complex(field_toward(geometry, model, excitation, direction.unit_vector()))


def azimuth_cut(geometry, model, excitation, phi) -> np.ndarray:
    "Far field in the array plane (theta = 90 deg) at azimuths ``phi``."
    return field_toward(geometry, model, excitation, unit_vector(np.pi / 2, np.asarray(phi, dtype=float)))


def gauss_legendre_theta(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Polar angles at Gauss-Legendre nodes in cos(theta), increasing, with weights.

    With odd ``n`` the equator is a node.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    theta = np.arccos(x[::-1])
    if n % 2:
        theta[n // 2] = np.pi / 2
    return theta, w[::-1].copy()


def uniform_phi(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def default_grid(n_theta: int = DEFAULT_N_THETA, n_phi: int = DEFAULT_N_PHI):
    return gauss_legendre_theta(n_theta)[0], uniform_phi(n_phi)


def _check_grid(name, grid, lo, hi, hi_inclusive):
    grid = np.asarray(grid, dtype=float).reshape(-1)
    if grid.size == 0:
        raise InvalidArgumentError(f"{name} grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise InvalidArgumentError(f"{name} grid must be strictly increasing")
    upper_ok = grid[-1] <= hi if hi_inclusive else grid[-1] < hi
    if grid[0] < lo or not upper_ok:
        raise InvalidArgumentError(f"{name} grid leaves its domain")
    return grid


def sample_pattern(geometry, model, excitation, theta_grid=None, phi_grid=None) -> RadiationPattern:
    """Sample the far field on a (theta, phi) grid. Defaults to the 181 x 360 grid."""
    if theta_grid is None or phi_grid is None:
        t0, p0 = default_grid()
        theta_grid = t0 if theta_grid is None else theta_grid
        phi_grid = p0 if phi_grid is None else phi_grid
    theta = _check_grid("theta", theta_grid, 0.0, np.pi, True)
    phi = _check_grid("phi", phi_grid, 0.0, 2.0 * np.pi, False)
    _check_excitation(geometry, excitation)
    u = unit_vector(theta[:, None], phi[None, :])
    values = map_rows(lambda block: field_toward(geometry, model, excitation, block), u)
    return RadiationPattern(theta, phi, values, geometry, model, excitation)


def _theta_weights(theta: np.ndarray) -> np.ndarray:
    """Quadrature weights for integrals of f(theta) sin(theta) d(theta)."""
    n = theta.size
    gl_theta, gl_w = gauss_legendre_theta(n)
    if np.allclose(theta, gl_theta, rtol=0, atol=1e-12):
        return gl_w
    # trapezoid in theta on a non Gauss-Legendre grid
    edges = np.concatenate([[0.0], 0.5 * (theta[1:] + theta[:-1]), [np.pi]])
    return np.cos(edges[:-1]) - np.cos(edges[1:])


def _phi_weights(phi: np.ndarray) -> np.ndarray:
    gaps = np.diff(np.concatenate([phi, [phi[0] + 2.0 * np.pi]]))
    return 0.5 * (gaps + np.roll(gaps, 1))


def _check_coverage(pattern: RadiationPattern):
    theta, phi = pattern.theta_samples, pattern.phi_samples
    if theta.size < MIN_N_THETA or phi.size < MIN_N_PHI:
        raise PreconditionError(
            f"grid {theta.size} x {phi.size} too coarse for directivity; need at least {MIN_N_THETA} x {MIN_N_PHI}"
        )
    pole_gap = np.radians(3.0)
    if theta[0] > pole_gap or theta[-1] < np.pi - pole_gap:
        raise PreconditionError("theta grid does not reach both poles")
    gaps = np.diff(np.concatenate([phi, [phi[0] + 2.0 * np.pi]]))
    if gaps.max() > np.radians(3.0):
        raise PreconditionError("phi grid does not cover the full circle")


def total_radiated(pattern: RadiationPattern) -> float:
    """Integral of |F|^2 over the sphere."""
    _check_coverage(pattern)
    wt = _theta_weights(pattern.theta_samples)
    wp = _phi_weights(pattern.phi_samples)
    total = float(wt @ pattern.power @ wp)
    if not total > 0:
        raise DegeneratePatternError("pattern is identically zero; directivity is undefined")
    return total


def _quadratic_peak(x, y, z):
    """Least-squares 2-D quadratic through samples; returns (x, y, value) of its maximum or None."""
    A = np.column_stack([np.ones_like(x), x, y, x * x, x * y, y * y])
    a, b, c, d, e, f = np.linalg.lstsq(A, z, rcond=None)[0]
    H = np.array([[2 * d, e], [e, 2 * f]])
    if not (H[0, 0] < 0 and np.linalg.det(H) > 0):
        return None
    xs, ys = np.linalg.solve(H, [-b, -c])
    return xs, ys, a + b * xs + c * ys + d * xs * xs + e * xs * ys + f * ys * ys


def _parabolic_peak(h, z_minus, z0, z_plus):
    "Vertex offset and value of the parabola through three equally spaced samples."
    denom = z_minus - 2.0 * z0 + z_plus
    if denom >= 0:
        return 0.0, z0
    delta = 0.5 * (z_minus - z_plus) / denom
    return delta * h, z0 - 0.25 * (z_minus - z_plus) * delta


def _refine_peak(pattern: RadiationPattern):
    """Grid maximum of |F|^2 refined by a quadratic fit over its 3 x 3 neighbourhood."""
    P = pattern.power
    theta, phi = pattern.theta_samples, pattern.phi_samples
    i, j = np.unravel_index(np.argmax(P), P.shape)
    best = (theta[i], phi[j], P[i, j])
    nphi = phi.size
    jj = [(j - 1) % nphi, j, (j + 1) % nphi]
    dphi = np.array([phi[jj[0]] - phi[j], 0.0, phi[jj[2]] - phi[j]])
    dphi = (dphi + np.pi) % (2 * np.pi) - np.pi
    if 0 < i < theta.size - 1:
        dth = theta[i - 1:i + 2] - theta[i]
        X, Y = np.meshgrid(dth, dphi, indexing="ij")
        Z = P[i - 1:i + 2][:, jj]
        fit = _quadratic_peak(X.ravel(), Y.ravel(), Z.ravel())
        if fit is not None:
            xs, ys, val = fit
            if abs(xs) <= max(abs(dth[0]), dth[2]) and abs(ys) <= max(abs(dphi[0]), dphi[2]) and val >= P[i, j]:
                best = (theta[i] + xs, phi[j] + ys, val)
    else:
        h = dphi[2]
        off, val = _parabolic_peak(h, P[i, jj[0]], P[i, j], P[i, jj[2]])
        best = (theta[i], phi[j] + off, max(val, P[i, j]))
    th, ph, val = best
    return Direction(float(np.clip(th, 0.0, np.pi)), float(ph)), float(val)


def _power_at(pattern: RadiationPattern, direction: Direction) -> float:
    if pattern.model_ref is not None and pattern.excitation_ref is not None:
        f = total_field(pattern.geometry_ref, pattern.model_ref, pattern.excitation_ref, direction)
        return abs(f) ** 2
    # bilinear interpolation of |F|^2, periodic in phi
    theta, phi = pattern.theta_samples, pattern.phi_samples
    P = pattern.power
    ext_phi = np.concatenate([phi, [phi[0] + 2 * np.pi]])
    ext_P = np.concatenate([P, P[:, :1]], axis=1)
    ph = direction.phi if direction.phi >= phi[0] else direction.phi + 2 * np.pi
    rows = np.array([np.interp(ph, ext_phi, row) for row in ext_P])
    return float(np.interp(direction.theta, theta, rows))


def directivity(pattern: RadiationPattern, direction="peak") -> DirectivityReport:
    """Directivity 4 pi |F(u)|^2 / integral(|F|^2) in dBi.

    ``direction`` is a :class:`Direction` or ``"peak"``; the peak is the grid
    maximum refined by a local quadratic fit.
    """
    total = total_radiated(pattern)
    if isinstance(direction, str):
        if direction != "peak":
            raise InvalidArgumentError(f"direction must be a Direction or 'peak', got {direction!r}")
        where, power = _refine_peak(pattern)
    else:
        where, power = direction, _power_at(pattern, direction)
    if power <= 0:
        return DirectivityReport(float("-inf"), where, total)
    return DirectivityReport(float(10 * np.log10(4 * np.pi * power / total)), where, total)


def _equator_power(pattern: RadiationPattern) -> np.ndarray:
    theta = pattern.theta_samples
    k = int(np.argmin(np.abs(theta - np.pi / 2)))
    if abs(theta[k] - np.pi / 2) < 1e-12 or theta.size == 1:
        return pattern.power[k]
    lo = k if theta[k] < np.pi / 2 else k - 1
    lo = min(max(lo, 0), theta.size - 2)
    t = (np.pi / 2 - theta[lo]) / (theta[lo + 1] - theta[lo])
    return (1 - t) * pattern.power[lo] + t * pattern.power[lo + 1]


def find_beam_peaks(pattern: RadiationPattern, min_prominence_db: float, floor_db: float = 10.0):
    """Beam maxima along the theta = 90 deg cut.

    A beam is a local maximum whose topographic prominence is at least
    ``min_prominence_db`` and which lies within ``floor_db`` of the strongest
    point on the cut. Returns ``[(Direction, level_dbi), ...]`` sorted by level,
    strongest first.
    """
    if not min_prominence_db > 0:
        raise InvalidArgumentError("min_prominence_db must be positive")
    total = total_radiated(pattern)
    cut = _equator_power(pattern)
    if not np.any(cut > 0):
        return []
    with np.errstate(divide="ignore"):
        level = 10 * np.log10(4 * np.pi * cut / total)
    level = np.maximum(level, level.max() - 300.0)
    n = level.size
    start = int(np.argmin(level))
    # start the unrolled cut at its global minimum so no peak straddles the seam
    unrolled = np.roll(level, -start)
    idx, _ = find_peaks(np.concatenate([unrolled, unrolled[:1]]), prominence=min_prominence_db)
    phi = pattern.phi_samples
    peaks = []
    for k in idx:
        j = (k + start) % n
        if level[j] < level.max() - floor_db:
            continue
        h = (phi[(j + 1) % n] - phi[j]) % (2 * np.pi)
        off, val = _parabolic_peak(h, level[(j - 1) % n], level[j], level[(j + 1) % n])
        peaks.append((Direction(np.pi / 2, float(phi[j] + off)), float(val)))
    peaks.sort(key=lambda p: -p[1])
    return peaks


BESSEL_MAX_ORDER = 16
BESSEL_MAX_ARG = 20.0


def bessel_mode_reference(m: int, ka: float, phi) -> complex:
    """Continuous-ring phase-mode far field i^m J_m(ka) exp(i m phi).

    Valid for |m| <= 16 and 0 < ka <= 20.
    """
    if abs(m) > BESSEL_MAX_ORDER or not (0 < ka <= BESSEL_MAX_ARG):
        raise RangeError(f"bessel reference validated for |m| <= {BESSEL_MAX_ORDER}, 0 < ka <= {BESSEL_MAX_ARG}")
    return (1j**m) * bessel_j(m, ka) * np.exp(1j * m * np.asarray(phi, dtype=float))
