"""Mode-space algebra for circular arrays.

An excitation can be described either element by element (an
:class:`ExcitationVector`) or by its discrete azimuthal Fourier spectrum (a
:class:`ModeSpectrum`). With N elements the distinct mode indices are the
integers in (-N/2, N/2]; any other index aliases onto one of these.

Conventions: time dependence exp(+i w t), outgoing waves exp(-i k R). Unit
mode m places exp(i m phi_n) / N on element n, so a single-mode spectrum
{m: 1} decomposes back to exactly {m: 1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidArgumentError, ModeOutOfRangeError
from .geometry import ArrayGeometry


@dataclass(frozen=True, eq=False)
class ExcitationVector:
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=complex).reshape(-1)
        if w.size == 0:
            raise InvalidArgumentError("excitation must have at least one weight")
        if not np.all(np.isfinite(w)):
            raise InvalidArgumentError("excitation weights must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n_elements(self) -> int:
        return self.weights.size

    def __len__(self):
        return self.weights.size

    def __eq__(self, other):
        if not isinstance(other, ExcitationVector):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    def scaled(self, factor: complex) -> ExcitationVector:
        return ExcitationVector(self.weights * factor)

    def conj(self) -> ExcitationVector:
        return ExcitationVector(np.conj(self.weights))

    def rolled(self, shift: int) -> ExcitationVector:
        "Cyclic shift: element n takes the weight of element n - shift."
        return ExcitationVector(np.roll(self.weights, shift))


@dataclass(frozen=True)
class ModeSpectrum:
    """Complex coefficient per mode index.

    ``metadata`` carries free-form diagnostics (e.g. synthesis warnings) and
    is ignored when comparing spectra.
    """

    coefficients: Mapping[int, complex]
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        coeffs = {}
        for m, c in dict(self.coefficients).items():
            if int(m) != m:
                raise InvalidArgumentError(f"mode index must be an integer, got {m!r}")
            c = complex(c)
            if not (np.isfinite(c.real) and np.isfinite(c.imag)):
                raise InvalidArgumentError(f"coefficient for mode {m} is not finite")
            coeffs[int(m)] = c
        object.__setattr__(self, "coefficients", dict(sorted(coeffs.items())))

    def __getitem__(self, m: int) -> complex:
        return self.coefficients.get(m, 0j)

    def __iter__(self):
        return iter(self.coefficients.items())

    def __len__(self):
        return len(self.coefficients)

    @property
    def modes(self) -> list[int]:
        return list(self.coefficients)

    def scaled(self, factor: complex) -> ModeSpectrum:
        return ModeSpectrum({m: c * factor for m, c in self})

    def __add__(self, other: ModeSpectrum) -> ModeSpectrum:
        keys = set(self.coefficients) | set(other.coefficients)
        return ModeSpectrum({m: self[m] + other[m] for m in keys})

    def max_abs_difference(self, other: ModeSpectrum) -> float:
        keys = set(self.coefficients) | set(other.coefficients)
        return max((abs(self[m] - other[m]) for m in keys), default=0.0)


def mode_range(n_elements: int) -> range:
    "Distinct mode indices (-N/2, N/2] for an N-element ring."
    return range(-((n_elements - 1) // 2), n_elements // 2 + 1)


def check_mode(m: int, n_elements: int) -> None:
    if m not in mode_range(n_elements):
        raise ModeOutOfRangeError(m, n_elements)


def _roots_of_unity(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(2j * np.pi * k / n)


def _mode_phasors(m: int, n: int) -> np.ndarray:
    # index by (m * n_idx) mod N so that aliases m and m + N are bit-identical
    return _roots_of_unity(n)[(m * np.arange(n)) % n]


def phase_mode_excitation(m: int, geometry: ArrayGeometry) -> ExcitationVector:
    """Unit phase mode: w_n = exp(i m phi_n) / N."""
    n = geometry.n_elements
    return ExcitationVector(_mode_phasors(int(m), n) / n)


def oam_excitation(l: int, geometry: ArrayGeometry) -> ExcitationVector:  # noqa: E741
    """OAM vortex excitation of order ``l``.

    Same element weights as :func:`phase_mode_excitation`; the separate name
    marks intent (elevation vortex rather than azimuth beam shaping).
    """
    return phase_mode_excitation(l, geometry)


def mix_modes(spectrum: ModeSpectrum, geometry: ArrayGeometry) -> ExcitationVector:
    n = geometry.n_elements
    w = np.zeros(n, dtype=complex)
    for m, c in spectrum:
        check_mode(m, n)
        w += c * (_mode_phasors(m, n) / n)
    return ExcitationVector(w)


def mode_decompose(excitation: ExcitationVector, geometry: ArrayGeometry) -> ModeSpectrum:
    """Discrete Fourier analysis over element angles: c_m = sum_n w_n exp(-i m phi_n)."""
    n = geometry.n_elements
    if excitation.n_elements != n:
        raise InvalidArgumentError(
            f"excitation has {excitation.n_elements} weights but the array has {n} elements"
        )
    return ModeSpectrum(
        {m: complex(np.sum(excitation.weights * np.conj(_mode_phasors(m, n)))) for m in mode_range(n)}
    )


def steer(spectrum: ModeSpectrum, phi0: float) -> ModeSpectrum:
    """Rotate the beam by ``phi0`` (rad, counterclockwise) via c_m -> c_m exp(-i m phi0)."""
    return ModeSpectrum({m: c * np.exp(-1j * m * phi0) for m, c in spectrum}, dict(spectrum.metadata))
