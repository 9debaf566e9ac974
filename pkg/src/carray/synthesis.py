"""Least-squares synthesis of mode-mixing coefficients and named presets."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .elements import ElementPatternModel
from .errors import InvalidArgumentError, SingularSystemError, UnknownPresetError
from .farfield import azimuth_cut
from .geometry import ArrayGeometry
from .modes import ModeSpectrum, check_mode, phase_mode_excitation

logger = logging.getLogger(__name__)

DEFAULT_RIDGE = 1e-6
BEAM_MODES = tuple(range(-5, 6))


@dataclass(frozen=True)
class SynthesisProblem:
    """Beam targets in the azimuth plane.

    ``targets`` are azimuths in radians; ``levels`` are desired field
    amplitudes (linear), default 1 for every target.
    """

    targets: Sequence[float]
    geometry: ArrayGeometry
    model: ElementPatternModel
    mode_set: Sequence[int] = BEAM_MODES
    levels: Sequence[complex] | None = None
    ridge: float = DEFAULT_RIDGE

    def __post_init__(self):
        targets = np.mod(np.asarray(self.targets, dtype=float).reshape(-1), 2 * np.pi)
        if targets.size == 0:
            raise InvalidArgumentError("at least one target direction is required")
        if not np.all(np.isfinite(targets)):
            raise InvalidArgumentError("target angles must be finite")
        if np.unique(targets).size != targets.size:
            raise InvalidArgumentError("target angles must be pairwise distinct")
        levels = np.ones(targets.size, dtype=complex) if self.levels is None else np.asarray(self.levels, dtype=complex).reshape(-1)
        if levels.size != targets.size:
            raise InvalidArgumentError(f"{levels.size} levels given for {targets.size} targets")
        modes = [int(m) for m in self.mode_set]
        if not modes:
            raise InvalidArgumentError("mode set is empty")
        if len(set(modes)) != len(modes):
            raise InvalidArgumentError("mode set contains duplicates")
        for m in modes:
            check_mode(m, self.geometry.n_elements)
        if not (np.isfinite(self.ridge) and self.ridge >= 0):
            raise InvalidArgumentError("ridge must be a non-negative number")
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "mode_set", tuple(modes))


def mode_basis(problem: SynthesisProblem, phi=None) -> np.ndarray:
    """Matrix B[k, j]: azimuth-plane far field of unit mode ``mode_set[j]`` at ``phi[k]``."""
    phi = problem.targets if phi is None else np.asarray(phi, dtype=float)
    g, model = problem.geometry, problem.model
    return np.column_stack([azimuth_cut(g, model, phase_mode_excitation(m, g), phi) for m in problem.mode_set])


def synthesize(problem: SynthesisProblem) -> ModeSpectrum:
    """Ridge-regularised least-squares fit of mode coefficients to the targets.

    Minimises sum_k |sum_m c_m B_m(phi_k) - t_k|^2 + ridge * ||c||^2 through the
    normal equations. The returned spectrum's metadata records the data misfit
    and, when there are more targets than modes, an underdetermined-fit warning.
    """
    B = mode_basis(problem)
    t = problem.levels
    normal = B.conj().T @ B + problem.ridge * np.eye(B.shape[1])
    rhs = B.conj().T @ t
    if problem.ridge == 0 and np.linalg.matrix_rank(normal) < B.shape[1]:
        raise SingularSystemError(
            "normal equations are rank deficient with ridge = 0; use a ridge > 0 (e.g. 1e-6)"
        )
    try:
        coeffs = np.linalg.solve(normal, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"normal equations are singular ({exc}); use a ridge > 0") from exc
    misfit = float(np.sum(np.abs(B @ coeffs - t) ** 2))
    metadata = {"misfit": misfit, "ridge": problem.ridge, "warnings": []}
    if len(problem.targets) > len(problem.mode_set):
        msg = (f"underdetermined fit: {len(problem.targets)} targets exceed "
               f"{len(problem.mode_set)} modes")
        metadata["warnings"].append(msg)
        logger.warning(msg)
    return ModeSpectrum(dict(zip(problem.mode_set, coeffs)), metadata)


def misfit(problem: SynthesisProblem, spectrum: ModeSpectrum) -> float:
    "Data misfit sum_k |F(phi_k) - t_k|^2 of a spectrum against the problem targets."
    c = np.array([spectrum[m] for m in problem.mode_set])
    return float(np.sum(np.abs(mode_basis(problem) @ c - problem.levels) ** 2))


def raised_cosine_taper(modes: Sequence[int], n_elements: int) -> dict[int, float]:
    "0.5 * (1 + cos(pi m / (N/2))), reaching zero at the Nyquist mode."
    half = n_elements / 2
    return {m: 0.5 * (1 + np.cos(np.pi * m / half)) for m in modes}


PRESETS = ("broadcast", "unicast-a", "unicast-b", "multicast-120")


def preset(name: str, geometry: ArrayGeometry, model: ElementPatternModel) -> ModeSpectrum:
    """Named excitation spectra.

    The unicast and multicast sets are reconstructions of the beam classes,
    not published coefficients: ``unicast-a`` weights modes -5..5 equally,
    ``unicast-b`` applies a raised-cosine taper over the same modes, and
    ``multicast-120`` is synthesised for beams at 0, 120 and 240 degrees.
    """
    modes = [m for m in BEAM_MODES if -geometry.n_elements / 2 < m <= geometry.n_elements / 2]
    if name == "broadcast":
        return ModeSpectrum({0: 1.0})
    if name == "unicast-a":
        return ModeSpectrum({m: 1.0 for m in modes})
    if name == "unicast-b":
        return ModeSpectrum(raised_cosine_taper(modes, geometry.n_elements))
    if name == "multicast-120":
        targets = np.radians([0.0, 120.0, 240.0])
        return synthesize(SynthesisProblem(targets, geometry, model, modes))
    raise UnknownPresetError(f"unknown preset {name!r}; valid presets: {', '.join(PRESETS)}")
