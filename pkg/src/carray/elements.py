"""Analytic element-pattern models.

Patterns are field amplitudes (not power). The backward half-space of each
lobe is clipped to zero to mimic a ground plane behind the radiator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

KINDS = ("isotropic", "cosine_boresight", "dual_lobe")
_ALIASES = {"cosine": "cosine_boresight"}
_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class ElementPatternModel:
    """Element gain model.

    ``dual_lobe`` adds a zenith (+z) lobe of relative amplitude ``beta`` to the
    radial boresight lobe, so a ring of such elements radiates both along the
    azimuth plane and upward.
    """

    kind: str = "dual_lobe"
    q_radial: float = 1.5
    q_zenith: float = 2.0
    beta: float = 0.25

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise InvalidArgumentError(f"unknown element model {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        for name in ("q_radial", "q_zenith", "beta"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise InvalidArgumentError(f"{name} must be a finite non-negative number, got {value!r}")

    @classmethod
    def isotropic(cls) -> ElementPatternModel:
        return cls("isotropic", 0.0, 0.0, 0.0)

    @classmethod
    def cosine(cls, q_radial: float = 1.0) -> ElementPatternModel:
        return cls("cosine_boresight", q_radial, 0.0, 0.0)

    @property
    def max_gain(self) -> float:
        return 1.0 + self.beta if self.kind == "dual_lobe" else 1.0

    def gains(self, boresights: np.ndarray, directions: np.ndarray) -> np.ndarray:
        """Gain of every element toward shared observation directions.

        ``boresights`` is (N, 3); ``directions`` is (..., 3). Returns (..., N).
        """
        boresights = np.asarray(boresights, dtype=float)
        directions = np.asarray(directions, dtype=float)
        if self.kind == "isotropic":
            return np.ones(directions.shape[:-1] + (boresights.shape[0],))
        along = _dot(directions[..., None, :], boresights)
        up = directions[..., 2:3]
        return self._combine(along, up)

    def gains_per_element(self, boresights: np.ndarray, directions: np.ndarray) -> np.ndarray:
        """Gain of element n toward its own direction ``directions[..., n, :]``.

        Used in the near field, where each element sees the observation point
        from a different angle. Returns (..., N).
        """
        boresights = np.asarray(boresights, dtype=float)
        directions = np.asarray(directions, dtype=float)
        if self.kind == "isotropic":
            return np.ones(directions.shape[:-1])
        along = _dot(directions, boresights)
        return self._combine(along, directions[..., 2])

    def _combine(self, along, up):
        g = np.maximum(along, 0.0) ** self.q_radial
        if self.kind == "dual_lobe" and self.beta != 0.0:
            g = g + self.beta * np.maximum(up, 0.0) ** self.q_zenith
        return g


def _dot(a, b):
    # explicit component sum keeps results independent of array layout
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def element_gain(model: ElementPatternModel, boresight, direction) -> float:
    """Gain amplitude of one element toward one direction."""
    b = np.asarray(boresight, dtype=float)
    u = np.asarray(direction, dtype=float)
    if b.shape != (3,) or u.shape != (3,):
        raise InvalidArgumentError("boresight and direction must be 3-vectors")
    for name, v in (("boresight", b), ("direction", u)):
        if abs(np.linalg.norm(v) - 1.0) > _UNIT_TOL:
            raise InvalidArgumentError(f"{name} must be a unit vector (|v| = {np.linalg.norm(v):.12g})")
    return float(model.gains(b[None, :], u)[0])
