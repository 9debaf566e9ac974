"""File formats: JSON for spectra, excitations, reports and configs; CSV for grids.

Spectra and excitations carry 17 significant digits so that IEEE-754 doubles
round-trip exactly. Bulk CSV grids use 9.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .elements import ElementPatternModel
from .errors import InvalidArgumentError
from .farfield import DEFAULT_N_PHI, DEFAULT_N_THETA, DirectivityReport, RadiationPattern
from .geometry import (
    DEFAULT_DIAMETER_MM,
    DEFAULT_FREQUENCY_GHZ,
    DEFAULT_N_ELEMENTS,
    ArrayGeometry,
    Frequency,
    build_uniform_circular_array,
)
from .modes import ExcitationVector, ModeSpectrum
from .nearfield import DEFAULT_HALF_EXTENT_LAMBDA, DEFAULT_SAMPLES, FieldGrid


class ParseError(InvalidArgumentError):
    pass


def _num(x: float, digits: int) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgumentError(f"cannot serialise non-finite number {x!r}")
    return f"{x:.{digits}g}"


def dumps(obj: Any, digits: int = 17, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats printed to ``digits`` significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj, digits)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, digits, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, dict) and len(v) <= 3 for v in obj):
            # small records one per line
            items = [pad + "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(x, digits)}" for k, x in v.items()) + "}"
                     for v in obj]
        else:
            items = [pad + dumps(v, digits, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text, str(path))


def write_text(path, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _require(mapping, key, kind, where):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ParseError(f"{where}: missing key {key!r}")
    value = mapping[key]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    raise ParseError(f"{where}: key {key!r} must be {'an integer' if kind is int else 'a number'}")


def _strict(mapping, allowed, where):
    if not isinstance(mapping, dict):
        raise ParseError(f"{where}: expected a JSON object")
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ParseError(f"{where}: unknown key(s) {', '.join(map(repr, unknown))}")


# spectra and excitations

def spectrum_to_json(spectrum: ModeSpectrum) -> dict:
    return {"modes": [{"m": m, "re": c.real, "im": c.imag} for m, c in spectrum]}


def spectrum_from_json(data, where="spectrum") -> ModeSpectrum:
    _strict(data, {"modes"}, where)
    if not isinstance(data.get("modes"), list):
        raise ParseError(f"{where}: 'modes' must be a list")
    coeffs = {}
    for i, entry in enumerate(data["modes"]):
        loc = f"{where}: modes[{i}]"
        _strict(entry, {"m", "re", "im"}, loc)
        m = _require(entry, "m", int, loc)
        if m in coeffs:
            raise ParseError(f"{loc}: duplicate mode {m}")
        coeffs[m] = complex(_require(entry, "re", float, loc), _require(entry, "im", float, loc))
    return ModeSpectrum(coeffs)


def excitation_to_json(excitation: ExcitationVector) -> dict:
    return {
        "n_elements": excitation.n_elements,
        "weights": [{"re": w.real, "im": w.imag} for w in excitation.weights],
    }


def excitation_from_json(data, where="excitation") -> ExcitationVector:
    _strict(data, {"n_elements", "weights"}, where)
    n = _require(data, "n_elements", int, where)
    weights = data.get("weights")
    if not isinstance(weights, list):
        raise ParseError(f"{where}: 'weights' must be a list")
    if len(weights) != n:
        raise ParseError(f"{where}: n_elements is {n} but {len(weights)} weights are given")
    vals = []
    for i, entry in enumerate(weights):
        loc = f"{where}: weights[{i}]"
        _strict(entry, {"re", "im"}, loc)
        vals.append(complex(_require(entry, "re", float, loc), _require(entry, "im", float, loc)))
    return ExcitationVector(np.array(vals, dtype=complex))


def report_to_json(report: DirectivityReport) -> dict:
    return {
        "peak_dbi": report.peak_dbi,
        "theta_deg": float(np.degrees(report.peak_direction.theta)),
        "phi_deg": float(np.degrees(report.peak_direction.phi)),
    }


# CSV grids

def _csv(header, columns, digits=9) -> str:
    lines = [",".join(header)]
    fmt = f"{{:.{digits}g}}"
    for row in zip(*columns):
        lines.append(",".join(fmt.format(v) for v in row))
    return "\n".join(lines) + "\n"


def pattern_csv(pattern: RadiationPattern) -> str:
    """Rows ordered theta-outer; ``mag_db`` is relative to the pattern maximum."""
    T, P = np.meshgrid(pattern.theta_samples, pattern.phi_samples, indexing="ij")
    v = pattern.values.ravel()
    mag = np.abs(v)
    peak = mag.max()
    with np.errstate(divide="ignore"):
        mag_db = 20 * np.log10(mag / peak) if peak > 0 else np.full(mag.shape, -300.0)
    mag_db = np.maximum(mag_db, -300.0)
    return _csv(
        ["theta_deg", "phi_deg", "re", "im", "mag_db", "phase_deg"],
        [np.degrees(T.ravel()), np.degrees(P.ravel()), v.real, v.imag, mag_db, np.degrees(np.angle(v))],
    )


def _normalised(grid: FieldGrid) -> np.ndarray:
    peak = grid.max_magnitude
    return grid.values / peak if peak > 0 else grid.values


def field_grid_csv(grid: FieldGrid) -> str:
    """Rows ordered x-outer; field normalised to a grid maximum magnitude of 1."""
    X, Y = np.meshgrid(grid.x_samples, grid.y_samples, indexing="ij")
    v = _normalised(grid).ravel()
    return _csv(
        ["x_mm", "y_mm", "re", "im", "mag_norm", "phase_deg"],
        [1e3 * X.ravel(), 1e3 * Y.ravel(), v.real, v.imag, np.abs(v), np.degrees(np.angle(v))],
    )


def snapshot_csv(grid: FieldGrid, frame: np.ndarray) -> str:
    X, Y = np.meshgrid(grid.x_samples, grid.y_samples, indexing="ij")
    peak = grid.max_magnitude
    f = frame / peak if peak > 0 else frame
    return _csv(["x_mm", "y_mm", "field_norm"], [1e3 * X.ravel(), 1e3 * Y.ravel(), f.ravel()])


def read_csv_table(path) -> tuple[list[str], np.ndarray]:
    "Header and numeric body of a CSV written by this module."
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    body = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, body


# run configuration

_GEOMETRY_KEYS = {"n_elements", "diameter_mm", "frequency_ghz"}
_ELEMENT_KEYS = {"type", "q_radial", "q_zenith", "beta"}
_GRID_KEYS = {"n_theta", "n_phi", "nearfield_samples", "half_extent_lambda"}
_CONFIG_KEYS = {"geometry", "element_model", "output_dir", "grid"}


@dataclass(frozen=True)
class GridOverrides:
    n_theta: int = DEFAULT_N_THETA
    n_phi: int = DEFAULT_N_PHI
    nearfield_samples: int = DEFAULT_SAMPLES
    half_extent_lambda: float = DEFAULT_HALF_EXTENT_LAMBDA


@dataclass(frozen=True)
class RunConfig:
    geometry: ArrayGeometry
    element_model: ElementPatternModel = field(default_factory=ElementPatternModel)
    output_dir: str | None = None
    grid: GridOverrides = field(default_factory=GridOverrides)


def _positive(value, name, where, integer=False):
    if integer:
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ParseError(f"{where}: {name} must be a positive integer")
        return value
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not value > 0:
        raise ParseError(f"{where}: {name} must be a positive number")
    return float(value)


def parse_config(data) -> RunConfig:
    """Validate a config object. Unknown keys anywhere are rejected."""
    _strict(data, _CONFIG_KEYS, "config")
    geo = data.get("geometry", {})
    _strict(geo, _GEOMETRY_KEYS, "config.geometry")
    n = _positive(geo.get("n_elements", DEFAULT_N_ELEMENTS), "n_elements", "config.geometry", integer=True)
    diameter = _positive(geo.get("diameter_mm", DEFAULT_DIAMETER_MM), "diameter_mm", "config.geometry")
    freq = _positive(geo.get("frequency_ghz", DEFAULT_FREQUENCY_GHZ), "frequency_ghz", "config.geometry")
    geometry = build_uniform_circular_array(n, diameter, Frequency.from_ghz(freq))

    em = data.get("element_model", {})
    _strict(em, _ELEMENT_KEYS, "config.element_model")
    defaults = ElementPatternModel()
    kind = em.get("type", defaults.kind)
    if not isinstance(kind, str):
        raise ParseError("config.element_model: type must be a string")
    params = {}
    for key in ("q_radial", "q_zenith", "beta"):
        value = em.get(key, getattr(defaults, key))
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"config.element_model: {key} must be a number")
        params[key] = float(value)
    try:
        model = ElementPatternModel(kind, **params)
    except InvalidArgumentError as exc:
        raise ParseError(f"config.element_model: {exc}") from exc

    out = data.get("output_dir")
    if out is not None and not isinstance(out, str):
        raise ParseError("config: output_dir must be a string")

    gr = data.get("grid", {})
    _strict(gr, _GRID_KEYS, "config.grid")
    base = GridOverrides()
    grid = GridOverrides(
        n_theta=_positive(gr.get("n_theta", base.n_theta), "n_theta", "config.grid", integer=True),
        n_phi=_positive(gr.get("n_phi", base.n_phi), "n_phi", "config.grid", integer=True),
        nearfield_samples=_positive(gr.get("nearfield_samples", base.nearfield_samples),
                                    "nearfield_samples", "config.grid", integer=True),
        half_extent_lambda=_positive(gr.get("half_extent_lambda", base.half_extent_lambda),
                                     "half_extent_lambda", "config.grid"),
    )
    return RunConfig(geometry, model, out, grid)


def config_to_json(config: RunConfig) -> dict:
    g, m = config.geometry, config.element_model
    data = {
        "geometry": {
            "n_elements": g.n_elements,
            "diameter_mm": g.diameter_mm,
            "frequency_ghz": g.frequency.hertz / 1e9,
        },
        "element_model": {"type": m.kind, "q_radial": m.q_radial, "q_zenith": m.q_zenith, "beta": m.beta},
        "grid": {
            "n_theta": config.grid.n_theta,
            "n_phi": config.grid.n_phi,
            "nearfield_samples": config.grid.nearfield_samples,
            "half_extent_lambda": config.grid.half_extent_lambda,
        },
    }
    if config.output_dir is not None:
        data["output_dir"] = config.output_dir
    return data


# synthesis problems

_PROBLEM_KEYS = {"targets_deg", "levels", "modes", "ridge"}


@dataclass(frozen=True)
class ProblemSpec:
    targets_deg: list
    levels: list | None
    modes: list | None
    ridge: float | None


def problem_from_json(data, where="problem") -> ProblemSpec:
    _strict(data, _PROBLEM_KEYS, where)
    targets = data.get("targets_deg")
    if not isinstance(targets, list) or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in targets):
        raise ParseError(f"{where}: targets_deg must be a list of numbers")
    levels = data.get("levels")
    if levels is not None and (not isinstance(levels, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in levels)):
        raise ParseError(f"{where}: levels must be a list of numbers")
    modes = data.get("modes")
    if modes is not None and (not isinstance(modes, list) or not all(isinstance(m, int) and not isinstance(m, bool) for m in modes)):
        raise ParseError(f"{where}: modes must be a list of integers")
    ridge = data.get("ridge")
    if ridge is not None and (not isinstance(ridge, (int, float)) or isinstance(ridge, bool)):
        raise ParseError(f"{where}: ridge must be a number")
    return ProblemSpec([float(t) for t in targets], levels, modes, None if ridge is None else float(ridge))
