"""``carray`` command-line interface.

Exit codes: 0 success, 2 usage or validation error, 3 numerical or degenerate
error. All inputs (config and data files) are validated before anything is
written.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import io as cio
from ._parallel import thread_count
from .errors import InvalidArgumentError, NumericalError
from .farfield import default_grid, directivity, find_beam_peaks, sample_pattern
from .geometry import Direction
from .modes import check_mode, mix_modes, mode_decompose, oam_excitation, phase_mode_excitation
from .nearfield import efield_on_plane, time_snapshots
from .synthesis import DEFAULT_RIDGE, PRESETS, SynthesisProblem, preset, synthesize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("carray")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", default=argparse.SUPPRESS, help="JSON run configuration")
    p.add_argument("--out", metavar="DIR", default=argparse.SUPPRESS, help="output directory")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="carray", description="Circular-array phase-mode and OAM beam modelling.",
                     parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("excite", parents=[common], help="write an excitation vector")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--phase", action="store_true", help="phase mode -m")
    kind.add_argument("--oam", action="store_true", help="OAM mode -l")
    kind.add_argument("--spectrum", metavar="FILE", help="mix the modes of a spectrum JSON")
    kind.add_argument("--preset", choices=PRESETS, help="named beam preset")
    p.add_argument("-m", type=int, dest="m", help="phase mode index")
    p.add_argument("-l", type=int, dest="l", help="OAM order")
    p.add_argument("--name", default="excitation.json")

    p = sub.add_parser("pattern", parents=[common], help="far-field pattern CSV and directivity report")
    p.add_argument("excitation")
    p.add_argument("--name", default="pattern", help="basename for <name>.csv and <name>_directivity.json")

    p = sub.add_parser("directivity", parents=[common], help="directivity report only")
    p.add_argument("excitation")
    p.add_argument("--theta-deg", type=float)
    p.add_argument("--phi-deg", type=float)
    p.add_argument("--name", default="directivity.json")

    p = sub.add_parser("nearfield", parents=[common], help="field on a plane above the array")
    p.add_argument("excitation")
    p.add_argument("--z-lambda", type=float, default=2.0, help="plane height in wavelengths (default 2)")
    p.add_argument("--frames", type=int, help="also write this many time snapshots")
    p.add_argument("--name", default="nearfield")

    p = sub.add_parser("synth", parents=[common], help="synthesise mode coefficients for beam targets")
    p.add_argument("problem")
    p.add_argument("--name", default="spectrum.json")

    p = sub.add_parser("decompose", parents=[common], help="mode spectrum of an excitation")
    p.add_argument("excitation")
    p.add_argument("--name", default="spectrum.json")

    p = sub.add_parser("peaks", parents=[common], help="azimuth beam peaks")
    p.add_argument("excitation")
    p.add_argument("--prominence-db", type=float, default=3.0)
    p.add_argument("--floor-db", type=float, default=10.0)
    p.add_argument("--name", default="peaks.json")
    return parser


def _load_config(args) -> cio.RunConfig:
    path = getattr(args, "config", None)
    data = cio.read_json(path) if path else {}
    return cio.parse_config(data)


def _out_dir(args, config) -> Path:
    out = getattr(args, "out", None) or config.output_dir or "."
    return Path(out)


def _load_excitation(path, config):
    ex = cio.excitation_from_json(cio.read_json(path), str(path))
    n = config.geometry.n_elements
    if ex.n_elements != n:
        raise InvalidArgumentError(f"{path}: excitation has {ex.n_elements} weights but the array has {n} elements")
    return ex


def _pattern(config, excitation):
    theta, phi = default_grid(config.grid.n_theta, config.grid.n_phi)
    return sample_pattern(config.geometry, config.element_model, excitation, theta, phi)


def cmd_excite(args, config, out):
    g = config.geometry
    if args.phase or args.oam:
        index = args.m if args.phase else args.l
        flag = "-m" if args.phase else "-l"
        if index is None:
            raise InvalidArgumentError(f"{'--phase' if args.phase else '--oam'} requires {flag}")
        check_mode(index, g.n_elements)
        ex = phase_mode_excitation(index, g) if args.phase else oam_excitation(index, g)
    elif args.spectrum:
        ex = mix_modes(cio.spectrum_from_json(cio.read_json(args.spectrum), args.spectrum), g)
    else:
        ex = mix_modes(preset(args.preset, g, config.element_model), g)
    return {out / args.name: cio.dumps(cio.excitation_to_json(ex)) + "\n"}


def cmd_pattern(args, config, out):
    pattern = _pattern(config, _load_excitation(args.excitation, config))
    report = directivity(pattern)
    return {
        out / f"{args.name}.csv": cio.pattern_csv(pattern),
        out / f"{args.name}_directivity.json": cio.dumps(cio.report_to_json(report)) + "\n",
    }


def cmd_directivity(args, config, out):
    pattern = _pattern(config, _load_excitation(args.excitation, config))
    if (args.theta_deg is None) != (args.phi_deg is None):
        raise InvalidArgumentError("give both --theta-deg and --phi-deg, or neither")
    where = "peak" if args.theta_deg is None else Direction.from_degrees(args.theta_deg, args.phi_deg)
    return {out / args.name: cio.dumps(cio.report_to_json(directivity(pattern, where))) + "\n"}


def cmd_nearfield(args, config, out):
    if not args.z_lambda > 0:
        raise InvalidArgumentError(f"--z-lambda must be positive, got {args.z_lambda}")
    if args.frames is not None and args.frames < 1:
        raise InvalidArgumentError("--frames must be a positive integer")
    ex = _load_excitation(args.excitation, config)
    g = config.geometry
    lam = g.wavelength
    grid = efield_on_plane(g, config.element_model, ex, args.z_lambda * lam,
                           config.grid.half_extent_lambda * lam, config.grid.nearfield_samples)
    files = {out / f"{args.name}.csv": cio.field_grid_csv(grid)}
    if args.frames:
        for t, frame in enumerate(time_snapshots(grid, args.frames)):
            files[out / f"{args.name}_t{t:03d}.csv"] = cio.snapshot_csv(grid, frame)
    return files


def _azimuth_deg(direction) -> float:
    # fold values a rounding error below 360 back to 0
    return float(round(np.degrees(direction.phi), 9) % 360.0)


def _wrap_deg(x):
    return (x + 180.0) % 360.0 - 180.0


def cmd_synth(args, config, out):
    prob = cio.problem_from_json(cio.read_json(args.problem), args.problem)
    g = config.geometry
    modes = prob.modes if prob.modes is not None else [m for m in range(-5, 6) if -g.n_elements / 2 < m <= g.n_elements / 2]
    problem = SynthesisProblem(
        np.radians(prob.targets_deg), g, config.element_model, modes, prob.levels,
        DEFAULT_RIDGE if prob.ridge is None else prob.ridge,
    )
    spectrum = synthesize(problem)
    pattern = _pattern(config, mix_modes(spectrum, g))
    peaks = find_beam_peaks(pattern, 3.0)
    peak_deg = [_azimuth_deg(d) for d, _ in peaks]
    matches = []
    for t in prob.targets_deg:
        if peak_deg:
            offsets = [_wrap_deg(p - t) for p in peak_deg]
            k = int(np.argmin(np.abs(offsets)))
            matches.append({"target_deg": t, "peak_phi_deg": peak_deg[k], "offset_deg": offsets[k]})
        else:
            matches.append({"target_deg": t, "peak_phi_deg": None, "offset_deg": None})
    report = {
        "peaks": [{"phi_deg": p, "level_dbi": lvl} for p, (_, lvl) in zip(peak_deg, peaks)],
        "matches": matches,
        "misfit": spectrum.metadata["misfit"],
        "warnings": spectrum.metadata["warnings"],
        "all_within_2deg": all(m["offset_deg"] is not None and abs(m["offset_deg"]) <= 2.0 for m in matches),
    }
    stem = Path(args.name).stem
    return {
        out / args.name: cio.dumps(cio.spectrum_to_json(spectrum)) + "\n",
        out / f"{stem}_report.json": cio.dumps(report, digits=12) + "\n",
    }


def cmd_decompose(args, config, out):
    spectrum = mode_decompose(_load_excitation(args.excitation, config), config.geometry)
    return {out / args.name: cio.dumps(cio.spectrum_to_json(spectrum)) + "\n"}


def cmd_peaks(args, config, out):
    pattern = _pattern(config, _load_excitation(args.excitation, config))
    peaks = find_beam_peaks(pattern, args.prominence_db, args.floor_db)
    data = {"peaks": [{"phi_deg": _azimuth_deg(d), "level_dbi": lvl} for d, lvl in peaks]}
    return {out / args.name: cio.dumps(data, digits=12) + "\n"}


COMMANDS = {
    "excite": cmd_excite,
    "pattern": cmd_pattern,
    "directivity": cmd_directivity,
    "nearfield": cmd_nearfield,
    "synth": cmd_synth,
    "decompose": cmd_decompose,
    "peaks": cmd_peaks,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        thread_count()
        config = _load_config(args)
        out = _out_dir(args, config)
        # everything is computed before the first file is written
        files = COMMANDS[args.command](args, config, out)
        for path, text in files.items():
            cio.write_text(path, text)
            print(path)
    except InvalidArgumentError as exc:
        print(f"carray: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"carray: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
