"""Acceptance suite.

Each criterion prints one line ``[PASS]`` or ``[FAIL]`` with the measured
quantity, the tolerance and the runtime.  Run with ``pytest -s`` to see
the lines.
"""

import json
import time

import numpy as np
import pytest

from carray import (
    ElementPatternModel,
    ExcitationVector,
    SynthesisProblem,
    default_geometry,
    directivity,
    efield_on_plane,
    find_beam_peaks,
    mix_modes,
    mode_decompose,
    oam_excitation,
    phase_mode_excitation,
    preset,
    sample_pattern,
    steer,
    synthesize,
    time_snapshots,
    winding_number,
)
from carray import io as cio
from carray.bessel import bessel_j
from carray.cli import main
from carray.farfield import azimuth_cut, bessel_mode_reference, default_grid
from carray.modes import mode_range
from carray.nearfield import frame_rotation
from carray.synthesis import misfit

GEOM = default_geometry()
ISO = ElementPatternModel.isotropic()
MODEL = ElementPatternModel()
LAM = GEOM.frequency.wavelength
PRESET_NAMES = ("broadcast", "unicast-a", "unicast-b", "multicast-120")


def report(number, title, ok, detail, elapsed, budget):
    ok = ok and elapsed < budget
    status = "PASS" if ok else "FAIL"
    print(f"\n[{status}] criterion {number} {title}: {detail}; runtime {elapsed:.2f} s (< {budget:g} s)")
    return ok


def azimuth_offset_deg(phi_rad, target_deg):
    return abs((np.degrees(phi_rad) - target_deg + 180.0) % 360.0 - 180.0)


def test_criterion_1_mode_algebra():
    t0 = time.perf_counter()
    n = GEOM.n_elements
    modes = list(mode_range(n))
    phi = GEOM.element_angles
    ortho = 0.0
    for m in modes:
        for mp in modes:
            s = np.sum(np.exp(1j * (m - mp) * phi))
            ortho = max(ortho, abs(s - n * (m == mp)))
    rng = np.random.default_rng(1000)
    roundtrip = 0.0
    for _ in range(1000):
        w = rng.normal(size=n) + 1j * rng.normal(size=n)
        back = mix_modes(mode_decompose(ExcitationVector(w), GEOM), GEOM).weights
        roundtrip = max(roundtrip, np.max(np.abs(back - w)))
    elapsed = time.perf_counter() - t0
    ok = ortho < 1e-10 and roundtrip < 1e-12
    assert report(1, "mode algebra", ok,
                  f"orthogonality error {ortho:.2e} (< 1e-10), round-trip error {roundtrip:.2e} (< 1e-12)",
                  elapsed, 1.0)


def test_criterion_2_bessel_oracle():
    t0 = time.perf_counter()
    phi = np.arange(360) * np.pi / 180
    worst_margin = -np.inf
    failing = []
    for m in range(-5, 6):
        field = azimuth_cut(GEOM, ISO, phase_mode_excitation(m, GEOM), phi)
        residual = np.max(np.abs(field - bessel_mode_reference(m, GEOM.ka, phi)))
        bound = abs(bessel_j(m - 12, GEOM.ka)) + abs(bessel_j(m + 12, GEOM.ka)) + 1e-10
        worst_margin = max(worst_margin, residual - bound)
        if residual > bound:
            failing.append(f"m={m} residual {residual:.3e} > bound {bound:.3e}")
    elapsed = time.perf_counter() - t0
    detail = "all |m| <= 5 within bound" if not failing else "; ".join(failing)
    assert report(2, "Bessel oracle", not failing, f"{detail} (worst residual minus bound {worst_margin:.2e})",
                  elapsed, 1.0)


def test_criterion_3_rotation_theorem():
    t0 = time.perf_counter()
    spectrum = preset("unicast-a", GEOM, ISO)
    base = sample_pattern(GEOM, ISO, mix_modes(spectrum, GEOM))
    step = 360 // base.values.shape[1]
    errors = {}
    for phi0_deg in (30, 37, 180):
        # the azimuth grid has 1 degree spacing so 37 degrees is already a grid angle
        shift = int(round(phi0_deg / step))
        steered = sample_pattern(GEOM, ISO, mix_modes(steer(spectrum, np.radians(shift * step)), GEOM))
        errors[phi0_deg] = np.max(np.abs(steered.values - np.roll(base.values, shift, axis=1)))
    elapsed = time.perf_counter() - t0
    ok = all(e < 1e-9 for e in errors.values())
    detail = ", ".join(f"phi0={k} deg max error {v:.2e}" for k, v in errors.items()) + " (< 1e-9)"
    assert report(3, "rotation theorem", ok, detail, elapsed, 5.0)


def test_criterion_4_directivity_bands():
    t0 = time.perf_counter()
    parts = []
    ok = True
    for name in PRESET_NAMES:
        pat = sample_pattern(GEOM, MODEL, mix_modes(preset(name, GEOM, MODEL), GEOM))
        if name == "broadcast":
            d = directivity(pat).peak_dbi
            good = abs(d - 4.0) <= 1.5
            parts.append(f"{name} {d:.2f} dBi (4 +/- 1.5)")
        elif name.startswith("unicast"):
            rep = directivity(pat)
            off = azimuth_offset_deg(rep.peak_direction.phi, 0.0)
            good = abs(rep.peak_dbi - 8.75) <= 1.75 and off <= 1.0
            parts.append(f"{name} {rep.peak_dbi:.2f} dBi (8.75 +/- 1.75) at {off:.2f} deg from 0 (<= 1)")
        else:
            peaks = find_beam_peaks(pat, 3.0)
            levels = [lvl for _, lvl in peaks]
            offs = [min(azimuth_offset_deg(d.phi, t) for d, _ in peaks) for t in (0, 120, 240)]
            good = (len(peaks) == 3 and all(abs(v - 7.05) <= 1.75 for v in levels) and max(offs) <= 2.0)
            parts.append(f"{name} {len(peaks)} peaks at " + "/".join(f"{v:.2f}" for v in levels)
                         + f" dBi (7.05 +/- 1.75), worst offset {max(offs):.2f} deg (<= 2)")
        ok = ok and good
    elapsed = time.perf_counter() - t0
    assert report(4, "directivity bands", ok, "; ".join(parts), elapsed, 30.0)


def test_criterion_5_quadrature_convergence():
    t0 = time.perf_counter()
    fine_theta, fine_phi = default_grid(361, 720)
    changes = {}
    for name in PRESET_NAMES:
        ex = mix_modes(preset(name, GEOM, MODEL), GEOM)
        coarse = directivity(sample_pattern(GEOM, MODEL, ex)).peak_dbi
        fine = directivity(sample_pattern(GEOM, MODEL, ex, fine_theta, fine_phi)).peak_dbi
        changes[name] = abs(fine - coarse)
    elapsed = time.perf_counter() - t0
    ok = all(v < 0.01 for v in changes.values())
    detail = ", ".join(f"{k} {v:.2e} dB" for k, v in changes.items()) + " (< 0.01)"
    assert report(5, "quadrature convergence", ok, detail, elapsed, 60.0)


def test_criterion_6_oam_structure():
    t0 = time.perf_counter()
    problems = []
    for l in (0, 1, -1, 2, -2, 3, -3):
        grid = efield_on_plane(GEOM, MODEL, oam_excitation(l, GEOM), 2 * LAM, 2 * LAM, 201)
        mag = np.abs(grid.values)
        centre = (mag.shape[0] // 2, mag.shape[1] // 2)
        for rho in (0.5, 1.0, 1.5):
            w = winding_number(grid, rho * LAM)
            if w != l:
                problems.append(f"l={l} rho={rho} lambda winding {w}")
        if l != 0 and not mag[centre] < 1e-10 * mag.max():
            problems.append(f"l={l} axis ratio {mag[centre] / mag.max():.2e}")
        if l == 0 and mag[centre] != mag.max():
            problems.append("l=0 axis cell is not the maximum")
    elapsed = time.perf_counter() - t0
    detail = "windings equal l at all radii, axis nulls < 1e-10, l=0 axis maximum" if not problems else "; ".join(problems)
    assert report(6, "OAM structure", not problems, detail, elapsed, 30.0)


def test_criterion_7_snapshot_rotation():
    t0 = time.perf_counter()
    grid = efield_on_plane(GEOM, MODEL, oam_excitation(1, GEOM), 2 * LAM, 2 * LAM, 201)
    frames = time_snapshots(grid, 8)
    radii = np.linspace(0.5, 1.5, 5) * LAM
    steps = [np.degrees(frame_rotation(grid, frames[t], frames[t + 1], radii)) for t in range(7)]
    elapsed = time.perf_counter() - t0
    worst = max(abs(abs(s) - 45.0) for s in steps)
    ok = worst <= 2.0
    detail = (f"inter-frame rotation {min(steps):.2f}..{max(steps):.2f} deg (clockwise for l=1), "
              f"worst deviation from 45 is {worst:.2f} deg (<= 2)")
    assert report(7, "snapshot rotation", ok, detail, elapsed, 10.0)


def test_criterion_8_synthesis_properties():
    t0 = time.perf_counter()
    sym = synthesize(SynthesisProblem(np.radians([0, 120, 240]), GEOM, MODEL))
    scale = max(abs(c) for _, c in sym)
    leak = max(abs(c) for m, c in sym if m % 3) / scale

    targets = np.radians([10, 75, 200])
    levels = [1.0, 0.7, 0.4]
    base = synthesize(SynthesisProblem(targets, GEOM, MODEL, levels=levels))
    equiv = 0.0
    # rotations that map the 12-element ring onto itself
    for shift in (30, 90, 150, 270):
        phi0 = np.radians(shift)
        rotated = synthesize(SynthesisProblem(targets + phi0, GEOM, MODEL, levels=levels))
        equiv = max(equiv, rotated.max_abs_difference(steer(base, phi0)))

    rng = np.random.default_rng(8)
    monotone = True
    for _ in range(10):
        k = int(rng.integers(3, 20))
        tg = np.sort(rng.choice(360, size=k, replace=False)) * np.pi / 180
        prev = -np.inf
        for ridge in (1e-6, 1e-4, 1e-2, 1e-1, 1.0):
            p = SynthesisProblem(tg, GEOM, MODEL, ridge=ridge)
            r = misfit(p, synthesize(p))
            monotone = monotone and r >= prev - 1e-12
            prev = r
    elapsed = time.perf_counter() - t0
    ok = leak < 1e-10 and equiv < 1e-9 and monotone
    detail = (f"relative leakage outside m = 0 mod 3 {leak:.2e} (< 1e-10), "
              f"rotation equivariance error {equiv:.2e} (< 1e-9), residual monotone in ridge: {monotone}")
    assert report(8, "synthesis properties", ok, detail, elapsed, 5.0)


def test_criterion_9_cli_contract(tmp_path, monkeypatch, capsys):
    t0 = time.perf_counter()
    checks = {}

    def run(out, *args):
        return main(["--out", str(out), *args])

    run(tmp_path / "ex", "excite", "--preset", "unicast-b")
    run(tmp_path / "ex", "excite", "--oam", "-l", "1", "--name", "oam.json")
    ex = str(tmp_path / "ex" / "excitation.json")
    oam = str(tmp_path / "ex" / "oam.json")
    problem = tmp_path / "problem.json"
    problem.write_text(json.dumps({"targets_deg": [0, 120, 240]}))

    def snapshot(tag, threads):
        monkeypatch.setenv("CARRAY_THREADS", threads)
        out = tmp_path / tag
        codes = [run(out, "pattern", ex), run(out, "nearfield", oam, "--frames", "2"),
                 run(out, "synth", str(problem)), run(out, "decompose", ex)]
        return codes, {p.name: p.read_bytes() for p in sorted(out.iterdir())}

    codes_a, files_a = snapshot("a", "1")
    codes_b, files_b = snapshot("b", "1")
    codes_c, files_c = snapshot("c", "4")
    monkeypatch.delenv("CARRAY_THREADS")
    checks["byte-identical reruns"] = files_a == files_b == files_c and len(files_a) >= 6
    checks["exit 0 on success"] = codes_a == codes_b == codes_c == [0, 0, 0, 0]

    checks["exit 2 on out-of-range mode"] = run(tmp_path / "e2", "excite", "--phase", "-m", "7") == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"targets_deg": [0,, 1]}')
    checks["exit 2 on malformed input"] = run(tmp_path / "e2", "synth", str(bad)) == 2
    singular = tmp_path / "singular.json"
    singular.write_text(json.dumps({"targets_deg": [0, 90], "ridge": 0}))
    checks["exit 3 on singular system"] = run(tmp_path / "e3", "synth", str(singular)) == 3
    zero = tmp_path / "zero.json"
    zero.write_text(cio.dumps(cio.excitation_to_json(ExcitationVector(np.zeros(12)))))
    checks["exit 3 on zero pattern"] = run(tmp_path / "e3", "pattern", str(zero)) == 3

    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"geometry": {"n_elements": 12}, "colour": "red"}))
    out = tmp_path / "strict"
    code = main(["--config", str(cfg), "--out", str(out), "excite", "--phase", "-m", "0"])
    checks["strict config rejects unknown key"] = code == 2 and not out.exists()
    capsys.readouterr()
    elapsed = time.perf_counter() - t0
    failed = [k for k, v in checks.items() if not v]
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks hold" + (f"; failing: {', '.join(failed)}" if failed else "")
    assert report(9, "CLI contract", not failed, detail, elapsed, 10.0)
