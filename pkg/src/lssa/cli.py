"""``lssa`` command line.

Results are written as CSV (to ``--output`` or standard output) followed by a
``#``-prefixed summary block on standard output.

Exit codes: 0 success, 1 usage, 2 data error, 3 fit/convergence/calibration
failure (including a failing ``validate``).
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .dataio import (load_config, load_force_csv, load_tensile_csv, open_output,
                     write_area_profile, write_csv, write_points)
from .errors import (CalibrationError, ConvergenceError, DataError, DomainError,
                     SingularFitError, UsageError)
from .experiments import prescribed_extension_sweep, static_load_sweep
from .fitting import differentiate, fit_hyperelastic, fit_polynomial, rank_models
from .force_model import (AreaProfile, OperatingPoint, axial_stiffness, calibrate_area_profile,
                          calibrate_effective_area, dead_band_pressure, free_extension,
                          net_force, pressure_components)
from .materials import Family, small_strain_moduli, stability_scan
from .validation import run_all

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_FAILURE = 0, 1, 2, 3
KPA = 1e3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _summary(lines: Sequence[str]):
    for line in lines:
        print(f"# {line}")


def parse_range(text: str) -> np.ndarray:
    """``start:stop:step`` with ``stop`` included when it falls on the grid."""
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"range must be start:stop:step, got {text!r}") from None
    if not all(math.isfinite(v) for v in (start, stop, step)) or step <= 0 or stop < start:
        raise UsageError("range needs finite start <= stop and a positive step")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def _nonneg(value: float, what: str) -> float:
    if not (math.isfinite(value) and value >= 0):
        raise UsageError(f"{what} must be non-negative")
    return value


def cmd_fit_material(args) -> int:
    samples = load_tensile_csv(args.input)
    family = Family.parse(args.model)
    params, rep = fit_hyperelastic(samples, family)
    with open_output(args.output) as out:
        write_csv(out, ("parameter", "value_mpa"),
                  params.as_dict().items())
    mu0, e0 = small_strain_moduli(params)
    lams = [s.stretch for s in samples]
    lo, hi = min(lams), max(lams)
    lines = [f"model: {family.value} ({family.name})"]
    lines += [f"{name} = {c:.6g} MPa" for name, c in params.as_dict().items()]
    lines += [f"samples: {rep.n_samples}, stretch range [{lo:.4g}, {hi:.4g}]",
              f"r_squared: {rep.r_squared:.8f}",
              f"residual_norm: {rep.residual_norm:.6g} MPa",
              f"condition_estimate: {rep.condition_estimate:.4g}",
              f"initial shear modulus: {mu0:.6g} MPa, Young's modulus: {e0:.6g} MPa"]
    if hi > lo and lo > 1e-4:
        st = stability_scan(params, lo, hi, 500)
        verdict = "stable" if st.stable else f"UNSTABLE from stretch {st.first_violation:.4g}"
        lines.append(f"stability on fitted range: {verdict} "
                     f"(min dsigma/dlambda {st.min_slope:.4g} MPa at {st.min_slope_stretch:.4g})")
    if args.rank:
        ranked = rank_models(samples, list(Family))
        lines.append("ranking: " + ", ".join(f"{f.value} (R2={r.r_squared:.6f})"
                                             for f, _, r in ranked))
    _summary(lines)
    return EXIT_OK


def cmd_fit_stiffness(args) -> int:
    samples = load_force_csv(args.input)
    poly, rep = fit_polynomial(samples, args.degree)
    deriv = differentiate(poly)
    n = poly.degree
    with open_output(args.output) as out:
        write_csv(out, ("power", "coefficient"),
                  [(n - k, c) for k, c in enumerate(poly.coefficients)])
    _summary([
        "F_K(y) [N, y in mm] = " + " + ".join(
            f"({c:.6g}) y^{n - k}" for k, c in enumerate(poly.coefficients)),
        "K_axial(y) [N/mm] = " + " + ".join(
            f"({c:.6g}) y^{deriv.degree - k}" for k, c in enumerate(deriv.coefficients)),
        f"samples: {rep.n_samples}, r_squared: {rep.r_squared:.8f}, "
        f"residual_norm: {rep.residual_norm:.6g} N",
    ])
    return EXIT_OK


def cmd_predict(args) -> int:
    cfg = load_config(args.config)
    m = cfg.require_model()
    p = _nonneg(args.pressure, "pressure") * KPA
    y = _nonneg(args.displacement, "displacement")
    load = _nonneg(args.load, "load") * cfg.g
    f = net_force(m, p, y)
    with open_output(args.output) as out:
        write_points(out, [OperatingPoint(p, y, f - load, load)])
    lines = [f"pressure: {p / KPA:g} kPa, displacement: {y:g} mm, load: {load:.6g} N",
             f"effective area: {m.effective_area(y):.6e} m^2",
             f"stiffness force F_K: {m.stiffness_force(y):.6g} N, "
             f"axial stiffness: {axial_stiffness(m, y):.6g} N/mm",
             f"net force: {f:.6g} N, available beyond load: {f - load:.6g} N"]
    if m.geometry is not None and m.area_override is None:
        f1, f2, f3 = pressure_components(m, p, y)
        lines.append(f"components: F1 = {f1:.6g} N, F2y = {f2:.6g} N, F3y = {f3:.6g} N")
    eq = free_extension(m, p, load)
    lines.append(f"free extension under load: {eq.displacement:.6g} mm ({eq.status.value})")
    lines.append(f"dead-band pressure at {y:g} mm: {dead_band_pressure(m, load, y) / KPA:.6g} kPa")
    _summary(lines)
    return EXIT_OK


def cmd_sweep_extension(args) -> int:
    cfg = load_config(args.config)
    p = _nonneg(args.pressure, "pressure") * KPA
    pts = prescribed_extension_sweep(cfg.require_model(), p, parse_range(args.range))
    with open_output(args.output) as out:
        write_points(out, pts)
    eq = free_extension(cfg.model, p, 0.0)
    _summary([f"prescribed-extension sweep at {p / KPA:g} kPa, {len(pts)} points",
              f"zero-force extension: {eq.displacement:.6g} mm ({eq.status.value})"])
    return EXIT_OK


def cmd_sweep_pressure(args) -> int:
    cfg = load_config(args.config)
    load = _nonneg(args.load, "load") * cfg.g
    grid = parse_range(args.range) * KPA
    pts = static_load_sweep(cfg.require_model(), load, grid, cfg.y_op)
    with open_output(args.output) as out:
        write_points(out, pts)
    _summary([f"static-load sweep, load {args.load:g} kg ({load:.6g} N) at y = {cfg.y_op:g} mm",
              f"dead-band pressure: {dead_band_pressure(cfg.model, load, cfg.y_op) / KPA:.6g} kPa"])
    return EXIT_OK


def cmd_calibrate(args) -> int:
    cfg = load_config(args.config)
    p = args.pressure * KPA
    if not p > 0:
        raise UsageError("calibration pressure must be positive")
    measured = load_force_csv(args.measured)
    stiffness = cfg.stiffness
    if len(measured) == 1:
        y, f = measured[0]
        profile = AreaProfile.constant(calibrate_effective_area(p, y, f, stiffness))
    else:
        profile = calibrate_area_profile(
            [OperatingPoint(p, y, f) for y, f in measured], stiffness)
    with open_output(args.output) as out:
        write_area_profile(out, profile)
    lines = [f"calibrated {len(profile.points)} area point(s) at {p / KPA:g} kPa",
             "areas [m^2]: " + ", ".join(f"{a:.5e}" for a in profile.areas)]
    if profile.non_monotone:
        lines.append("WARNING: effective area is not monotonically decreasing with extension")
    _summary(lines)
    return EXIT_OK


def cmd_validate(args) -> int:
    checks = run_all(args.g)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_OK if not failed else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lssa", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("fit-material", cmd_fit_material, "fit hyperelastic constants to tensile data")
    sp.add_argument("--input", required=True, help="CSV with strain,stress_mpa")
    sp.add_argument("--model", required=True, choices=[f.value for f in Family])
    sp.add_argument("--rank", action="store_true", help="also rank every model family")
    sp.add_argument("--output")

    sp = add("fit-stiffness", cmd_fit_stiffness, "fit the axial stiffness polynomial")
    sp.add_argument("--input", required=True, help="CSV with displacement_mm,force_n")
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--output")

    sp = add("predict", cmd_predict, "force at one operating point")
    sp.add_argument("--config", required=True)
    sp.add_argument("--pressure", type=float, required=True, help="kPa")
    sp.add_argument("--displacement", type=float, required=True, help="mm")
    sp.add_argument("--load", type=float, default=0.0, help="kg")
    sp.add_argument("--output")

    sp = add("sweep-extension", cmd_sweep_extension, "force vs prescribed extension")
    sp.add_argument("--config", required=True)
    sp.add_argument("--pressure", type=float, required=True, help="kPa")
    sp.add_argument("--range", required=True, help="start:stop:step in mm")
    sp.add_argument("--output")

    sp = add("sweep-pressure", cmd_sweep_pressure, "measured force vs pressure under a load")
    sp.add_argument("--config", required=True)
    sp.add_argument("--load", type=float, required=True, help="kg")
    sp.add_argument("--range", required=True, help="start:stop:step in kPa")
    sp.add_argument("--output")

    sp = add("calibrate", cmd_calibrate, "effective area profile from a measured curve")
    sp.add_argument("--config", required=True)
    sp.add_argument("--measured", required=True, help="CSV with displacement_mm,force_n")
    sp.add_argument("--pressure", type=float, required=True, help="kPa")
    sp.add_argument("--output")

    sp = add("validate", cmd_validate, "replay the reference experiments")
    sp.add_argument("--g", type=float, default=9.81, help=argparse.SUPPRESS)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (see lssa --help)")
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"lssa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"lssa: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (SingularFitError, CalibrationError, ConvergenceError) as exc:
        print(f"lssa: {exc}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())
