"""Reproduction checks against the embedded reference data.

Each check recomputes a published or derived number with the toolkit and
compares it with an independently computed expectation.  ``run_all`` is
what ``lssa validate`` prints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .experiments import (G_STANDARD, compare_to_reference, dead_band_onset_range,
                          prescribed_extension_sweep, ref_extension_125kpa,
                          ref_staticload_200kpa, static_load_sweep)
from .fitting import LSSA_STIFFNESS, differentiate, fit_hyperelastic, fit_polynomial, rank_models
from .force_model import (AreaProfile, LssaModel, calibrate_area_profile,
                          calibrate_effective_area, dead_band_pressure, free_extension,
                          net_force)
from .geometry import (ActuatorGeometry, ConstantAngle, LinearUnfold,
                       external_wall_area, internal_wall_area)
from .materials import (TPU85_MR5, Family, UniaxialSample, strain_energy,
                        uniaxial_nominal_stress)

# derivative coefficients printed with the stiffness law
PRINTED_STIFFNESS_SLOPE = (1.24443e-3, 2.5730e-2, 2.0789)
BLOCKED_FORCE = 112.0            # N at 125 kPa, y = 0
TEST_PRESSURE = 125e3            # Pa
REPORTED_STROKE = 40.0           # mm where force reaches ~0 at 125 kPa
NO_LOAD_FORCE_200KPA = 160.0     # N


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    expected: str
    computed: str
    tolerance: str
    passed: bool
    note: str = ""
    informational: bool = False     # reported for context, never fails

    def line(self) -> str:
        verdict = "INFO" if self.informational else ("PASS" if self.passed else "FAIL")
        s = (f"[{verdict}] {self.criterion}. {self.name}: expected {self.expected}, "
             f"computed {self.computed} ({self.tolerance})")
        return s + (f" -- {self.note}" if self.note else "")


def calibrated_constant_model() -> LssaModel:
    area = calibrate_effective_area(TEST_PRESSURE, 0.0, BLOCKED_FORCE, LSSA_STIFFNESS)
    return LssaModel(area_override=AreaProfile.constant(area), stiffness=LSSA_STIFFNESS)


def check_derivative() -> list[Check]:
    d = differentiate(LSSA_STIFFNESS).coefficients
    err = max(abs(a - b) for a, b in zip(d, PRINTED_STIFFNESS_SLOPE))
    return [Check(1, "stiffness derivative coefficients",
                  ", ".join(f"{c:.6g}" for c in PRINTED_STIFFNESS_SLOPE),
                  ", ".join(f"{c:.6g}" for c in d), "abs err <= 1e-7",
                  len(d) == 3 and err <= 1e-7)]


def check_anchor() -> list[Check]:
    area = calibrate_effective_area(TEST_PRESSURE, 0.0, BLOCKED_FORCE, LSSA_STIFFNESS)
    oracle = (BLOCKED_FORCE - 0.2246) / TEST_PRESSURE
    f0 = net_force(calibrated_constant_model(), TEST_PRESSURE, 0.0)
    return [
        Check(2, "blocked force at 125 kPa", "112 N", f"{f0:.10g} N", "abs err <= 1e-9",
              abs(f0 - BLOCKED_FORCE) <= 1e-9),
        Check(2, "calibrated effective area", f"{oracle:.5e} m^2", f"{area:.5e} m^2",
              "abs err <= 1e-7 m^2", abs(area - oracle) <= 1e-7),
    ]


def check_free_extension() -> list[Check]:
    m = calibrated_constant_model()
    res = free_extension(m, TEST_PRESSURE, 0.0)
    gap = (REPORTED_STROKE - res.displacement) / REPORTED_STROKE
    return [
        Check(3, "zero-load free extension at 125 kPa", "36.26 mm",
              f"{res.displacement:.4f} mm", "abs err <= 0.05 mm",
              not res.flagged and abs(res.displacement - 36.26) <= 0.05),
        Check(3, "stroke deviation from measured ~40 mm", "<= 10 %",
              f"{100 * gap:.2f} %", "reported gap", abs(gap) <= 0.10,
              "model-experiment gap: constant area under-predicts the stroke"),
    ]


def check_area_profile() -> list[Check]:
    ref = ref_extension_125kpa()
    profile = calibrate_area_profile(ref.points, LSSA_STIFFNESS)
    m = calibrated_constant_model().with_area(profile)
    sweep = prescribed_extension_sweep(m, TEST_PRESSURE, [p.displacement for p in ref.points])
    metrics = compare_to_reference(sweep, ref)
    oracle = [(p.force + sum(c * p.displacement**k for k, c in
                             enumerate(reversed(LSSA_STIFFNESS.coefficients)))) / p.pressure
              for p in ref.points]
    err = max(abs(a - b) for a, b in zip(profile.areas, oracle))
    return [
        Check(4, "forward sweep with calibrated profile",
              ", ".join(f"{p.force:g}" for p in ref.points) + " N",
              ", ".join(f"{p.force:.6g}" for p in sweep) + " N",
              "rmse < 1e-6 N", metrics.rmse < 1e-6),
        Check(4, "calibrated area profile",
              ", ".join(f"{a:.4e}" for a in oracle) + " m^2",
              ", ".join(f"{a:.4e}" for a in profile.areas) + " m^2",
              "abs err <= 1e-7 m^2", err <= 1e-7),
        Check(4, "area profile non-monotone flag", "raised",
              "raised" if profile.non_monotone else "not raised", "flag", profile.non_monotone,
              "back-computed area rises past 20 mm"),
    ]


def check_material_fit() -> list[Check]:
    lam = np.linspace(1.05, 7.6, 50)
    sig = uniaxial_nominal_stress(TPU85_MR5, lam)
    samples = [UniaxialSample(float(l), float(s)) for l, s in zip(lam, sig)]
    params, _ = fit_hyperelastic(samples, Family.MOONEY_RIVLIN5)
    rel = max(abs(a - b) / abs(b) for a, b in zip(params.constants, TPU85_MR5.constants))
    ranked = rank_models(samples, [Family.NEO_HOOKEAN, Family.MOONEY_RIVLIN2,
                                   Family.MOONEY_RIVLIN5])
    return [
        Check(5, "MR5 constant round trip", "TPU 85 constants", f"max rel err {rel:.2e}",
              "rel err < 1e-8", rel < 1e-8),
        Check(5, "model ranking", "mr5 first", f"{ranked[0][0].value} first", "exact",
              ranked[0][0] is Family.MOONEY_RIVLIN5),
    ]


def check_stiffness_fit() -> list[Check]:
    y = np.arange(0.0, 41.0)
    f = np.polyval(LSSA_STIFFNESS.coefficients, y)
    poly, _ = fit_polynomial(list(zip(y, f)), 3)
    err = max(abs(a - b) for a, b in zip(poly.coefficients, LSSA_STIFFNESS.coefficients))
    return [Check(6, "stiffness polynomial round trip", "4.1481e-4, 1.2865e-2, 2.0789, -0.2246",
                  ", ".join(f"{c:.6g}" for c in poly.coefficients), "abs err < 1e-9",
                  err < 1e-9)]


def check_static_load(g: float = G_STANDARD) -> list[Check]:
    m = calibrated_constant_model()
    ref = ref_staticload_200kpa(g)
    masses = (0.0, 1.0, 2.0, 3.5)
    bands = [dead_band_pressure(m, kg * g, 0.0) for kg in masses]
    p_grid = np.linspace(0.0, 200e3, 81)
    curves = [[p.force for p in static_load_sweep(m, kg * g, p_grid)] for kg in masses]
    ordered = all(all(a >= b for a, b in zip(c1, c2)) for c1, c2 in zip(curves, curves[1:]))
    f200 = static_load_sweep(m, 0.0, [200e3])[0].force
    dev = (f200 - NO_LOAD_FORCE_200KPA) / NO_LOAD_FORCE_200KPA
    lo, hi = dead_band_onset_range(ref)
    load_pts = [static_load_sweep(m, p.load, [p.pressure])[0] for p in ref.points]
    metrics = compare_to_reference(load_pts, ref)
    return [
        Check(7, "dead-band pressure increases with load", "strictly increasing",
              ", ".join(f"{b / 1e3:.2f}" for b in bands) + " kPa", "strict order",
              all(b > a for a, b in zip(bands, bands[1:]))),
        Check(7, "force-pressure curves ordered by load", "pointwise ordered",
              "ordered" if ordered else "crossing", "exact", ordered),
        Check(7, "no-load force at 200 kPa", "~160 N", f"{f200:.2f} N ({100 * dev:+.1f} %)",
              "deviation < 15 %", abs(dev) < 0.15, "reported model-experiment gap"),
        Check(7, "3.5 kg dead band", f"{lo / 1e3:.0f}-{hi / 1e3:.0f} kPa",
              f"{bands[-1] / 1e3:.2f} kPa", "reported, not asserted", True,
              "known gap: measured onset is later than the force balance predicts",
              informational=True),
        Check(7, "200 kPa loads 0/1/3.5 kg", ", ".join(f"{p.force:g}" for p in ref.points) + " N",
              ", ".join(f"{p.force:.2f}" for p in load_pts) + " N",
              "reported, not asserted", True, f"rmse {metrics.rmse:.2f} N, bias "
              f"{metrics.signed_bias:+.2f} N", informational=True),
    ]


def check_invariants() -> list[Check]:
    lam = np.linspace(1.01, 7.6, 200)
    h = 1e-6
    fd = (strain_energy(TPU85_MR5, lam + h) - strain_energy(TPU85_MR5, lam - h)) / (2 * h)
    sig = uniaxial_nominal_stress(TPU85_MR5, lam)
    fd_err = float(np.max(np.abs(fd - sig) / np.abs(sig)))

    w1, s1 = strain_energy(TPU85_MR5, 1.0), uniaxial_nominal_stress(TPU85_MR5, 1.0)

    g = ActuatorGeometry(0.02, 0.01, 0.015, 0.010, 0.005, 0.3)
    ident = 0.0
    for th in np.linspace(0, math.pi / 2, 33):
        lhs = external_wall_area(g, th) - internal_wall_area(g, th)
        rhs = 2 * math.pi * g.s * math.cos(th) * (g.r2i - g.r3i)
        ident = max(ident, abs(lhs - rhs) / max(abs(rhs), 1e-300) if rhs else abs(lhs))

    m = LssaModel(g, ConstantAngle())
    aff = 0.0
    for y in (0.0, 10.0, 25.0, 40.0):
        f1, f2 = net_force(m, 50e3, y), net_force(m, 150e3, y)
        slope = (f2 - f1) / 100e3
        aff = max(aff, abs(slope - m.effective_area(y)) / m.effective_area(y))

    cons = 0.0
    for model in (m, LssaModel(g, LinearUnfold()), calibrated_constant_model()):
        for p in (60e3, 125e3, 200e3):
            for load in (0.0, 10.0, 50.0):
                r = free_extension(model, p, load)
                if not r.flagged:
                    cons = max(cons, abs(net_force(model, p, r.displacement) - load))
    return [
        Check(8, "stress vs energy finite difference", "agreement",
              f"max rel err {fd_err:.2e}", "rel err <= 1e-6", fd_err <= 1e-6),
        Check(8, "W(1) and sigma(1)", "0, 0", f"{w1!r}, {s1!r}", "exact",
              w1 == 0.0 and s1 == 0.0),
        Check(8, "wall area identity", "A2-A3 = 2 pi S cos(theta)(R2i-R3i)",
              f"max rel err {ident:.2e}", "rel err <= 1e-12", ident <= 1e-12),
        Check(8, "net force affine in pressure", "slope = A_eff",
              f"max rel err {aff:.2e}", "rel err <= 1e-12", aff <= 1e-12),
        Check(8, "free extension consistency", "net_force(y*) = load",
              f"max err {cons:.2e} N", "abs err < 1e-6 N", cons < 1e-6),
    ]


def run_all(g: float = G_STANDARD) -> list[Check]:
    checks = []
    for fn in (check_derivative, check_anchor, check_free_extension, check_area_profile,
               check_material_fit, check_stiffness_fit):
        checks.extend(fn())
    checks.extend(check_static_load(g))
    checks.extend(check_invariants())
    return checks
