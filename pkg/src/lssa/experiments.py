"""Virtual replications of the prescribed-extension and static-load rigs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import numpy as np

from .dataio import parse_table
from .errors import UsageError
from .force_model import LssaModel, OperatingPoint, net_force

G_STANDARD = 9.81

SWEPT = ("displacement", "pressure", "load")


@dataclass(frozen=True)
class ReferenceDataset:
    name: str
    points: tuple[OperatingPoint, ...]
    source: str
    swept: str = "displacement"
    approximate: bool = True
    tolerance: float = 2.0          # N, reading tolerance of prose-stated values
    annotations: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.points:
            raise UsageError("reference dataset is empty")
        if self.swept not in SWEPT:
            raise UsageError(f"unknown swept variable {self.swept!r}")
        xs = [getattr(p, self.swept) for p in self.points]
        if any(b < a for a, b in zip(xs, xs[1:])):
            raise UsageError("reference points must be sorted by the swept variable")


def _load_embedded(filename: str, swept: str, g: float) -> ReferenceDataset:
    text = resources.files("lssa").joinpath("data").joinpath(filename).read_text(encoding="utf-8")
    if swept == "load":
        table = parse_table(text, ("pressure_kpa", "load_kg", "force_n"), filename)
        pts = tuple(OperatingPoint(r["pressure_kpa"] * 1e3, 0.0, r["force_n"], r["load_kg"] * g)
                    for _, r in table.rows)
    else:
        table = parse_table(text, ("pressure_kpa", "displacement_mm", "force_n"), filename)
        pts = tuple(OperatingPoint(r["pressure_kpa"] * 1e3, r["displacement_mm"], r["force_n"])
                    for _, r in table.rows)
    meta = table.metadata
    return ReferenceDataset(
        name=meta.get("name", filename.rsplit(".", 1)[0]),
        points=pts,
        source=meta.get("source", ""),
        swept=swept,
        approximate=meta.get("approximate", "true").lower() == "true",
        tolerance=float(meta.get("tolerance_n", 2.0)),
        annotations={k: v for k, v in meta.items()
                     if k not in ("name", "source", "approximate", "tolerance_n")},
    )


def ref_extension_125kpa() -> ReferenceDataset:
    return _load_embedded("ref_extension_125kPa.csv", "displacement", G_STANDARD)


def ref_staticload_200kpa(g: float = G_STANDARD) -> ReferenceDataset:
    return _load_embedded("ref_staticload_200kPa.csv", "load", g)


def dead_band_onset_range(dataset: ReferenceDataset) -> tuple[float, float]:
    """Measured 3.5 kg dead-band onset (Pa) as ``(low, high)``."""
    lo, hi = dataset.annotations["dead_band_onset_kpa_3.5kg"].split("-")
    return float(lo) * 1e3, float(hi) * 1e3


@dataclass(frozen=True)
class ComparisonMetrics:
    rmse: float
    max_abs_error: float
    signed_bias: float
    n: int


def prescribed_extension_sweep(m: LssaModel, pressure: float,
                               y_grid: Sequence[float]) -> list[OperatingPoint]:
    """Force at each prescribed extension (crosshead-driven test)."""
    return [OperatingPoint(pressure, float(y), net_force(m, pressure, y)) for y in y_grid]


def static_load_sweep(m: LssaModel, load: float, p_grid: Sequence[float],
                      y_op: float = 0.0) -> list[OperatingPoint]:
    """Load-cell force while pressure ramps under a dead ``load`` (N).

    The cell reads the pressure force left after lifting the load, and never
    reads below zero.
    """
    if load < 0:
        raise UsageError("load must be non-negative")
    ps = list(p_grid)
    if any(b < a for a, b in zip(ps, ps[1:])):
        raise UsageError("pressure grid must be non-decreasing")
    return [OperatingPoint(p, y_op, max(0.0, net_force(m, p, y_op) - load), load)
            for p in ps]


def compare_to_reference(predicted: Sequence[OperatingPoint],
                         reference: ReferenceDataset) -> ComparisonMetrics:
    """Error metrics of ``predicted - reference`` along the swept variable.

    Reference abscissae without an exact prediction are linearly interpolated
    from the predictions; those outside the predicted range are skipped.
    """
    key = reference.swept
    pred = sorted(predicted, key=lambda p: getattr(p, key))
    if not pred:
        raise UsageError("no predicted points to compare")
    xs = np.array([getattr(p, key) for p in pred])
    fs = np.array([p.force for p in pred])
    errors = []
    for r in reference.points:
        x = getattr(r, key)
        hit = np.flatnonzero(xs == x)
        if hit.size:
            f = fs[hit[0]]
        elif xs[0] <= x <= xs[-1]:
            f = float(np.interp(x, xs, fs))
        else:
            continue
        errors.append(f - r.force)
    if not errors:
        raise UsageError("predicted and reference abscissae do not overlap")
    e = np.array(errors)
    return ComparisonMetrics(
        rmse=math.sqrt(float(e @ e) / e.size),
        max_abs_error=float(np.abs(e).max()),
        signed_bias=float(e.mean()),
        n=int(e.size),
    )
