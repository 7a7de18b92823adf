"""CSV ingestion/emission and run configuration.

CSV files may carry ``#`` comment lines anywhere; ``# key: value`` comments
before the header are returned as metadata.  Line numbers in errors are
1-based physical line numbers of the file.
"""
from __future__ import annotations

import contextlib
import csv
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO

from .errors import DataError, DomainError, LssaError, UsageError
from .fitting import LSSA_STIFFNESS, Polynomial, fit_polynomial
from .force_model import AreaProfile, LssaModel, OperatingPoint
from .geometry import (ActuatorGeometry, ConstantAngle, LinearUnfold, Tabulated)
from .materials import UniaxialSample

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

TENSILE_COLUMNS = ("strain", "stress_mpa")
FORCE_COLUMNS = ("displacement_mm", "force_n")
AREA_COLUMNS = ("displacement_mm", "area_m2")
POINT_COLUMNS = ("pressure_kpa", "displacement_mm", "load_n", "force_n")


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[tuple[int, dict[str, float]]]
    metadata: dict[str, str] = field(default_factory=dict)


def read_table(path, required: Sequence[str]) -> Table:
    """Read a numeric CSV whose header contains every name in ``required``."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read file: {exc.strerror}", path=path) from exc
    return parse_table(text, required, path)


def parse_table(text: str, required: Sequence[str], path=None) -> Table:
    metadata: dict[str, str] = {}
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header is None and ":" in line:
                key, _, value = line[1:].partition(":")
                metadata[key.strip()] = value.strip()
            continue
        fields = [f.strip() for f in next(csv.reader([line]))]
        if header is None:
            header = tuple(fields)
            missing = [c for c in required if c not in header]
            if missing:
                raise DataError(f"missing column(s) {', '.join(missing)}; "
                                f"expected header {','.join(required)}", lineno, path)
            continue
        if len(fields) != len(header):
            raise DataError(f"expected {len(header)} fields, got {len(fields)}", lineno, path)
        values = {}
        for name, cell in zip(header, fields):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"non-numeric value {cell!r} in column {name}",
                                lineno, path) from None
            if not math.isfinite(v):
                raise DataError(f"non-finite value in column {name}", lineno, path)
            values[name] = v
        rows.append((lineno, values))
    if header is None:
        raise DataError("file is empty", path=path)
    if not rows:
        raise DataError("file has a header but no data rows", path=path)
    return Table(header, rows, metadata)


def load_tensile_csv(path) -> list[UniaxialSample]:
    """Uniaxial samples from ``strain,stress_mpa`` (engineering strain), sorted by stretch."""
    table = read_table(path, TENSILE_COLUMNS)
    samples = []
    for lineno, row in table.rows:
        lam = 1.0 + row["strain"]
        if lam <= 0:
            raise DataError(f"strain {row['strain']} gives non-positive stretch", lineno, path)
        samples.append(UniaxialSample(lam, row["stress_mpa"]))
    return sorted(samples, key=lambda s: s.stretch)


def load_force_csv(path) -> list[tuple[float, float]]:
    """``(y mm, F N)`` pairs from ``displacement_mm,force_n``, sorted by y."""
    table = read_table(path, FORCE_COLUMNS)
    out = []
    for lineno, row in table.rows:
        if row["displacement_mm"] < 0:
            raise DataError("displacement must be non-negative", lineno, path)
        out.append((row["displacement_mm"], row["force_n"]))
    return sorted(out)


def load_area_profile_csv(path) -> AreaProfile:
    table = read_table(path, AREA_COLUMNS)
    pts = []
    for lineno, row in table.rows:
        if row["area_m2"] <= 0:
            raise DataError("effective area must be positive", lineno, path)
        pts.append((row["displacement_mm"], row["area_m2"]))
    pts.sort()
    try:
        return AreaProfile(tuple(pts))
    except LssaError as exc:
        raise DataError(str(exc), path=path) from exc


def _fmt(v) -> str:
    return v if isinstance(v, str) else repr(float(v))


def write_csv(stream: TextIO, columns: Sequence[str], rows: Iterable[Sequence[float]]):
    """Write numeric rows with round-trip-exact float formatting."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])


def point_rows(points: Iterable[OperatingPoint]):
    for p in points:
        yield (p.pressure / 1e3, p.displacement, p.load, p.force)


def write_points(stream: TextIO, points: Iterable[OperatingPoint]):
    write_csv(stream, POINT_COLUMNS, point_rows(points))


def load_points_csv(path) -> list[OperatingPoint]:
    table = read_table(path, POINT_COLUMNS)
    return [OperatingPoint(r["pressure_kpa"] * 1e3, r["displacement_mm"],
                           r["force_n"], r["load_n"]) for _, r in table.rows]


def write_area_profile(stream: TextIO, profile: AreaProfile):
    write_csv(stream, AREA_COLUMNS, profile.points)


# --------------------------------------------------------------------------
# run configuration

_KINEMATICS = {"constant_angle": ConstantAngle, "linear_unfold": LinearUnfold}


@dataclass(frozen=True)
class RunConfig:
    model: Optional[LssaModel]      # None when neither geometry nor area is given
    stiffness: Polynomial = LSSA_STIFFNESS
    g: float = 9.81
    y_op: float = 0.0               # mm, operating displacement of the static-load rig
    source: Optional[Path] = None

    def require_model(self) -> LssaModel:
        if self.model is None:
            raise UsageError("config needs a [geometry] block or an [area] block")
        return self.model


def _number(block, key, where, default=None):
    if key not in block:
        if default is None:
            raise UsageError(f"config: missing key {where}{key}")
        return default
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise UsageError(f"config: {where}{key} must be a number")
    return float(v)


def parse_config(data: dict, base_dir: Path = Path(".")) -> RunConfig:
    known = {"geometry", "kinematics", "stiffness", "area", "y_max_mm", "g", "y_op_mm"}
    unknown = set(data) - known
    if unknown:
        raise UsageError(f"config: unknown key(s) {', '.join(sorted(unknown))}")

    geometry = None
    if "geometry" in data:
        gb = data["geometry"]
        keys = ("r1o_mm", "r1i_mm", "r2i_mm", "r3i_mm", "s_mm", "theta0_deg")
        vals = [_number(gb, k, "geometry.") for k in keys]
        n_folds = gb.get("n_folds", 1)
        if not isinstance(n_folds, int) or isinstance(n_folds, bool):
            raise UsageError("config: geometry.n_folds must be an integer")
        try:
            geometry = ActuatorGeometry.from_mm_deg(*vals, n_folds=n_folds)
        except DomainError as exc:
            raise UsageError(f"config: {exc}") from exc

    kb = data.get("kinematics", {})
    kind = kb.get("model", "linear_unfold")
    if kind == "tabulated":
        table = kb.get("table")
        if not table:
            raise UsageError("config: tabulated kinematics needs kinematics.table")
        kinematics = Tabulated(tuple((float(y), math.radians(t)) for y, t in table))
    elif kind in _KINEMATICS:
        kinematics = _KINEMATICS[kind]()
    else:
        raise UsageError(f"config: unknown kinematics model {kind!r}")

    sb = data.get("stiffness", {})
    has_coeffs, has_csv = "coefficients" in sb, "csv" in sb
    if has_coeffs and has_csv:
        raise UsageError("config: give either stiffness.coefficients or stiffness.csv, not both")
    if has_csv:
        samples = load_force_csv(base_dir / sb["csv"])
        stiffness, _ = fit_polynomial(samples, int(sb.get("degree", 3)))
    elif has_coeffs:
        stiffness = Polynomial(tuple(float(c) for c in sb["coefficients"]))
    else:
        stiffness = LSSA_STIFFNESS

    area = None
    ab = data.get("area", {})
    if "profile_csv" in ab and "constant_m2" in ab:
        raise UsageError("config: give either area.profile_csv or area.constant_m2, not both")
    if "profile_csv" in ab:
        area = load_area_profile_csv(base_dir / ab["profile_csv"])
    elif "constant_m2" in ab:
        area = AreaProfile.constant(_number(ab, "constant_m2", "area."))

    y_max = _number(data, "y_max_mm", "", 40.0)
    g = _number(data, "g", "", 9.81)
    y_op = _number(data, "y_op_mm", "", 0.0)
    if g <= 0:
        raise UsageError("config: g must be positive")
    if not 0 <= y_op <= y_max:
        raise UsageError("config: y_op_mm must lie in [0, y_max_mm]")
    model = None
    if geometry is not None or area is not None:
        model = LssaModel(geometry, kinematics, stiffness, area, y_max)
    return RunConfig(model, stiffness, g, y_op)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read config: {exc.strerror}", path=path) from exc
    except tomllib.TOMLDecodeError as exc:
        raise DataError(f"malformed config: {exc}", path=path) from exc
    cfg = parse_config(data, path.parent)
    return RunConfig(cfg.model, cfg.stiffness, cfg.g, cfg.y_op, path)


def open_output(target: Optional[str]):
    """Context manager yielding a text stream; ``None`` or ``-`` means stdout."""
    if target in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(os.fspath(target), "w", encoding="utf-8", newline="")
