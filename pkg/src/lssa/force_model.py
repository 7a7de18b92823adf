"""Quasi-static force balance of the linear soft sleeve actuator.

The net axial force at pressure ``P`` (Pa) and extension ``y`` (mm) is::

    F_y = P * A_eff(y) - F_K(y)

where ``A_eff`` is the net projected pressure area (m^2) and ``F_K`` the
axial stiffness force polynomial (N).  Forces are in N throughout.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import CalibrationError, ConvergenceError, DomainError, UsageError
from .fitting import LSSA_STIFFNESS, Polynomial, differentiate, evaluate
from .geometry import (ActuatorGeometry, FoldKinematics, LinearUnfold,
                       area_components, effective_area)

log = logging.getLogger(__name__)

Y_TOL = 1e-6         # mm, bisection bracket width
F_TOL = 1e-7         # N, residual accepted once the bracket is narrow
MAX_ITER = 200


@dataclass(frozen=True)
class OperatingPoint:
    pressure: float          # Pa
    displacement: float      # mm
    force: float             # N
    load: float = 0.0        # N, external dead load

    def __post_init__(self):
        if self.pressure < 0:
            raise DomainError("pressure must be non-negative")
        if self.displacement < 0:
            raise DomainError("displacement must be non-negative")


@dataclass(frozen=True)
class AreaProfile:
    """Effective pressure area versus extension, linear between points.

    Outside the tabulated range the end values are held.  A single point
    gives a constant area.
    """
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(y), float(a)) for y, a in self.points)
        if not pts:
            raise UsageError("an area profile needs at least one point")
        ys = [p[0] for p in pts]
        if any(b <= a for a, b in zip(ys, ys[1:])):
            raise UsageError("area profile displacements must be strictly increasing")
        if any(not (a > 0 and math.isfinite(a)) for _, a in pts):
            raise DomainError("effective areas must be positive")
        object.__setattr__(self, "points", pts)

    @classmethod
    def constant(cls, area: float) -> "AreaProfile":
        return cls(((0.0, area),))

    @property
    def displacements(self) -> tuple[float, ...]:
        return tuple(p[0] for p in self.points)

    @property
    def areas(self) -> tuple[float, ...]:
        return tuple(p[1] for p in self.points)

    @property
    def non_monotone(self) -> bool:
        """True when the area rises anywhere along the stroke.

        Unfolding walls should only shrink the projected area, so a rising
        segment means the constant-geometry assumptions do not hold.
        """
        a = self.areas
        return any(b > x for x, b in zip(a, a[1:]))

    def __call__(self, y: float) -> float:
        if len(self.points) == 1:
            return self.points[0][1]
        return float(np.interp(y, self.displacements, self.areas))


@dataclass(frozen=True)
class LssaModel:
    geometry: Optional[ActuatorGeometry] = None
    kinematics: FoldKinematics = field(default_factory=LinearUnfold)
    stiffness: Polynomial = LSSA_STIFFNESS
    area_override: Optional[AreaProfile] = None
    y_max: float = 40.0

    def __post_init__(self):
        if self.stiffness.degree > 3:
            raise UsageError("stiffness polynomial degree must be at most 3")
        if not (self.y_max > 0 and math.isfinite(self.y_max)):
            raise UsageError("y_max must be positive")
        if self.geometry is None and self.area_override is None:
            raise UsageError("model needs a geometry or an effective-area profile")

    def with_area(self, profile: AreaProfile) -> "LssaModel":
        return LssaModel(self.geometry, self.kinematics, self.stiffness, profile, self.y_max)

    def check_y(self, y: float) -> None:
        if not (0 <= y <= self.y_max):
            raise DomainError(f"displacement {y} mm outside [0, {self.y_max}] mm")

    def effective_area(self, y: float) -> float:
        self.check_y(y)
        if self.area_override is not None:
            return self.area_override(y)
        return effective_area(self.geometry, self.kinematics, y)

    def stiffness_force(self, y: float) -> float:
        return evaluate(self.stiffness, y)


def _check_pressure(p):
    if not (math.isfinite(p) and p >= 0):
        raise DomainError(f"pressure must be non-negative, got {p} Pa")


def pressure_components(m: LssaModel, pressure: float, y: float):
    """``(F1, F2y, F3y)`` in N from the cap, external walls and internal walls.

    Wall forces are summed over all fold pairs.  Requires a geometry.
    """
    _check_pressure(pressure)
    m.check_y(y)
    if m.geometry is None:
        raise UsageError("pressure components need an actuator geometry")
    a1, a2, a3 = area_components(m.geometry, m.kinematics, y)
    n = m.geometry.n_folds
    return pressure * a1, pressure * n * a2, pressure * n * a3


def net_force(m: LssaModel, pressure: float, y: float) -> float:
    """Output force (N); negative when pressure cannot hold the extension."""
    _check_pressure(pressure)
    return pressure * m.effective_area(y) - m.stiffness_force(y)


def axial_stiffness(m: LssaModel, y: float) -> float:
    """dF_K/dy in N/mm, from the derivative of the stored polynomial."""
    m.check_y(y)
    return evaluate(differentiate(m.stiffness), y)


class ExtensionStatus(enum.Enum):
    EQUILIBRIUM = "equilibrium"
    BLOCKED = "blocked"
    SATURATED = "saturated"


@dataclass(frozen=True)
class ExtensionResult:
    displacement: float      # mm
    status: ExtensionStatus
    residual: float          # N, net_force - load at the returned displacement
    iterations: int = 0

    @property
    def flagged(self) -> bool:
        return self.status is not ExtensionStatus.EQUILIBRIUM


def free_extension(m: LssaModel, pressure: float, load: float = 0.0) -> ExtensionResult:
    """Extension (mm) where the output force equals ``load``, by bisection.

    Returns a BLOCKED result at y=0 when the actuator cannot lift the load at
    all, and SATURATED at ``y_max`` when it still pushes harder than the load
    at the end of the working range.
    """
    _check_pressure(pressure)
    if not (math.isfinite(load) and load >= 0):
        raise DomainError("load must be non-negative")

    def g(y):
        return net_force(m, pressure, y) - load

    lo, hi = 0.0, m.y_max
    g_lo, g_hi = g(lo), g(hi)
    if g_lo < 0:
        return ExtensionResult(0.0, ExtensionStatus.BLOCKED, g_lo)
    if g_hi > 0:
        return ExtensionResult(hi, ExtensionStatus.SATURATED, g_hi)
    if g_lo == 0:
        return ExtensionResult(0.0, ExtensionStatus.EQUILIBRIUM, 0.0)
    if g_hi == 0:
        return ExtensionResult(hi, ExtensionStatus.EQUILIBRIUM, 0.0)

    for it in range(1, MAX_ITER + 1):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if g_mid == 0 or (hi - lo < Y_TOL and abs(g_mid) < F_TOL):
            return ExtensionResult(mid, ExtensionStatus.EQUILIBRIUM, g_mid, it)
        if mid in (lo, hi):
            # bracket can no longer shrink; accept if the bracket tolerance holds
            break
        if g_mid > 0:
            lo = mid
        else:
            hi = mid
    if hi - lo < Y_TOL:
        return ExtensionResult(mid, ExtensionStatus.EQUILIBRIUM, g_mid, it)
    raise ConvergenceError(f"bisection did not converge in {MAX_ITER} iterations")


def dead_band_pressure(m: LssaModel, load: float, y0: float = 0.0) -> float:
    """Lowest pressure (Pa) at which output force reaches ``load`` at ``y0``."""
    area = m.effective_area(y0)
    if not area > 0:
        raise DomainError("effective area must be positive")
    return max(0.0, (load + m.stiffness_force(y0)) / area)


def calibrate_effective_area(pressure: float, y0: float, f_meas: float,
                             stiffness: Polynomial = LSSA_STIFFNESS) -> float:
    """Constant effective area (m^2) that reproduces ``f_meas`` at ``(pressure, y0)``."""
    if not pressure > 0:
        raise UsageError("calibration pressure must be positive")
    area = (f_meas + evaluate(stiffness, y0)) / pressure
    if not area > 0:
        raise CalibrationError(
            f"calibrated area {area:.6g} m^2 is not positive at y={y0} mm")
    return area


def calibrate_area_profile(points: Sequence[OperatingPoint],
                           stiffness: Polynomial = LSSA_STIFFNESS) -> AreaProfile:
    """Invert the force balance at every measured point.

    A rising profile is logged as a warning and reported through
    ``AreaProfile.non_monotone``; it is not rejected.
    """
    if len(points) < 2:
        raise UsageError("area profile calibration needs at least two points")
    pts = sorted(points, key=lambda p: p.displacement)
    ys = [p.displacement for p in pts]
    if len(set(ys)) != len(ys):
        raise UsageError("measured displacements must be distinct")
    if any(p.pressure <= 0 for p in pts):
        raise UsageError("calibration pressures must be positive")
    profile = AreaProfile(tuple(
        (p.displacement,
         calibrate_effective_area(p.pressure, p.displacement, p.force + p.load, stiffness))
        for p in pts))
    if profile.non_monotone:
        log.warning("calibrated effective area is not monotonically decreasing: %s",
                    ", ".join(f"{a:.5g}" for a in profile.areas))
    return profile
