"""Actuator geometry, projected pressure areas and fold kinematics.

Lengths are in metres and angles in radians.  Axial displacement ``y`` is
passed in mm (the stiffness polynomial's unit) and converted here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ExtrapolationError, UsageError

MM = 1e-3
HALF_PI = math.pi / 2
# theta arrives from trig and interpolation; tolerate rounding past the bounds
_ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class ActuatorGeometry:
    r1o: float
    r1i: float
    r2i: float
    r3i: float
    s: float
    theta0: float
    n_folds: int = 1

    def __post_init__(self):
        vals = (self.r1o, self.r1i, self.r2i, self.r3i, self.s, self.theta0)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("geometry values must be finite")
        if not self.r1o > self.r1i >= 0:
            raise DomainError("cap radii must satisfy r1o > r1i >= 0")
        if not self.r2i >= self.r3i >= 0:
            raise DomainError("wall radii must satisfy r2i >= r3i >= 0")
        if self.s < 0:
            raise DomainError("fold length must be non-negative")
        if not 0 <= self.theta0 <= HALF_PI:
            raise DomainError("initial fold angle must lie in [0, pi/2]")
        if int(self.n_folds) != self.n_folds or self.n_folds < 1:
            raise DomainError("n_folds must be a positive integer")

    @classmethod
    def from_mm_deg(cls, r1o, r1i, r2i, r3i, s, theta0_deg, n_folds=1):
        return cls(r1o * MM, r1i * MM, r2i * MM, r3i * MM, s * MM,
                   math.radians(theta0_deg), int(n_folds))

    def scaled(self, k: float) -> "ActuatorGeometry":
        return ActuatorGeometry(self.r1o * k, self.r1i * k, self.r2i * k, self.r3i * k,
                                self.s * k, self.theta0, self.n_folds)


def _check_theta(theta):
    if not -_ANGLE_SLACK <= theta <= HALF_PI + _ANGLE_SLACK:
        raise DomainError(f"fold angle {theta} rad outside [0, pi/2]")
    return min(max(theta, 0.0), HALF_PI)


def cap_area(g: ActuatorGeometry) -> float:
    return math.pi * (g.r1o**2 - g.r1i**2)


def _annulus_growth(r, s, theta):
    # pi(r + s cos t)^2 - pi r^2 without cancelling the r^2 terms
    w = s * math.cos(_check_theta(theta))
    return math.pi * w * (2.0 * r + w)


def external_wall_area(g: ActuatorGeometry, theta: float) -> float:
    return _annulus_growth(g.r2i, g.s, theta)


def internal_wall_area(g: ActuatorGeometry, theta: float) -> float:
    return _annulus_growth(g.r3i, g.s, theta)


@dataclass(frozen=True)
class ConstantAngle:
    """Fold angle stays at ``theta0``: fixed projected areas."""

    def theta(self, g: ActuatorGeometry, y: float) -> float:
        _check_y(y)
        return g.theta0


@dataclass(frozen=True)
class LinearUnfold:
    """sin(theta) grows linearly with extension until the folds are straight.

    ``sin(theta(y)) = min(1, sin(theta0) + y / (2 n_folds s))``.
    """

    def theta(self, g: ActuatorGeometry, y: float) -> float:
        _check_y(y)
        if y == 0:
            return g.theta0
        if g.s == 0:
            return HALF_PI
        sin_t = math.sin(g.theta0) + y * MM / (2 * g.n_folds * g.s)
        return HALF_PI if sin_t >= 1 else math.asin(sin_t)


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear theta(y) from measured ``(y mm, theta rad)`` pairs."""
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(y), float(t)) for y, t in self.points)
        if not pts:
            raise UsageError("tabulated kinematics needs at least one point")
        ys = [p[0] for p in pts]
        if any(b <= a for a, b in zip(ys, ys[1:])):
            raise UsageError("tabulated displacements must be strictly increasing")
        if any(not 0 <= t <= HALF_PI for _, t in pts):
            raise DomainError("tabulated fold angles must lie in [0, pi/2]")
        object.__setattr__(self, "points", pts)

    def theta(self, g: ActuatorGeometry, y: float) -> float:
        _check_y(y)
        ys, ts = zip(*self.points)
        if not ys[0] <= y <= ys[-1]:
            raise ExtrapolationError(
                f"y={y} mm outside tabulated range [{ys[0]}, {ys[-1]}] mm")
        return float(np.interp(y, ys, ts))


FoldKinematics = Union[ConstantAngle, LinearUnfold, Tabulated]


def _check_y(y):
    if not (math.isfinite(y) and y >= 0):
        raise DomainError(f"displacement must be non-negative, got {y} mm")


def theta_of_y(kin: FoldKinematics, g: ActuatorGeometry, y: float) -> float:
    """Fold angle (rad) at axial displacement ``y`` (mm)."""
    return kin.theta(g, y)


def effective_area(g: ActuatorGeometry, kin: FoldKinematics, y: float) -> float:
    """Net pressure area A1 + n_folds (A2 - A3) at displacement ``y`` (mm).

    With one fold this is the cap plus one external/internal wall pair.
    """
    theta = _check_theta(theta_of_y(kin, g, y))
    # A2 - A3 in factored form: the r^2 and (s cos)^2 terms cancel exactly
    walls = 2 * math.pi * g.s * math.cos(theta) * (g.r2i - g.r3i)
    return cap_area(g) + g.n_folds * walls


def area_components(g: ActuatorGeometry, kin: FoldKinematics,
                    y: float) -> tuple[float, float, float]:
    """``(A1, A2, A3)`` at displacement ``y`` (mm)."""
    theta = theta_of_y(kin, g, y)
    return cap_area(g), external_wall_area(g, theta), internal_wall_area(g, theta)
