"""Incompressible hyperelastic strain-energy models under uniaxial stretch.

Every supported family is a polynomial in the shifted invariants
``t1 = I1 - 3`` and ``t2 = I2 - 3``.  A family is stored as a tuple of
exponent pairs ``(i, j)``; constant ``k`` multiplies ``t1**i * t2**j``.
All stresses are nominal (force per undeformed area) in MPa.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError

STABILITY_STEP = 1e-5


class Family(enum.Enum):
    NEO_HOOKEAN = "nh"
    MOONEY_RIVLIN2 = "mr2"
    MOONEY_RIVLIN3 = "mr3"
    MOONEY_RIVLIN5 = "mr5"
    YEOH3 = "yeoh3"

    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        return _TERMS[self]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f"C{i}{j}" for i, j in self.terms)

    @property
    def arity(self) -> int:
        return len(self.terms)

    @classmethod
    def parse(cls, name: str) -> "Family":
        key = name.strip().lower().replace("-", "").replace("_", "")
        for fam in cls:
            if key in (fam.value, fam.name.lower().replace("_", "")):
                return fam
        raise UsageError(f"unknown material model {name!r}; "
                         f"choose from {', '.join(f.value for f in cls)}")


_TERMS = {
    Family.NEO_HOOKEAN: ((1, 0),),
    Family.MOONEY_RIVLIN2: ((1, 0), (0, 1)),
    Family.MOONEY_RIVLIN3: ((1, 0), (0, 1), (1, 1)),
    # ordering follows the TPU 85 constants table: C10, C01, C20, C11, C02
    Family.MOONEY_RIVLIN5: ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2)),
    Family.YEOH3: ((1, 0), (2, 0), (3, 0)),
}


@dataclass(frozen=True)
class HyperelasticParams:
    family: Family
    constants: tuple[float, ...]
    d1: float = 0.0

    def __post_init__(self):
        consts = tuple(float(c) for c in self.constants)
        object.__setattr__(self, "constants", consts)
        if len(consts) != self.family.arity:
            raise UsageError(
                f"{self.family.name} takes {self.family.arity} constants, "
                f"got {len(consts)}")
        if not all(np.isfinite(consts)):
            raise DomainError("material constants must be finite")
        if self.d1 != 0.0:
            raise UsageError("only incompressible models are supported (d1 must be 0)")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.family.names, self.constants))

    def coefficient(self, i: int, j: int) -> float:
        """Constant multiplying ``t1**i * t2**j``, zero if the family lacks the term."""
        try:
            return self.constants[self.family.terms.index((i, j))]
        except ValueError:
            return 0.0


# TPU 85 five-parameter Mooney-Rivlin constants (MPa)
TPU85_MR5 = HyperelasticParams(
    Family.MOONEY_RIVLIN5, (-3.1992, 6.977, 0.0281, -0.074972, 0.92155))


@dataclass(frozen=True)
class UniaxialSample:
    stretch: float
    nominal_stress: float

    def __post_init__(self):
        if not (np.isfinite(self.stretch) and self.stretch > 0):
            raise DomainError(f"stretch must be positive and finite, got {self.stretch}")
        if not np.isfinite(self.nominal_stress):
            raise DomainError("nominal stress must be finite")

    @classmethod
    def from_strain(cls, strain: float, stress: float) -> "UniaxialSample":
        return cls(1.0 + float(strain), float(stress))


def _check_stretch(lam):
    lam = np.asarray(lam, dtype=float)
    if not np.all(np.isfinite(lam)) or np.any(lam <= 0):
        raise DomainError("stretch must be positive and finite")
    return lam


def strain_invariants(lam):
    """Return ``(I1, I2)`` for incompressible uniaxial stretch ``lam``."""
    lam = _check_stretch(lam)
    i1 = lam**2 + 2.0 / lam
    i2 = 2.0 * lam + 1.0 / lam**2
    return i1, i2


def _shifted(lam):
    i1, i2 = strain_invariants(lam)
    return i1 - 3.0, i2 - 3.0


def strain_energy(params: HyperelasticParams, lam):
    """Strain-energy density W (MPa) at stretch ``lam``."""
    t1, t2 = _shifted(lam)
    w = np.zeros_like(t1)
    for c, (i, j) in zip(params.constants, params.family.terms):
        w = w + c * t1**i * t2**j
    return w if w.ndim else float(w)


def _energy_gradient(params, t1, t2):
    """Partial derivatives dW/dI1 and dW/dI2."""
    w1 = np.zeros_like(t1)
    w2 = np.zeros_like(t1)
    for c, (i, j) in zip(params.constants, params.family.terms):
        if i:
            w1 = w1 + c * i * t1**(i - 1) * t2**j
        if j:
            w2 = w2 + c * j * t1**i * t2**(j - 1)
    return w1, w2


def uniaxial_nominal_stress(params: HyperelasticParams, lam):
    """Nominal uniaxial stress, 2(lam - lam^-2)(dW/dI1 + dW/dI2 / lam)."""
    lam = _check_stretch(lam)
    t1, t2 = _shifted(lam)
    w1, w2 = _energy_gradient(params, t1, t2)
    s = 2.0 * (lam - lam**-2) * (w1 + w2 / lam)
    return s if s.ndim else float(s)


def stress_basis(family: Family, lam) -> np.ndarray:
    """Design matrix: column k is the stress produced by a unit k-th constant.

    Nominal stress is linear in the constants, so ``stress_basis(f, lam) @ c``
    equals ``uniaxial_nominal_stress`` up to rounding.
    """
    lam = np.atleast_1d(_check_stretch(lam))
    t1, t2 = _shifted(lam)
    pre = 2.0 * (lam - lam**-2)
    cols = []
    for i, j in family.terms:
        d1 = i * t1**(i - 1) * t2**j if i else np.zeros_like(t1)
        d2 = j * t1**i * t2**(j - 1) if j else np.zeros_like(t1)
        cols.append(pre * (d1 + d2 / lam))
    return np.column_stack(cols)


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    first_violation: float | None
    min_slope: float
    min_slope_stretch: float


def stability_scan(params: HyperelasticParams, lam_min: float, lam_max: float,
                   n: int = 500) -> StabilityReport:
    """Check d(sigma)/d(lambda) > 0 on a uniform grid (Drucker stability).

    The slope is a central difference with step ``STABILITY_STEP``.
    """
    if n < 2 or not (0 < lam_min < lam_max):
        raise UsageError("stability grid needs 0 < lam_min < lam_max and n >= 2")
    if lam_min - STABILITY_STEP <= 0:
        raise UsageError(f"lam_min must exceed the difference step {STABILITY_STEP}")
    grid = np.linspace(lam_min, lam_max, n)
    h = STABILITY_STEP
    slope = (uniaxial_nominal_stress(params, grid + h)
             - uniaxial_nominal_stress(params, grid - h)) / (2 * h)
    bad = np.flatnonzero(slope <= 0)
    k = int(np.argmin(slope))
    return StabilityReport(
        stable=bad.size == 0,
        first_violation=float(grid[bad[0]]) if bad.size else None,
        min_slope=float(slope[k]),
        min_slope_stretch=float(grid[k]),
    )


def small_strain_moduli(params: HyperelasticParams) -> tuple[float, float]:
    """Initial shear and Young's moduli ``(mu0, E0)`` in MPa."""
    mu0 = 2.0 * (params.coefficient(1, 0) + params.coefficient(0, 1))
    return mu0, 3.0 * mu0
