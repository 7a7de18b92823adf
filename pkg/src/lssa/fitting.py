"""Linear least-squares fitting of material constants and stiffness polynomials.

Polynomial coefficients are stored highest degree first, ``(a, b, c, d)`` for
``a*y**3 + b*y**2 + c*y + d``, with y in mm and the value in N.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import SingularFitError, UsageError
from .materials import Family, HyperelasticParams, UniaxialSample, stress_basis

# models whose R^2 differ by less than this are considered equally good
R2_TIE_TOLERANCE = 1e-4


@dataclass(frozen=True)
class Polynomial:
    coefficients: tuple[float, ...]
    input_unit: str = "mm"
    output_unit: str = "N"

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise UsageError("a polynomial needs at least one coefficient")
        if not all(np.isfinite(coeffs)):
            raise UsageError("polynomial coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, y):
        return evaluate(self, y)


# axial stiffness force of the printed actuator, F_K(y) in N with y in mm
LSSA_STIFFNESS = Polynomial((4.1481e-4, 1.2865e-2, 2.0789, -0.2246))


@dataclass(frozen=True)
class FitReport:
    residual_norm: float
    r_squared: float
    condition_estimate: float
    n_samples: int


def lstsq_qr(design: np.ndarray, target: np.ndarray, rtol: float | None = None):
    """Solve ``min ||design @ x - target||`` by Householder QR.

    Columns are equilibrated to unit norm before factorizing.  Raises
    ``SingularFitError`` if the scaled R has a negligible diagonal entry.
    Returns ``(x, condition_estimate)`` where the estimate is the 2-norm
    condition number of the scaled design.
    """
    A = np.asarray(design, dtype=float)
    b = np.asarray(target, dtype=float)
    m, n = A.shape
    if m < n:
        raise UsageError(f"{m} samples cannot determine {n} unknowns")
    scale = np.linalg.norm(A, axis=0)
    if np.any(scale == 0) or not np.all(np.isfinite(scale)):
        raise SingularFitError("design matrix has a zero or non-finite column")
    q, r = np.linalg.qr(A / scale)
    diag = np.abs(np.diag(r))
    if rtol is None:
        rtol = max(m, n) * np.finfo(float).eps * 10
    if diag.min() <= rtol * diag.max():
        raise SingularFitError("design matrix is rank deficient")
    x = np.linalg.solve(r, q.T @ b) if n > 1 else (q.T @ b) / r[0, 0]
    cond = float(np.linalg.cond(r))
    return np.atleast_1d(x) / scale, cond


def _report(design, target, x, cond) -> FitReport:
    resid = target - design @ x
    ss_res = float(resid @ resid)
    centered = target - target.mean()
    ss_tot = float(centered @ centered)
    if ss_tot > 0:
        r2 = 1.0 - ss_res / ss_tot
    else:
        r2 = 1.0 if ss_res <= np.finfo(float).eps * max(1.0, float(target @ target)) else 0.0
    return FitReport(float(np.sqrt(ss_res)), min(r2, 1.0), cond, len(target))


def fit_hyperelastic(samples: Sequence[UniaxialSample], family: Family
                     ) -> tuple[HyperelasticParams, FitReport]:
    """Least-squares constants for ``family`` against nominal-stress samples."""
    if len(samples) < family.arity + 1:
        raise UsageError(f"{family.name} fit needs at least {family.arity + 1} samples, "
                         f"got {len(samples)}")
    lam = np.array([s.stretch for s in samples])
    stress = np.array([s.nominal_stress for s in samples])
    A = stress_basis(family, lam)
    x, cond = lstsq_qr(A, stress)
    return HyperelasticParams(family, tuple(x)), _report(A, stress, x, cond)


def rank_models(samples: Sequence[UniaxialSample], families: Iterable[Family],
                tie_tolerance: float = R2_TIE_TOLERANCE):
    """Fit every family and order best first.

    Ordering is by descending R^2; families within ``tie_tolerance`` of the
    best remaining R^2 are grouped and the one with fewer constants wins.
    Returns a list of ``(family, params, report)``.
    """
    families = list(families)
    if not families:
        raise UsageError("no material families to rank")
    fits = []
    for fam in families:
        params, rep = fit_hyperelastic(samples, fam)
        fits.append((fam, params, rep))
    remaining = sorted(fits, key=lambda f: -f[2].r_squared)
    ranked = []
    while remaining:
        best = remaining[0][2].r_squared
        group = [f for f in remaining if best - f[2].r_squared <= tie_tolerance]
        pick = min(group, key=lambda f: (f[0].arity, -f[2].r_squared))
        ranked.append(pick)
        remaining.remove(pick)
    return ranked


def fit_polynomial(samples: Sequence[tuple[float, float]], degree: int = 3
                   ) -> tuple[Polynomial, FitReport]:
    """Least-squares polynomial through ``(y, F)`` samples."""
    if degree < 0:
        raise UsageError("degree must be non-negative")
    if len(samples) < degree + 1:
        raise UsageError(f"degree-{degree} fit needs at least {degree + 1} samples, "
                         f"got {len(samples)}")
    data = np.asarray(samples, dtype=float)
    y, f = data[:, 0], data[:, 1]
    # centre and scale the abscissa so the Vandermonde matrix is well conditioned,
    # then map the coefficients back to the raw variable
    shift = 0.5 * (y.max() + y.min())
    half = 0.5 * (y.max() - y.min()) or 1.0
    u = (y - shift) / half
    V = np.vander(u, degree + 1)
    x, cond = lstsq_qr(V, f)
    coeffs = _unscale(x, shift, half)
    poly = Polynomial(tuple(coeffs))
    return poly, _report(np.vander(y, degree + 1), f, np.asarray(coeffs), cond)


def _unscale(coeffs_u, shift, half):
    """Rewrite p((y - shift)/half) as a polynomial in y (highest degree first)."""
    in_u = np.polynomial.Polynomial(coeffs_u[::-1])
    composed = in_u(np.polynomial.Polynomial([-shift / half, 1.0 / half]))
    low_first = np.zeros(len(coeffs_u))
    low_first[:len(composed.coef)] = composed.coef
    return low_first[::-1]


def differentiate(p: Polynomial) -> Polynomial:
    n = p.degree
    if n == 0:
        return Polynomial((0.0,), p.input_unit, f"{p.output_unit}/{p.input_unit}")
    coeffs = tuple(c * (n - k) for k, c in enumerate(p.coefficients[:-1]))
    return Polynomial(coeffs, p.input_unit, f"{p.output_unit}/{p.input_unit}")


def evaluate(p: Polynomial, y):
    """Horner evaluation; accepts scalars or arrays."""
    y = np.asarray(y, dtype=float)
    acc = np.zeros_like(y)
    for c in p.coefficients:
        acc = acc * y + c
    return acc if acc.ndim else float(acc)
