"""Quasi-static force modelling for linear soft sleeve actuators (LSSA).

Submodules:

- ``materials``: incompressible hyperelastic models under uniaxial stretch
- ``fitting``: least-squares fits of material constants and stiffness polynomials
- ``geometry``: projected pressure areas and fold kinematics
- ``force_model``: force balance, equilibrium, dead band and area calibration
- ``experiments``: replays of the extension and static-load tests
- ``dataio`` / ``cli``: files, configuration and the ``lssa`` command
"""
from .errors import (CalibrationError, ConvergenceError, DataError, DomainError,
                     ExtrapolationError, LssaError, SingularFitError, UsageError)
from .fitting import (LSSA_STIFFNESS, FitReport, Polynomial, differentiate, evaluate,
                      fit_hyperelastic, fit_polynomial, rank_models)
from .force_model import (AreaProfile, ExtensionResult, ExtensionStatus, LssaModel,
                          OperatingPoint, axial_stiffness, calibrate_area_profile,
                          calibrate_effective_area, dead_band_pressure, free_extension,
                          net_force, pressure_components)
from .geometry import (ActuatorGeometry, ConstantAngle, LinearUnfold, Tabulated, cap_area,
                       effective_area, external_wall_area, internal_wall_area, theta_of_y)
from .materials import (TPU85_MR5, Family, HyperelasticParams, UniaxialSample,
                        small_strain_moduli, stability_scan, strain_energy, strain_invariants,
                        uniaxial_nominal_stress)

__version__ = "0.1.0"
