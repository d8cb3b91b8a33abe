"""Numerical laboratory for the cylindrical KdV long-wave regime.

Implements the periodic spectral toolbox, a self-contained Airy evaluator,
the closed-form solitary wave with its decay diagnostics, radial
integrators for the cylindrical KdV equation and the transformed Boussinesq
equation, the ansatz-residual scaling experiments, and a CLI that emits
reproducible CSV/SVG artifacts.
"""

from .airy import AiryValues, SolitonSpec, airy_eval, capital_f, capital_g, compatibility_residual
from .boussinesq import (AnsatzConfig, BoussinesqState, approximation_error,
                         boussinesq_evolve, make_ansatz_state, n1_of_v, n2_of_v,
                         n_of_v, resolvent_solve, spatial_rhs, u_to_v, v_to_u)
from .ckdv import (CkdvRunConfig, CkdvState, ckdv_evolve, ckdv_linear_propagator,
                   ckdv_rhs_with_forcing, ckdv_step, make_state)
from .errors import (BranchError, CkdvLabError, ConfigError, DenominatorSignError,
                     MeanValueError, NoConvergence, OverflowGuard, SingularDispersion,
                     StepUnstable)
from .grid import (RealField, SpectralGrid, apply_b2, dispersion_omega_squared,
                   field_on, make_grid, spectral_antiderivative, spectral_derivative)
from .residual import (EnergyReport, ResidualReport, antiderivative_residual, energy,
                       gronwall_growth_check, residual_field)
from .soliton import (SelfSimilarPoint, bilinear_residual, physical_wave,
                      self_similar_point, soliton_amplitude, window_l2_growth,
                      zero_mean_defect)

__version__ = "0.1.0"
