"""Numerical toolkit for higher-order fractional Laplacians.

Closed-form constants, singular and semi-infinite quadrature, the
fractional Laplacian and Riesz potentials, ball kernels, the bubble family
with its Kelvin transform, the exponent recurrence of the scaling-sphere
method, and a verification harness (``nlk``).
"""

from .errors import (BoundaryError, ConfigurationError, DivergenceError, DomainError,
                     LAlphaError, NonlocalKitError, PoleError, QuadratureError, RegimeError,
                     SingularPointError)
from .fields import Ball, ScalarField, check_decay
from .operators import (frac_laplacian, green_function_alpha, green_poisson_reconstruct,
                        poisson_extension_field, poisson_kernel_alpha, poisson_mass, ring_average,
                        ring_weight_integral, riesz_potential, riesz_potential_field,
                        spherical_average)
from .quadrature import DEFAULT_CONFIG, QuadConfig
from .scaling_spheres import MuState, Regime, classify_regime, mu_limit, mu_sequence
from .special_functions import (Params, beta_fn, bubble_prefactor, critical_exponent,
                                frac_lap_constant, gamma_fn, green_constant, i_const,
                                incomplete_kernel_integral, mean_value_constant, poisson_constant,
                                riesz_constant, sphere_area, tau)
from .transforms import Bubble, bubble_field, bubble_value, kelvin_deficit, kelvin_field, \
    kelvin_transform

__all__ = [
    "BoundaryError",
    "ConfigurationError",
    "DivergenceError",
    "DomainError",
    "LAlphaError",
    "NonlocalKitError",
    "PoleError",
    "QuadratureError",
    "RegimeError",
    "SingularPointError",
    "Ball",
    "ScalarField",
    "check_decay",
    "frac_laplacian",
    "green_function_alpha",
    "green_poisson_reconstruct",
    "poisson_extension_field",
    "poisson_kernel_alpha",
    "poisson_mass",
    "ring_average",
    "ring_weight_integral",
    "riesz_potential",
    "riesz_potential_field",
    "spherical_average",
    "DEFAULT_CONFIG",
    "QuadConfig",
    "MuState",
    "Regime",
    "classify_regime",
    "mu_limit",
    "mu_sequence",
    "Params",
    "beta_fn",
    "bubble_prefactor",
    "critical_exponent",
    "frac_lap_constant",
    "gamma_fn",
    "green_constant",
    "i_const",
    "incomplete_kernel_integral",
    "mean_value_constant",
    "poisson_constant",
    "riesz_constant",
    "sphere_area",
    "tau",
    "Bubble",
    "bubble_field",
    "bubble_value",
    "kelvin_deficit",
    "kelvin_field",
    "kelvin_transform",
]

__version__ = "0.1.0"
