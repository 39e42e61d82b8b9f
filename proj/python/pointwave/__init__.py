"""Point-coupled oscillator / wave-field simulation toolkit.

Thin Python surface over the C++ core: closed-form solutions, reduced-ODE
integration, kernel (non-local) runs and scenario execution. Scenario text
uses the same flat ``section.key = value`` format as the command-line tool.
"""

from ._pointwave import (
    ConfigError,
    FieldConfig,
    OscillatorParams,
    SolverError,
    SteadyState,
    characteristic_roots,
    damped_response,
    free_field,
    homogeneous_field,
    homogeneous_trajectory,
    kernel_value,
    propagator_components,
    reflection_profile,
    run_scenario,
    steady_state,
)

__all__ = [
    "ConfigError",
    "FieldConfig",
    "OscillatorParams",
    "SolverError",
    "SteadyState",
    "characteristic_roots",
    "damped_response",
    "free_field",
    "homogeneous_field",
    "homogeneous_trajectory",
    "kernel_value",
    "propagator_components",
    "reflection_profile",
    "run_scenario",
    "steady_state",
]
