"""Capillary imbibition in porous building materials: forward solver,
absorption models, calibration and MIP retention tools."""

from ._imbibe import (
    AbsorptionModel,
    CubicParams,
    Error,
    ExperimentSetup,
    KPParams,
    LaplaceConstants,
    MaterialSpec,
    absorbed_mass,
    ambient_moisture,
    breakthrough_time,
    calibrate_cubic,
    calibrate_kp,
    cubic_B,
    cubic_Bprime,
    error_functional,
    kp_B,
    kp_Bprime,
    kp_capillary_pressure,
    kp_diffusion_coefficient,
    kp_permeability,
    mip_saturation,
    mip_to_suction,
    retention_compare,
    run,
    saturated_vapor_density,
    simulate,
    stable_timestep,
    __version__,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
