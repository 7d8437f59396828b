"""Per-channel localization budget on the ground versus in space.

Each decoherence channel contributes a localization rate Lambda in m^-2 s^-1
(the coefficient of the position double-commutator in the master equation);
rates add across channels. This script prints the full budget for a lab
environment (300 K, 1e-5 Pa air) and for a thermally shielded space platform
(35 K, 1e-12 Pa hydrogen), with the sphere internally at 400 K in both.

On the ground, gas collisions dominate by many orders of magnitude; in space
the residual budget drops to the point where a collapse model at
lambda = 1e-13 Hz would be the largest term.
"""
from waxsim import (
    CSLParams,
    fused_silica_particle,
    ground_environment,
    space_environment,
    total_budget,
)

particle = fused_silica_particle()
collapse = CSLParams(collapse_rate=1e-13, correlation_length=100e-9)

for label, environment in (("ground", ground_environment()), ("space", space_environment())):
    budget = total_budget(particle, environment, collapse)
    print(f"--- {label}: T_env = {environment.temperature} K, "
          f"P = {environment.gas_pressure} Pa ---")
    print(f"  blackbody scattering : {budget.blackbody_scattering:12.4e}")
    print(f"  blackbody absorption : {budget.blackbody_absorption:12.4e}")
    print(f"  blackbody emission   : {budget.blackbody_emission:12.4e}")
    print(f"  gas collisions       : {budget.gas_collisions:12.4e}")
    print(f"  collapse (1e-13 Hz)  : {budget.csl:12.4e}")
    print(f"  total                : {budget.total:12.4e}  [m^-2 s^-1]")
    print()

ground = total_budget(particle, ground_environment(), collapse)
space = total_budget(particle, space_environment(), collapse)
standard_ground = ground.total - ground.csl
standard_space = space.total - space.csl
print(f"standard-physics budget, ground/space: {standard_ground / standard_space:.2e}")
print(f"collapse share of the space budget: {space.csl / space.total:.1%}")
