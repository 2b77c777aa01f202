"""Dispatch from any system configuration to its distribution."""

from __future__ import annotations

from asymphoton.attenuation import AttenuationConfig, attenuation_distribution
from asymphoton.distribution import JointDecisionDistribution, SystemId
from asymphoton.entangled import EntangledConfig, entangled_distribution, entangled_distribution_general
from asymphoton.oam import OamSystemConfig, joint_distribution_closed


def system_of(config) -> SystemId:
    if isinstance(config, OamSystemConfig):
        return SystemId.OAM
    if isinstance(config, EntangledConfig):
        return SystemId.ENTANGLED
    if isinstance(config, AttenuationConfig):
        return SystemId.ATTENUATION
    raise TypeError(f"not a system configuration: {type(config).__name__}")


def distribution_for(config) -> JointDecisionDistribution:
    """Distribution of any system config; a distribution passes through unchanged."""
    if isinstance(config, JointDecisionDistribution):
        return config
    system = system_of(config)
    if system is SystemId.OAM:
        return joint_distribution_closed(config)
    if system is SystemId.ENTANGLED:
        if config.in_closed_form_regime():
            return entangled_distribution(config)
        return entangled_distribution_general(config)
    return attenuation_distribution(config)


def describe(config) -> list:
    """Ordered ``(name, value)`` pairs of a config's physical parameters."""
    system = system_of(config)
    if system is SystemId.OAM:
        return [
            ("alpha", config.alpha),
            ("beta", config.beta),
            ("a", tuple(config.phi_input.amplitudes)),
            ("b", tuple(config.psi_input.amplitudes)),
            ("phi", tuple(config.phi_input.phases)),
            ("psi", tuple(config.psi_input.phases)),
        ]
    if system is SystemId.ENTANGLED:
        names = ("theta1", "theta2", "theta_hw1", "theta_hw2", "alpha_x", "beta_x", "alpha_y", "beta_y")
        return [(n, getattr(config, n)) for n in names]
    base = config.base
    return [
        ("a", tuple(base.phi_input.amplitudes)),
        ("b", tuple(base.psi_input.amplitudes)),
        ("phi", tuple(base.phi_input.phases)),
        ("psi", tuple(base.psi_input.phases)),
        ("d_x1", config.d_x1),
        ("d_x2", config.d_x2),
        ("d_y1", config.d_y1),
        ("d_y2", config.d_y2),
    ]
