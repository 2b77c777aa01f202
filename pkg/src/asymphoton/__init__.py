"""Simulation of photonic systems for asymmetric two-player decision-making."""

__version__ = "0.1.0"

from asymphoton.attenuation import AttenuationConfig, attenuation_distribution, attenuation_feasible
from asymphoton.bandit import BanditRunReport, DecisionSample, run_bandit, sample_decision
from asymphoton.distribution import UNBOUNDED, JointDecisionDistribution, SystemId, asymmetry_ratio, is_unbounded
from asymphoton.entangled import (
    EntangledConfig,
    entangled_amplitudes_general,
    entangled_distribution,
    entangled_distribution_general,
    entangled_feasible,
)
from asymphoton.feasibility import (
    Branch,
    BoundaryWitness,
    attenuation_frontier_y_of_x,
    entangled_frontier_y_of_x,
    frontier_conversion_check,
    frontier_x_of_y,
    frontier_y_of_x,
    oam_boundary_witness,
    oam_feasible,
    oam_frontier_x_of_y,
    oam_frontier_y_of_x,
)
from asymphoton.oam import (
    OamSign,
    OamSuperposition,
    OamSystemConfig,
    Photon,
    PolarizationAmplitudes,
    asymmetry_difference,
    bs_variant_distribution,
    build_beamsplitter,
    build_mirror,
    build_pbs,
    build_system_operator,
    joint_amplitude,
    joint_distribution_closed,
    joint_distribution_oracle,
    propagate_input,
)
from asymphoton.solver import (
    Locus,
    RatioSolution,
    solve_attenuation_ratio,
    solve_entangled_ratio,
    solve_oam_ratio,
    solve_ratio,
)
from asymphoton.systems import distribution_for
