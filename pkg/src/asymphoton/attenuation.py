"""OAM attenuation decision system.

A symmetric two-arm OAM core (horizontal polarization only) followed by an
attenuator on each detector arm. Attenuations are amplitude factors, so
probabilities scale with their squares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from asymphoton.distribution import JointDecisionDistribution
from asymphoton.errors import InvalidConfiguration
from asymphoton.linalg import EXACT_TOL
from asymphoton.oam import OamSystemConfig

MAX_PAIR_PROBABILITY = 0.25


@dataclass(frozen=True)
class AttenuationConfig:
    base: OamSystemConfig
    d_x1: float = 1.0
    d_x2: float = 1.0
    d_y1: float = 1.0
    d_y2: float = 1.0

    def __post_init__(self):
        if self.base.K != 2:
            raise InvalidConfiguration(f"attenuation system has two arms, got K={self.base.K}")
        if self.base.alpha != 1.0 or self.base.beta != 0.0:
            raise InvalidConfiguration("attenuation core must be horizontally polarized (alpha=1, beta=0)")
        for name in ("d_x1", "d_x2", "d_y1", "d_y2"):
            d = float(getattr(self, name))
            if not (0.0 <= d <= 1.0):
                raise InvalidConfiguration(f"{name} must lie in [0, 1], got {d!r}")
            object.__setattr__(self, name, d)

    @classmethod
    def build(cls, a, b, phi=None, psi=None, *, d_x1=1.0, d_x2=1.0, d_y1=1.0, d_y2=1.0):
        return cls(OamSystemConfig.build(1.0, 0.0, a, b, phi, psi), d_x1, d_x2, d_y1, d_y2)


def interference_bracket(a, b, phi, psi) -> np.ndarray:
    """a1^2 b2^2 + a2^2 b1^2 - 2 a1 a2 b1 b2 cos(relative phase); lies in [0, 1]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    delta = np.asarray(phi, dtype=float) - np.asarray(psi, dtype=float)
    a1, a2 = a[..., 0], a[..., 1]
    b1, b2 = b[..., 0], b[..., 1]
    cos_term = np.cos(delta[..., 0] - delta[..., 1])
    return a1**2 * b2**2 + a2**2 * b1**2 - 2.0 * a1 * a2 * b1 * b2 * cos_term


def attenuation_pair_probabilities(a, b, phi, psi, d_x1, d_x2, d_y1, d_y2) -> np.ndarray:
    bracket = interference_bracket(a, b, phi, psi)
    p = np.zeros(np.shape(bracket) + (2, 2))
    p[..., 0, 1] = 0.25 * bracket * np.asarray(d_x1) ** 2 * np.asarray(d_y2) ** 2
    p[..., 1, 0] = 0.25 * bracket * np.asarray(d_x2) ** 2 * np.asarray(d_y1) ** 2
    return p


def attenuation_distribution(config: AttenuationConfig) -> JointDecisionDistribution:
    base = config.base
    p = attenuation_pair_probabilities(
        base.a, base.b, base.phi, base.psi, config.d_x1, config.d_x2, config.d_y1, config.d_y2
    )
    return JointDecisionDistribution.from_pairs(p)


def attenuation_feasible(p12: float, p21: float) -> bool:
    return p12 <= MAX_PAIR_PROBABILITY + EXACT_TOL and p21 <= MAX_PAIR_PROBABILITY + EXACT_TOL

