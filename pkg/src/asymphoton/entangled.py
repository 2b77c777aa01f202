"""Entangled-photon decision maker with half-wave plates and polarizers.

Photon 1 decides for player X (APD1 -> arm 1, APD2 -> arm 2), photon 2 for
player Y (APD3 -> arm 1, APD4 -> arm 2). Polarizer orientations scale each
output port's amplitude, so the deficit from 1 is photon loss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from asymphoton.distribution import JointDecisionDistribution
from asymphoton.errors import ClosedFormInapplicable, InvalidConfiguration
from asymphoton.linalg import EXACT_TOL, SOLVER_TOL
from asymphoton.oam import TWO_PI, reduce_angle

MAX_PAIR_PROBABILITY = 0.5


@dataclass(frozen=True)
class EntangledConfig:
    theta1: float = 0.0
    theta2: float = math.pi / 2
    theta_hw1: float = 0.0
    theta_hw2: float = 0.0
    alpha_x: float = 0.0
    beta_x: float = math.pi / 2
    alpha_y: float = 0.0
    beta_y: float = math.pi / 2

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not math.isfinite(value):
                raise InvalidConfiguration(f"{f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, reduce_angle(value))

    @classmethod
    def orthogonal(cls, theta1=0.0, theta_hw=0.0, **polarizers) -> "EntangledConfig":
        """Config in the closed-form regime: orthogonal inputs, equal wave plates."""
        return cls(
            theta1=theta1, theta2=theta1 + math.pi / 2, theta_hw1=theta_hw, theta_hw2=theta_hw, **polarizers
        )

    def in_closed_form_regime(self, tol: float = SOLVER_TOL) -> bool:
        return _angle_close(self.theta2 - self.theta1, math.pi / 2, tol) and _angle_close(
            self.theta_hw1, self.theta_hw2, tol
        )


def _angle_close(x: float, y: float, tol: float) -> bool:
    d = math.fmod(x - y, TWO_PI)
    d = abs(d)
    return min(d, TWO_PI - d) <= tol


def general_amplitudes(theta1, theta2, theta_hw1, theta_hw2, alpha_x, beta_x, alpha_y, beta_y) -> np.ndarray:
    """Output amplitudes ``(X1Y1, X1Y2, X2Y1, X2Y2)``; broadcasts over array inputs.

    The antisymmetric input term enters with an explicit minus sign (a pi
    phase shift), then the pair is scaled by 1/sqrt(2).
    """
    theta1, theta2, h1, h2, ax, bx, ay, by = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (theta1, theta2, theta_hw1, theta_hw2, alpha_x, beta_x, alpha_y, beta_y))
    )

    def photon(h, theta, pol_h, pol_v):
        return np.stack([np.cos(pol_h) * np.cos(2 * h - theta), np.sin(pol_v) * np.sin(2 * h - theta)], axis=-1)

    # first term: photon with theta1 into PBS 1, theta2 into PBS 2
    x1 = photon(h1, theta1, ax, bx)
    y1 = photon(h2, theta2, ay, by)
    # second term: swapped polarizations
    x2 = photon(h1, theta2, ax, bx)
    y2 = photon(h2, theta1, ay, by)
    term1 = (x1[..., :, None] * y1[..., None, :]).reshape(x1.shape[:-1] + (4,))
    term2 = (x2[..., :, None] * y2[..., None, :]).reshape(x2.shape[:-1] + (4,))
    return (term1 - term2) / math.sqrt(2.0)


def entangled_amplitudes_general(config: EntangledConfig) -> np.ndarray:
    return general_amplitudes(
        config.theta1,
        config.theta2,
        config.theta_hw1,
        config.theta_hw2,
        config.alpha_x,
        config.beta_x,
        config.alpha_y,
        config.beta_y,
    ).astype(complex)


def entangled_distribution_general(config: EntangledConfig) -> JointDecisionDistribution:
    """Distribution from the general amplitudes; valid for any wave-plate setting."""
    amps = entangled_amplitudes_general(config)
    return JointDecisionDistribution.from_pairs((np.abs(amps) ** 2).reshape(2, 2))


def entangled_pair_probabilities(alpha_x, beta_x, alpha_y, beta_y) -> np.ndarray:
    """Closed-form ``(..., 2, 2)`` pair matrix; diagonal is identically zero."""
    alpha_x, beta_x, alpha_y, beta_y = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (alpha_x, beta_x, alpha_y, beta_y))
    )
    p = np.zeros(alpha_x.shape + (2, 2))
    p[..., 0, 1] = np.sin(beta_y) ** 2 * np.cos(alpha_x) ** 2 / 2.0
    p[..., 1, 0] = np.sin(beta_x) ** 2 * np.cos(alpha_y) ** 2 / 2.0
    return p


def entangled_distribution(config: EntangledConfig) -> JointDecisionDistribution:
    if not config.in_closed_form_regime():
        raise ClosedFormInapplicable(
            "closed form needs theta2 = theta1 + pi/2 and equal wave-plate angles; "
            "use entangled_distribution_general instead"
        )
    p = entangled_pair_probabilities(config.alpha_x, config.beta_x, config.alpha_y, config.beta_y)
    return JointDecisionDistribution.from_pairs(p)


def entangled_feasible(p12: float, p21: float) -> bool:
    return p12 <= MAX_PAIR_PROBABILITY + EXACT_TOL and p21 <= MAX_PAIR_PROBABILITY + EXACT_TOL
