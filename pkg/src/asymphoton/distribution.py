"""Joint decision distributions and the asymmetry-ratio marker."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from asymphoton.linalg import EXACT_TOL


class _Unbounded:
    """Marker for an infinite asymmetry ratio (p12 == 0 < p21).

    Kept out of float arithmetic on purpose: every consumer has to handle it.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()


def is_unbounded(y) -> bool:
    return y is UNBOUNDED


def asymmetry_ratio(p12: float, p21: float):
    """Return p21 / p12, ``UNBOUNDED`` when only p12 vanishes, None when both do."""
    if p12 > 0.0:
        return p21 / p12
    if p21 > 0.0:
        return UNBOUNDED
    return None


def _clamp_probability(value: float, what: str) -> float:
    if value < 0.0:
        if value < -EXACT_TOL:
            raise ArithmeticError(f"{what} is negative beyond rounding: {value!r}")
        return 0.0
    return value


@dataclass(frozen=True)
class JointDecisionDistribution:
    """Probabilities ``p[k1, k2]`` that player X picks arm k1 and Y picks k2.

    Arms are 1-based in the public accessors (``pair(1, 2)``) and 0-based in
    the underlying array. ``loss`` covers every event without a joint decision.
    """

    p: np.ndarray
    loss: float

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] < 1:
            raise ValueError(f"p must be a square K x K matrix, got shape {p.shape}")
        if np.any(p < -EXACT_TOL):
            raise ArithmeticError(f"negative pair probability beyond rounding: {p.min()!r}")
        p[p < 0.0] = 0.0
        p.setflags(write=False)
        loss = _clamp_probability(float(self.loss), "loss")
        total = float(p.sum()) + loss
        if abs(total - 1.0) > EXACT_TOL:
            raise ArithmeticError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "loss", loss)

    @classmethod
    def from_pairs(cls, p) -> "JointDecisionDistribution":
        """Build from the pair matrix alone; loss is whatever probability is left."""
        p = np.array(p, dtype=float)
        if np.any(p < -EXACT_TOL):
            raise ArithmeticError(f"negative pair probability beyond rounding: {p.min()!r}")
        p[p < 0.0] = 0.0
        return cls(p=p, loss=_clamp_probability(1.0 - float(p.sum()), "loss"))

    @property
    def K(self) -> int:
        return self.p.shape[0]

    def pair(self, k1: int, k2: int) -> float:
        if not (1 <= k1 <= self.K and 1 <= k2 <= self.K):
            raise IndexError(f"arms must be in 1..{self.K}, got ({k1}, {k2})")
        return float(self.p[k1 - 1, k2 - 1])

    @property
    def p12(self) -> float:
        return self.pair(1, 2)

    @property
    def p21(self) -> float:
        return self.pair(2, 1)

    @property
    def conflict(self) -> float:
        return float(np.trace(self.p))

    @property
    def ratio(self):
        return asymmetry_ratio(self.p12, self.p21)

    @property
    def loss_plus_conflict(self) -> float:
        return self.loss + self.conflict

    def total(self) -> float:
        return float(self.p.sum()) + self.loss


class SystemId(str, enum.Enum):
    OAM = "oam"
    ENTANGLED = "entangled"
    ATTENUATION = "attenuation"
