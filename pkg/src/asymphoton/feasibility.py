"""Feasible regions and loss-plus-conflict frontiers of the three systems.

Frontier points are ``(x, y)`` with x the loss plus conflict probability and
y = p21 / p12 the asymmetry ratio. Branches are chosen by the caller:
``upper`` means y >= 1, ``lower`` means y <= 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from asymphoton.attenuation import attenuation_feasible
from asymphoton.distribution import UNBOUNDED, SystemId, is_unbounded
from asymphoton.entangled import entangled_feasible
from asymphoton.errors import ContractViolation, OutsideFrontierDomain
from asymphoton.linalg import EXACT_TOL
from asymphoton.oam import OamSystemConfig


class Branch(str, enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


# x-range [lo, hi] of each system's frontier; the upper branch excludes hi
# except for the OAM system, whose upper branch diverges at lo instead.
FRONTIER_DOMAIN = {
    SystemId.OAM: (0.0, 0.5),
    SystemId.ENTANGLED: (0.0, 0.5),
    SystemId.ATTENUATION: (0.5, 0.75),
}


# --- feasible regions ---------------------------------------------------------


def oam_boundary_gap(p12, p21):
    """1 + (p12 - p21)^2 - 2 (p12 + p21); non-negative inside the feasible zone."""
    p12 = np.asarray(p12, dtype=float)
    p21 = np.asarray(p21, dtype=float)
    return 1.0 + (p12 - p21) ** 2 - 2.0 * (p12 + p21)


def oam_feasible(p12: float, p21: float) -> bool:
    if p12 < 0.0 or p21 < 0.0:
        raise ContractViolation("probabilities must be non-negative")
    return bool(oam_boundary_gap(p12, p21) >= -EXACT_TOL)


def feasible(system: SystemId | str, p12: float, p21: float) -> bool:
    system = SystemId(system)
    if system is SystemId.OAM:
        return oam_feasible(p12, p21)
    if system is SystemId.ENTANGLED:
        return entangled_feasible(p12, p21)
    return attenuation_feasible(p12, p21)


# --- frontiers -----------------------------------------------------------------


def _check_ratio(y) -> None:
    if is_unbounded(y):
        return
    if y is None or not (y >= 0.0) or math.isinf(y):
        raise ContractViolation(f"asymmetry ratio must be a non-negative real or UNBOUNDED, got {y!r}")


def _check_x(system: SystemId, x: float, branch: Branch) -> None:
    lo, hi = FRONTIER_DOMAIN[system]
    open_hi = branch is Branch.UPPER and system is not SystemId.OAM
    ok = lo <= x < hi if open_hi else lo <= x <= hi
    if not ok:
        bracket = ")" if open_hi else "]"
        raise OutsideFrontierDomain(
            f"{system.value} {branch.value} branch is defined for x in [{lo}, {hi}{bracket}, got {x!r}"
        )


def oam_frontier_x_of_y(y) -> float:
    _check_ratio(y)
    if is_unbounded(y):
        return 0.0
    s = math.sqrt(y)
    return 2.0 * s / (s + 1.0) ** 2


def oam_frontier_y_of_x(x: float, branch: Branch | str):
    branch = Branch(branch)
    _check_x(SystemId.OAM, x, branch)
    s = math.sqrt(max(0.0, 1.0 - 2.0 * x))
    if branch is Branch.UPPER:
        if s == 1.0:
            return UNBOUNDED
        return ((1.0 + s) / (1.0 - s)) ** 2
    return ((1.0 - s) / (1.0 + s)) ** 2


def entangled_frontier_x_of_y(y) -> float:
    _check_ratio(y)
    if is_unbounded(y):
        return 0.5
    if y >= 1.0:
        return (y - 1.0) / (2.0 * y)
    return (1.0 - y) / 2.0


def entangled_frontier_y_of_x(x: float, branch: Branch | str) -> float:
    branch = Branch(branch)
    _check_x(SystemId.ENTANGLED, x, branch)
    if branch is Branch.UPPER:
        return 1.0 / (1.0 - 2.0 * x)
    return 1.0 - 2.0 * x


def attenuation_frontier_x_of_y(y) -> float:
    _check_ratio(y)
    if is_unbounded(y):
        return 0.75
    if y >= 1.0:
        return (3.0 * y - 1.0) / (4.0 * y)
    return (3.0 - y) / 4.0


def attenuation_frontier_y_of_x(x: float, branch: Branch | str) -> float:
    branch = Branch(branch)
    _check_x(SystemId.ATTENUATION, x, branch)
    if branch is Branch.UPPER:
        return 1.0 / (3.0 - 4.0 * x)
    return 3.0 - 4.0 * x


_X_OF_Y = {
    SystemId.OAM: oam_frontier_x_of_y,
    SystemId.ENTANGLED: entangled_frontier_x_of_y,
    SystemId.ATTENUATION: attenuation_frontier_x_of_y,
}
_Y_OF_X = {
    SystemId.OAM: oam_frontier_y_of_x,
    SystemId.ENTANGLED: entangled_frontier_y_of_x,
    SystemId.ATTENUATION: attenuation_frontier_y_of_x,
}


def frontier_x_of_y(system: SystemId | str, y) -> float:
    return _X_OF_Y[SystemId(system)](y)


def frontier_y_of_x(system: SystemId | str, x: float, branch: Branch | str):
    return _Y_OF_X[SystemId(system)](x, branch)


def frontier_row(system: SystemId | str, x: float):
    """``(y_upper, y_lower)`` at x; the upper branch's open end maps to UNBOUNDED."""
    system = SystemId(system)
    lo, hi = FRONTIER_DOMAIN[system]
    if system is not SystemId.OAM and x == hi:
        return UNBOUNDED, frontier_y_of_x(system, x, Branch.LOWER)
    return frontier_y_of_x(system, x, Branch.UPPER), frontier_y_of_x(system, x, Branch.LOWER)


def frontier_conversion_check(system: SystemId | str, y_grid) -> float:
    """Max of |y_of_x(x_of_y(y)) - y| / max(1, y) over the grid."""
    system = SystemId(system)
    worst = 0.0
    for y in y_grid:
        y = float(y)
        if y <= 0.0:
            raise ContractViolation(f"ratio grid must be positive, got {y!r}")
        branch = Branch.UPPER if y >= 1.0 else Branch.LOWER
        back = frontier_y_of_x(system, frontier_x_of_y(system, y), branch)
        if is_unbounded(back):
            return math.inf
        worst = max(worst, abs(back - y) / max(1.0, y))
    return worst


# --- boundary witnesses --------------------------------------------------------


@dataclass(frozen=True)
class BoundaryWitness:
    """Integer-indexed configurations that sit exactly on the OAM boundary."""

    n: int
    m: int
    k: int

    @property
    def theta_a(self) -> float:
        return (self.n + self.m + 1) * math.pi / 2.0

    @property
    def theta_b(self) -> float:
        return (self.m - self.n) * math.pi / 2.0

    @property
    def theta(self) -> float:
        return (2 * self.k + 1) * math.pi / 4.0

    def config(self) -> OamSystemConfig:
        a = (math.cos(self.theta_a), math.sin(self.theta_a))
        b = (math.cos(self.theta_b), math.sin(self.theta_b))
        # equal phases on both arms, so the interference term is at cos(0) = 1
        return OamSystemConfig.from_theta(self.theta, a, b)


def oam_boundary_witness(n: int, m: int, k: int) -> OamSystemConfig:
    return BoundaryWitness(n, m, k).config()
