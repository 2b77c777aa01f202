"""Parameter inversion: physical settings that realize a target asymmetry ratio.

Each solver returns the minimum-loss construction for its system, in which
one of p12 / p21 is pinned at the system maximum. Achieved probabilities are
always recomputed through the system's own distribution function.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

from asymphoton.attenuation import AttenuationConfig, attenuation_distribution
from asymphoton.distribution import UNBOUNDED, JointDecisionDistribution, SystemId, is_unbounded
from asymphoton.entangled import EntangledConfig, entangled_distribution
from asymphoton.errors import ContractViolation, SolverFailure
from asymphoton.feasibility import frontier_x_of_y
from asymphoton.linalg import SOLVER_TOL
from asymphoton.oam import OamSystemConfig, joint_distribution_closed

MAX_BISECTION_STEPS = 200
QUARTER_PI = math.pi / 4.0


class Locus(str, enum.Enum):
    """Conflict-free OAM amplitude assignments."""

    A2B1_ZERO = "a2b1_zero"  # a = (1, 0), b = (0, 1)
    A1B2_ZERO = "a1b2_zero"  # a = (0, 1), b = (1, 0)


@dataclass(frozen=True)
class RatioSolution:
    system: SystemId
    target_r: object
    parameters: object
    distribution: JointDecisionDistribution
    residual: float
    details: dict = field(default_factory=dict)

    @property
    def achieved_r(self):
        return self.distribution.ratio

    @property
    def achieved_p12(self) -> float:
        return self.distribution.p12

    @property
    def achieved_p21(self) -> float:
        return self.distribution.p21

    @property
    def achieved_loss(self) -> float:
        return self.distribution.loss

    @property
    def achieved_conflict(self) -> float:
        return self.distribution.conflict

    @property
    def frontier_point(self):
        """(loss + conflict, achieved ratio)."""
        return self.distribution.loss_plus_conflict, self.achieved_r

    def frontier_gap(self) -> float:
        """Distance in x between this solution and the frontier at its ratio."""
        x, y = self.frontier_point
        return abs(frontier_x_of_y(self.system, y) - x)


def _normalize_target(r):
    if is_unbounded(r):
        return UNBOUNDED
    try:
        r = float(r)
    except (TypeError, ValueError):
        raise ContractViolation(f"ratio must be a number, got {r!r}") from None
    if math.isnan(r) or r < 0.0:
        raise ContractViolation(f"ratio must be positive, got {r!r}")
    if math.isinf(r):
        return UNBOUNDED
    return r


def ratio_residual(target, achieved, p12: float, p21: float) -> float:
    """Relative error of the achieved ratio; inverse ratio for an unbounded target."""
    if is_unbounded(target):
        return 0.0 if is_unbounded(achieved) else p12 / p21
    if achieved is None or is_unbounded(achieved):
        return math.inf
    return abs(achieved - target) / max(1.0, target)


def bisect(f: Callable[[float], float], lo: float, hi: float, *, f_lo_sign: float, max_steps=MAX_BISECTION_STEPS):
    """Find a sign change of f on [lo, hi]; ``f_lo_sign`` is the sign of f near lo.

    Endpoints are never evaluated, so f may diverge there.
    """
    for _ in range(max_steps):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        value = f(mid)
        if value == 0.0:
            return mid
        if (value > 0.0) == (f_lo_sign > 0.0):
            lo = mid
        else:
            hi = mid
    raise SolverFailure(f"bisection did not converge in {max_steps} steps")


# --- asymmetric OAM -------------------------------------------------------------


def oam_ratio_of_theta(theta: float, locus: Locus | str = Locus.A2B1_ZERO) -> float:
    """p21 / p12 on a conflict-free locus with alpha = cos(theta), beta = sin(theta)."""
    c, s = math.cos(theta), math.sin(theta)
    r = ((c + s) / (c - s)) ** 4
    return r if Locus(locus) is Locus.A2B1_ZERO else 1.0 / r


def _log_ratio(theta: float, locus: Locus) -> float:
    c, s = math.cos(theta), math.sin(theta)
    lr = 4.0 * (math.log(abs(c + s)) - math.log(abs(c - s)))
    return lr if locus is Locus.A2B1_ZERO else -lr


def oam_ratio_polynomial(theta: float, r: float, locus: Locus | str = Locus.A2B1_ZERO) -> float:
    """Trigonometric form of the ratio condition; zero at a solution."""
    sign = 1.0 if Locus(locus) is Locus.A2B1_ZERO else -1.0
    return (
        3.0
        - 3.0 * r
        - math.cos(4.0 * theta)
        + r * math.cos(4.0 * theta)
        + sign * (4.0 * math.sin(2.0 * theta) + 4.0 * r * math.sin(2.0 * theta))
    )


def _locus_amplitudes(locus: Locus):
    if locus is Locus.A2B1_ZERO:
        return (1.0, 0.0), (0.0, 1.0)
    return (0.0, 1.0), (1.0, 0.0)


def solve_oam_theta(r, locus: Locus | str = Locus.A2B1_ZERO) -> float:
    locus = Locus(locus)
    r = _normalize_target(r)
    increasing = locus is Locus.A2B1_ZERO
    if is_unbounded(r):
        return QUARTER_PI if increasing else -QUARTER_PI
    if r == 0.0:
        return -QUARTER_PI if increasing else QUARTER_PI
    if r == 1.0:
        return 0.0
    target = math.log(r)
    return bisect(
        lambda t: _log_ratio(t, locus) - target,
        -QUARTER_PI,
        QUARTER_PI,
        f_lo_sign=-1.0 if increasing else 1.0,
    )


def solve_oam_ratio(r, locus: Locus | str = Locus.A2B1_ZERO) -> RatioSolution:
    locus = Locus(locus)
    target = _normalize_target(r)
    theta = solve_oam_theta(target, locus)
    a, b = _locus_amplitudes(locus)
    if abs(theta) == QUARTER_PI:
        # corner targets: make alpha = +-beta exactly so one pair probability is exactly 0
        h = math.sqrt(0.5)
        config = OamSystemConfig.build(h, math.copysign(h, theta), a, b)
    else:
        config = OamSystemConfig.from_theta(theta, a, b)
    dist = joint_distribution_closed(config)
    details = {"theta": theta, "locus": locus.value}
    if not is_unbounded(target):
        details["polynomial_residual"] = abs(oam_ratio_polynomial(theta, target, locus)) / (1.0 + target)
    residual = ratio_residual(target, dist.ratio, dist.p12, dist.p21)
    if residual > SOLVER_TOL:
        raise SolverFailure(f"OAM ratio solve missed target {target!r}: residual {residual!r}")
    return RatioSolution(SystemId.OAM, target, config, dist, residual, details)


# --- entangled photons ---------------------------------------------------------


def solve_entangled_ratio(r) -> RatioSolution:
    target = _normalize_target(r)
    half_pi = math.pi / 2.0
    if not is_unbounded(target) and target <= 1.0:
        # p12 pinned at 1/2, p21 = r / 2
        pol = dict(alpha_x=0.0, beta_y=half_pi, beta_x=half_pi, alpha_y=math.acos(math.sqrt(target)))
    else:
        inv = 0.0 if is_unbounded(target) else 1.0 / target
        pol = dict(alpha_y=0.0, beta_x=half_pi, beta_y=half_pi, alpha_x=math.acos(math.sqrt(inv)))
    config = EntangledConfig.orthogonal(**pol)
    dist = entangled_distribution(config)
    residual = ratio_residual(target, dist.ratio, dist.p12, dist.p21)
    if residual > SOLVER_TOL:
        raise SolverFailure(f"entangled ratio solve missed target {target!r}: residual {residual!r}")
    return RatioSolution(SystemId.ENTANGLED, target, config, dist, residual)


# --- OAM attenuation -----------------------------------------------------------


def solve_attenuation_ratio(r) -> RatioSolution:
    target = _normalize_target(r)
    # a = (1, 0), b = (0, 1) puts the interference bracket at its maximum of 1
    if not is_unbounded(target) and target <= 1.0:
        d = dict(d_x1=1.0, d_y2=1.0, d_x2=math.sqrt(target), d_y1=1.0)
    else:
        inv = 0.0 if is_unbounded(target) else 1.0 / target
        d = dict(d_x2=1.0, d_y1=1.0, d_x1=math.sqrt(inv), d_y2=1.0)
    config = AttenuationConfig.build((1.0, 0.0), (0.0, 1.0), **d)
    dist = attenuation_distribution(config)
    residual = ratio_residual(target, dist.ratio, dist.p12, dist.p21)
    if residual > SOLVER_TOL:
        raise SolverFailure(f"attenuation ratio solve missed target {target!r}: residual {residual!r}")
    return RatioSolution(SystemId.ATTENUATION, target, config, dist, residual)


def solve_ratio(system: SystemId | str, r, **kwargs) -> RatioSolution:
    system = SystemId(system)
    if system is SystemId.OAM:
        return solve_oam_ratio(r, **kwargs)
    if system is SystemId.ENTANGLED:
        return solve_entangled_ratio(r)
    return solve_attenuation_ratio(r)
