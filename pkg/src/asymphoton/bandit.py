"""Monte Carlo sampling of joint decisions and a two-player bandit harness.

Every photon emission is one attempt. With ``resample_on_loss`` a lost pair
is re-emitted until a decision happens, so each trial has one decision and a
geometric number of attempts. Empirical frequencies are counted per attempt,
which makes them directly comparable with the analytic probabilities.

On a conflict both players draw independent Bernoulli rewards from the same
arm; nothing is split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from asymphoton.distribution import JointDecisionDistribution, asymmetry_ratio
from asymphoton.errors import ContractViolation
from asymphoton.systems import distribution_for

GENERATOR_NAME = "numpy.random.PCG64"
MAX_ATTEMPTS = 1_000_000
REPORT_SCHEMA_VERSION = 1


def make_rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not (0 <= seed < 2**64):
        raise ContractViolation(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return make_rng(rng)


def _outcome_table(dist: JointDecisionDistribution) -> np.ndarray:
    """Cumulative probabilities of (pairs in row-major order, then loss)."""
    probs = np.append(dist.p.ravel(), dist.loss)
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    return cum


@dataclass(frozen=True)
class DecisionSample:
    pair: tuple | None  # 1-based (k1, k2); None for a loss event
    attempt_count: int = 1

    @property
    def is_loss(self) -> bool:
        return self.pair is None


def sample_decision(dist, rng, resample_on_loss: bool = True) -> DecisionSample:
    dist = distribution_for(dist)
    rng = _as_rng(rng)
    cum = _outcome_table(dist)
    n_pairs = dist.K * dist.K
    for attempt in range(1, MAX_ATTEMPTS + 1):
        code = int(np.searchsorted(cum, rng.random(), side="right"))
        code = min(code, n_pairs)
        if code < n_pairs:
            k1, k2 = divmod(code, dist.K)
            return DecisionSample((k1 + 1, k2 + 1), attempt)
        if not resample_on_loss:
            return DecisionSample(None, attempt)
    raise RuntimeError(f"no decision after {MAX_ATTEMPTS} attempts; loss probability is {dist.loss!r}")


def sample_outcome_codes(dist: JointDecisionDistribution, n: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized raw sampling: codes 0..K^2-1 are pairs (row-major), K^2 is loss."""
    cum = _outcome_table(dist)
    codes = np.searchsorted(cum, rng.random(n), side="right")
    return np.minimum(codes, dist.K * dist.K)


@dataclass(frozen=True)
class BanditRunReport:
    trials: int
    attempts: int
    counts: np.ndarray  # K x K pair counts
    loss_count: int
    reward_x: float
    reward_y: float
    rng_seed: int
    reward_means: tuple
    resample_on_loss: bool
    generator: str = GENERATOR_NAME

    @property
    def K(self) -> int:
        return self.counts.shape[0]

    @property
    def empirical_p(self) -> np.ndarray:
        return self.counts / self.attempts

    @property
    def empirical_loss(self) -> float:
        return self.loss_count / self.attempts

    @property
    def conflict_rate(self) -> float:
        return float(np.trace(self.counts)) / self.attempts

    @property
    def reward_gap(self) -> float:
        return self.reward_x - self.reward_y

    @property
    def mean_attempts(self) -> float:
        return self.attempts / self.trials

    @property
    def empirical_ratio(self):
        if self.K < 2:
            return None
        return asymmetry_ratio(float(self.counts[0, 1]), float(self.counts[1, 0]))

    def as_dict(self) -> dict:
        ratio = self.empirical_ratio
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "generator": self.generator,
            "rng_seed": self.rng_seed,
            "trials": self.trials,
            "attempts": self.attempts,
            "resample_on_loss": self.resample_on_loss,
            "reward_means": list(self.reward_means),
            "counts": self.counts.tolist(),
            "loss_count": self.loss_count,
            "empirical_p": self.empirical_p.tolist(),
            "empirical_loss": self.empirical_loss,
            "conflict_rate": self.conflict_rate,
            "empirical_ratio": None if ratio is None else (ratio if isinstance(ratio, float) else str(ratio)),
            "mean_attempts": self.mean_attempts,
            "reward_x": self.reward_x,
            "reward_y": self.reward_y,
            "reward_gap": self.reward_gap,
        }


def run_bandit(system, reward_means, trials: int, rng_seed: int, resample_on_loss: bool = True) -> BanditRunReport:
    """Play ``trials`` rounds of the two-player bandit with decisions drawn from ``system``.

    ``system`` is any system config or a JointDecisionDistribution;
    ``reward_means`` holds one Bernoulli mean per arm.
    """
    dist = distribution_for(system)
    trials = int(trials)
    if trials < 1:
        raise ContractViolation(f"trials must be at least 1, got {trials}")
    means = np.asarray(reward_means, dtype=float)
    if means.shape != (dist.K,):
        raise ContractViolation(f"need {dist.K} reward means, got {means.shape}")
    if np.any(~np.isfinite(means)) or np.any(means < 0.0) or np.any(means > 1.0):
        raise ContractViolation("reward means must lie in [0, 1]")
    rng = make_rng(rng_seed)
    K = dist.K
    n_pairs = K * K

    if resample_on_loss:
        decided = 1.0 - dist.loss
        if decided <= 1.0 / MAX_ATTEMPTS:
            raise RuntimeError(f"decision probability {decided!r} too small to resample")
        conditional = JointDecisionDistribution(p=dist.p / dist.p.sum(), loss=0.0)
        codes = sample_outcome_codes(conditional, trials, rng)
        per_trial = rng.geometric(decided, size=trials) if dist.loss > 0.0 else np.ones(trials, dtype=np.int64)
        attempts = int(per_trial.sum())
    else:
        codes = sample_outcome_codes(dist, trials, rng)
        attempts = trials

    counts_all = np.bincount(codes, minlength=n_pairs + 1)
    counts = counts_all[:n_pairs].reshape(K, K)
    loss_count = attempts - int(counts.sum())

    decided_mask = codes < n_pairs
    arm_x = codes[decided_mask] // K
    arm_y = codes[decided_mask] % K
    draws = rng.random((2, int(decided_mask.sum())))
    reward_x = float(np.count_nonzero(draws[0] < means[arm_x]))
    reward_y = float(np.count_nonzero(draws[1] < means[arm_y]))

    return BanditRunReport(
        trials=trials,
        attempts=attempts,
        counts=counts,
        loss_count=loss_count,
        reward_x=reward_x,
        reward_y=reward_y,
        rng_seed=int(rng_seed),
        reward_means=tuple(float(m) for m in means),
        resample_on_loss=bool(resample_on_loss),
    )
