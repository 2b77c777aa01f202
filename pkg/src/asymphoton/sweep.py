"""Random parameter sweeps over the three systems.

Samples are drawn in fixed-size blocks; block ``i`` gets its own generator
seeded from ``(master_seed, i)``. Serial and parallel runs therefore produce
the same rows once blocks are assembled in index order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from asymphoton.attenuation import AttenuationConfig, attenuation_pair_probabilities
from asymphoton.distribution import SystemId
from asymphoton.entangled import EntangledConfig, entangled_pair_probabilities
from asymphoton.errors import ContractViolation
from asymphoton.linalg import EXACT_TOL
from asymphoton.oam import OamSystemConfig, pair_probabilities

BLOCK_SIZE = 4096
SWEEP_COLUMNS = ("p12", "p21", "loss", "conflict", "ratio")
TWO_PI = 2.0 * math.pi


def block_rng(master_seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(block),))
    return np.random.Generator(np.random.PCG64(ss))


def _unit_vectors(rng: np.random.Generator, n: int, K: int) -> np.ndarray:
    if K == 2:
        t = rng.uniform(0.0, TWO_PI, n)
        return np.stack([np.cos(t), np.sin(t)], axis=-1)
    v = rng.standard_normal((n, K))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sample_block(system: SystemId | str, rng: np.random.Generator, n: int, K: int = 2) -> dict:
    """Random physical parameters for ``n`` configurations, as arrays."""
    system = SystemId(system)
    if system is SystemId.OAM:
        theta = rng.uniform(0.0, TWO_PI, n)
        return {
            "alpha": np.cos(theta),
            "beta": np.sin(theta),
            "a": _unit_vectors(rng, n, K),
            "b": _unit_vectors(rng, n, K),
            "phi": rng.uniform(0.0, TWO_PI, (n, K)),
            "psi": rng.uniform(0.0, TWO_PI, (n, K)),
        }
    if K != 2:
        raise ContractViolation(f"{system.value} system has two arms only")
    if system is SystemId.ENTANGLED:
        theta1 = rng.uniform(0.0, TWO_PI, n)
        hw = rng.uniform(0.0, TWO_PI, n)
        angles = rng.uniform(0.0, TWO_PI, (4, n))
        return {
            "theta1": theta1,
            "theta2": theta1 + math.pi / 2,
            "theta_hw1": hw,
            "theta_hw2": hw,
            "alpha_x": angles[0],
            "beta_x": angles[1],
            "alpha_y": angles[2],
            "beta_y": angles[3],
        }
    return {
        "a": _unit_vectors(rng, n, 2),
        "b": _unit_vectors(rng, n, 2),
        "phi": rng.uniform(0.0, TWO_PI, (n, 2)),
        "psi": rng.uniform(0.0, TWO_PI, (n, 2)),
        "d_x1": rng.uniform(0.0, 1.0, n),
        "d_x2": rng.uniform(0.0, 1.0, n),
        "d_y1": rng.uniform(0.0, 1.0, n),
        "d_y2": rng.uniform(0.0, 1.0, n),
    }


def block_pair_probabilities(system: SystemId | str, params: dict) -> np.ndarray:
    system = SystemId(system)
    if system is SystemId.OAM:
        return pair_probabilities(params["alpha"], params["beta"], params["a"], params["b"], params["phi"], params["psi"])
    if system is SystemId.ENTANGLED:
        return entangled_pair_probabilities(params["alpha_x"], params["beta_x"], params["alpha_y"], params["beta_y"])
    return attenuation_pair_probabilities(
        params["a"], params["b"], params["phi"], params["psi"],
        params["d_x1"], params["d_x2"], params["d_y1"], params["d_y2"],
    )


def configs_from_block(system: SystemId | str, params: dict) -> list:
    """Scalar config objects for each row of a parameter block."""
    system = SystemId(system)
    n = len(next(iter(params.values())))
    out = []
    for i in range(n):
        row = {k: v[i] for k, v in params.items()}
        if system is SystemId.OAM:
            out.append(OamSystemConfig.build(row["alpha"], row["beta"], row["a"], row["b"], row["phi"], row["psi"]))
        elif system is SystemId.ENTANGLED:
            out.append(EntangledConfig(**{k: float(v) for k, v in row.items()}))
        else:
            out.append(
                AttenuationConfig.build(
                    row["a"], row["b"], row["phi"], row["psi"],
                    d_x1=row["d_x1"], d_x2=row["d_x2"], d_y1=row["d_y1"], d_y2=row["d_y2"],
                )
            )
    return out


def summarize(p: np.ndarray) -> np.ndarray:
    """Rows of (p12, p21, loss, conflict, ratio) from a (n, K, K) pair array."""
    if np.any(p < -EXACT_TOL):
        raise ArithmeticError(f"negative pair probability beyond rounding: {p.min()!r}")
    p = np.where(p < 0.0, 0.0, p)
    total = p.sum(axis=(1, 2))
    loss = 1.0 - total
    if np.any(loss < -EXACT_TOL):
        raise ArithmeticError(f"pair probabilities exceed 1: {total.max()!r}")
    loss = np.where(loss < 0.0, 0.0, loss)
    p12 = p[:, 0, 1]
    p21 = p[:, 1, 0]
    conflict = np.trace(p, axis1=1, axis2=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(p12 > 0.0, p21 / np.where(p12 > 0.0, p12, 1.0), np.where(p21 > 0.0, np.inf, np.nan))
    return np.column_stack([p12, p21, loss, conflict, ratio])


def block_layout(samples: int, block_size: int = BLOCK_SIZE):
    if samples < 1:
        raise ContractViolation(f"samples must be at least 1, got {samples}")
    n_blocks = -(-samples // block_size)
    return [(i, min(block_size, samples - i * block_size)) for i in range(n_blocks)]


def sweep_block(system: str, seed: int, block: int, count: int, K: int = 2) -> np.ndarray:
    params = sample_block(system, block_rng(seed, block), count, K)
    return summarize(block_pair_probabilities(system, params))


def sample_parameters(system: SystemId | str, samples: int, seed: int, K: int = 2) -> list:
    """Parameter blocks exactly as a sweep with the same seed draws them."""
    return [sample_block(system, block_rng(seed, i), n, K) for i, n in block_layout(samples)]


def sweep_rows(system: SystemId | str, samples: int, seed: int, *, K: int = 2, workers: int = 1) -> np.ndarray:
    system = SystemId(system).value
    layout = block_layout(samples)
    if workers <= 1 or len(layout) == 1:
        blocks = [sweep_block(system, seed, i, n, K) for i, n in layout]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(sweep_block, system, seed, i, n, K) for i, n in layout]
            blocks = [f.result() for f in futures]
    return np.vstack(blocks)
