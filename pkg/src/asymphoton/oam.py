"""Asymmetric OAM interference system.

Two photons carry polarization (alpha, beta) and an OAM superposition, one
with only positive OAM (player X side amplitudes ``a``, phases ``phi``) and one
with only negative OAM (``b``, ``psi``). They pass a beam splitter, mirrors
and a polarization beam splitter; detectors sum the horizontal and vertical
amplitudes of each OAM mode.

State vectors live in C^2 (polarization) x C^2K (OAM), ordered
``[H: +1..+K, -1..-K, V: +1..+K, -1..-K]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from asymphoton import linalg
from asymphoton.distribution import JointDecisionDistribution
from asymphoton.errors import ContractViolation, InvalidConfiguration, UnsupportedConfiguration
from asymphoton.linalg import EXACT_TOL

TWO_PI = 2.0 * math.pi


def reduce_angle(x: float) -> float:
    """Map an angle to [0, 2*pi)."""
    r = math.fmod(float(x), TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:
        r = 0.0
    return r


class OamSign(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"


class Photon(enum.Enum):
    PHI = "phi"
    PSI = "psi"


@dataclass(frozen=True)
class PolarizationAmplitudes:
    alpha: float
    beta: float

    def __post_init__(self):
        alpha, beta = float(self.alpha), float(self.beta)
        if not (math.isfinite(alpha) and math.isfinite(beta)):
            raise InvalidConfiguration("polarization amplitudes must be finite")
        if abs(alpha * alpha + beta * beta - 1.0) > EXACT_TOL:
            raise InvalidConfiguration(
                f"alpha^2 + beta^2 must be 1, got {alpha * alpha + beta * beta!r}"
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_theta(cls, theta: float) -> "PolarizationAmplitudes":
        return cls(math.cos(theta), math.sin(theta))

    def as_vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)


@dataclass(frozen=True)
class OamSuperposition:
    amplitudes: tuple
    phases: tuple
    sign: OamSign = OamSign.POSITIVE

    def __post_init__(self):
        amps = tuple(float(x) for x in self.amplitudes)
        phases = tuple(reduce_angle(x) for x in self.phases)
        if len(amps) == 0 or len(amps) != len(phases):
            raise InvalidConfiguration(
                f"need one phase per amplitude, got {len(amps)} amplitudes and {len(phases)} phases"
            )
        if not all(math.isfinite(x) for x in amps):
            raise InvalidConfiguration("OAM amplitudes must be finite")
        norm = math.fsum(x * x for x in amps)
        if abs(norm - 1.0) > EXACT_TOL:
            raise InvalidConfiguration(f"sum of squared OAM amplitudes must be 1, got {norm!r}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "sign", OamSign(self.sign))

    @property
    def K(self) -> int:
        return len(self.amplitudes)

    def oam_vector(self) -> np.ndarray:
        """The 2K-dimensional OAM part: positive modes first, then negative."""
        K = self.K
        coeffs = np.asarray(self.amplitudes) * np.exp(1j * np.asarray(self.phases))
        out = np.zeros(2 * K, dtype=complex)
        if self.sign is OamSign.POSITIVE:
            out[:K] = coeffs
        else:
            out[K:] = coeffs
        return out


@dataclass(frozen=True)
class OamSystemConfig:
    pol: PolarizationAmplitudes
    phi_input: OamSuperposition
    psi_input: OamSuperposition

    def __post_init__(self):
        if self.phi_input.sign is not OamSign.POSITIVE:
            raise InvalidConfiguration("the phi photon must carry positive OAM")
        if self.psi_input.sign is not OamSign.NEGATIVE:
            raise InvalidConfiguration("the psi photon must carry negative OAM")
        if self.phi_input.K != self.psi_input.K:
            raise InvalidConfiguration(
                f"both photons need the same arm count, got {self.phi_input.K} and {self.psi_input.K}"
            )
        if self.phi_input.K < 2:
            raise InvalidConfiguration(f"need at least 2 arms, got {self.phi_input.K}")

    @classmethod
    def build(
        cls,
        alpha: float,
        beta: float,
        a: Sequence[float],
        b: Sequence[float],
        phi: Sequence[float] | None = None,
        psi: Sequence[float] | None = None,
    ) -> "OamSystemConfig":
        phi = [0.0] * len(a) if phi is None else phi
        psi = [0.0] * len(b) if psi is None else psi
        return cls(
            PolarizationAmplitudes(alpha, beta),
            OamSuperposition(tuple(a), tuple(phi), OamSign.POSITIVE),
            OamSuperposition(tuple(b), tuple(psi), OamSign.NEGATIVE),
        )

    @classmethod
    def from_theta(cls, theta, a, b, phi=None, psi=None) -> "OamSystemConfig":
        return cls.build(math.cos(theta), math.sin(theta), a, b, phi, psi)

    @property
    def K(self) -> int:
        return self.phi_input.K

    @property
    def alpha(self) -> float:
        return self.pol.alpha

    @property
    def beta(self) -> float:
        return self.pol.beta

    @property
    def a(self) -> np.ndarray:
        return np.asarray(self.phi_input.amplitudes)

    @property
    def b(self) -> np.ndarray:
        return np.asarray(self.psi_input.amplitudes)

    @property
    def phi(self) -> np.ndarray:
        return np.asarray(self.phi_input.phases)

    @property
    def psi(self) -> np.ndarray:
        return np.asarray(self.psi_input.phases)

    def relative_phase(self, k: int) -> float:
        """Half the phase difference of arm k (1-based) between the two photons."""
        _check_arm(k, self.K)
        return (self.phi_input.phases[k - 1] - self.psi_input.phases[k - 1]) / 2.0


def _check_K(K: int) -> int:
    if int(K) != K or K < 1:
        raise InvalidConfiguration(f"arm count must be a positive integer, got {K!r}")
    return int(K)


def _check_arm(k: int, K: int) -> None:
    if not (1 <= k <= K):
        raise ContractViolation(f"arm must be in 1..{K}, got {k}")


# --- optical elements -------------------------------------------------------


def build_beamsplitter(K: int) -> np.ndarray:
    """Beam splitter on the 2K OAM modes: reflection flips the OAM sign with a factor i."""
    K = _check_K(K)
    I = np.eye(K)
    return np.block([[I, 1j * I], [1j * I, I]]) / math.sqrt(2.0)


def build_mirror(K: int) -> np.ndarray:
    K = _check_K(K)
    I = np.eye(K)
    Z = np.zeros((K, K))
    return np.block([[Z, 1j * I], [1j * I, Z]])


def build_pbs(K: int) -> np.ndarray:
    """Polarization beam splitter on the 4K hybrid space.

    Horizontal components pass unchanged; vertical ones are reflected, which
    flips the OAM sign and multiplies by i.
    """
    K = _check_K(K)
    sigma = np.array([[0.0, 1.0], [1.0, 0.0]])
    Z = np.zeros((2 * K, 2 * K))
    return np.block([[np.eye(2 * K), Z], [Z, 1j * linalg.kron(sigma, np.eye(K))]])


def detector_projection(K: int) -> np.ndarray:
    """[I_2K | I_2K]: polarization-blind detection adds H and V amplitudes."""
    K = _check_K(K)
    return np.hstack([np.eye(2 * K), np.eye(2 * K)]).astype(complex)


@lru_cache(maxsize=64)
def _system_operator_cached(K: int) -> np.ndarray:
    RA = build_mirror(K) @ build_beamsplitter(K)
    V = detector_projection(K) @ build_pbs(K) @ linalg.kron(np.eye(2), RA)
    V.setflags(write=False)
    return V


def build_system_operator(K: int) -> np.ndarray:
    """2K x 4K single-photon map, assembled from the element matrices."""
    return _system_operator_cached(_check_K(K)).copy()


def system_operator_closed(K: int) -> np.ndarray:
    K = _check_K(K)
    I = np.eye(K)
    return np.block([[-I, 1j * I, -I, -1j * I], [1j * I, -I, -1j * I, -I]]) / math.sqrt(2.0)


# --- propagation --------------------------------------------------------------


def input_state(config: OamSystemConfig, which: Photon | str) -> np.ndarray:
    which = Photon(which)
    sup = config.phi_input if which is Photon.PHI else config.psi_input
    return linalg.kron(config.pol.as_vector().reshape(2, 1), sup.oam_vector().reshape(-1, 1)).ravel()


def propagate_input(config: OamSystemConfig, which: Photon | str) -> np.ndarray:
    """Detected 2K amplitude vector of one photon after the full system."""
    return linalg.matvec(_system_operator_cached(config.K), input_state(config, which))


def joint_amplitude(config: OamSystemConfig, k1: int, k2: int) -> complex:
    """Amplitude that X detects arm k1 and Y detects arm k2 (closed form)."""
    K = config.K
    _check_arm(k1, K)
    _check_arm(k2, K)
    al, be = config.alpha, config.beta
    a, b, phi, psi = config.a, config.b, config.phi, config.psi
    i, j = k1 - 1, k2 - 1
    plus = (al + be) ** 2 * a[j] * b[i] * np.exp(1j * (phi[j] + psi[i]))
    minus = (al - be) ** 2 * a[i] * b[j] * np.exp(1j * (phi[i] + psi[j]))
    return complex(0.5 * (plus - minus))


def pair_probabilities(alpha, beta, a, b, phi, psi) -> np.ndarray:
    """Vectorized pair-probability matrix.

    ``alpha`` and ``beta`` have a leading batch shape ``S``; ``a, b, phi, psi``
    have shape ``S + (K,)``. Returns ``S + (K, K)`` with entry ``[k1, k2]``.
    The interference term carries cos(2 (theta_k1 - theta_k2)) where
    theta_k = (phi_k - psi_k) / 2.
    """
    alpha = np.asarray(alpha, dtype=float)[..., None, None]
    beta = np.asarray(beta, dtype=float)[..., None, None]
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    delta = np.asarray(phi, dtype=float) - np.asarray(psi, dtype=float)
    plus4 = (alpha + beta) ** 4
    minus4 = (alpha - beta) ** 4
    cross = (alpha + beta) ** 2 * (alpha - beta) ** 2
    a1, a2 = a[..., :, None], a[..., None, :]
    b1, b2 = b[..., :, None], b[..., None, :]
    cos_term = np.cos(delta[..., :, None] - delta[..., None, :])
    return (
        0.25 * a1**2 * b2**2 * minus4
        + 0.25 * a2**2 * b1**2 * plus4
        - 0.5 * a1 * a2 * b1 * b2 * cross * cos_term
    )


def joint_distribution_closed(config: OamSystemConfig) -> JointDecisionDistribution:
    p = pair_probabilities(config.alpha, config.beta, config.a, config.b, config.phi, config.psi)
    return JointDecisionDistribution.from_pairs(p)


def joint_distribution_oracle(config: OamSystemConfig) -> JointDecisionDistribution:
    """Pair probabilities from explicit propagation of both photons.

    For a detection at X (arm k1) and Y (arm k2) each photon can be the one
    that went to X; both routings are added before squaring.
    """
    K = config.K
    phi_out = propagate_input(config, Photon.PHI)
    psi_out = propagate_input(config, Photon.PSI)
    p = np.empty((K, K))
    for i in range(K):
        for j in range(K):
            amp = phi_out[K + i] * psi_out[j] + psi_out[K + i] * phi_out[j]
            p[i, j] = amp.real**2 + amp.imag**2
    return JointDecisionDistribution.from_pairs(p)


def asymmetry_difference(config: OamSystemConfig, k1: int, k2: int) -> float:
    """P(X:k1, Y:k2) - P(X:k2, Y:k1); phases cancel in the difference."""
    _check_arm(k1, config.K)
    _check_arm(k2, config.K)
    a, b = config.a, config.b
    i, j = k1 - 1, k2 - 1
    return float(
        2.0 * config.alpha * config.beta * (a[j] ** 2 * b[i] ** 2 - a[i] ** 2 * b[j] ** 2)
    )


def conflict_probability(config: OamSystemConfig, k: int) -> float:
    """P(X:k, Y:k) = (2 alpha beta a_k b_k)^2; zero in the symmetric regime."""
    _check_arm(k, config.K)
    return float((2.0 * config.alpha * config.beta * config.a[k - 1] * config.b[k - 1]) ** 2)


def tabulated_loss(config: OamSystemConfig) -> float:
    """Loss formula as usually tabulated for two arms.

    It assumes equal relative phases and a conflict probability of
    (alpha beta a_k b_k)^2, so it agrees with ``1 - sum(p)`` only when
    theta_1 == theta_2 and every ``alpha beta a_k b_k`` vanishes.
    """
    if config.K != 2:
        raise UnsupportedConfiguration("the tabulated loss formula is for two arms only")
    al2be2 = (config.alpha * config.beta) ** 2
    a1, a2 = config.a
    b1, b2 = config.b
    return float(
        1.0
        - al2be2
        + (1.0 - 4.0 * al2be2) * a1 * a2 * b1 * b2
        - 0.5 * (1.0 + 2.0 * al2be2) * (a1**2 * b2**2 + a2**2 * b1**2)
    )


def bs_variant_distribution(
    phi_input: OamSuperposition, psi_input: OamSuperposition
) -> JointDecisionDistribution:
    """Two-arm control system with a plain beam splitter in place of the PBS."""
    if phi_input.K != 2 or psi_input.K != 2:
        raise UnsupportedConfiguration("the beam-splitter variant is defined for two arms only")
    a1, a2 = phi_input.amplitudes
    b1, b2 = psi_input.amplitudes
    p = np.array(
        [
            [a1**2 * b1**2 / 4.0, a2**2 * b1**2],
            [a1**2 * b2**2, a2**2 * b2**2 / 4.0],
        ]
    )
    loss = 0.75 * (1.0 - a2**2 * b1**2 - a1**2 * b2**2)
    return JointDecisionDistribution(p=p, loss=loss)
