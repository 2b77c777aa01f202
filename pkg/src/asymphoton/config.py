"""Experiment configuration files and parameter parsing.

Files are INI-style (UTF-8, ``key = value`` lines grouped in sections)::

    [experiment]
    system = oam            ; oam | entangled | attenuation | bs
    seed = 12345
    out = report.json
    format = json

    [system]                ; parameters of the selected system, radians only
    theta = 0.3
    a = 1, 0
    b = 0, 1
    ; or instead: target_r = 4  (and for oam, locus = a2b1_zero)

    [sweep]
    samples = 100000
    arms = 2

    [bandit]
    rewards = 0.9, 0.1
    trials = 1000000
    resample_on_loss = true

Command-line flags override file values.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from asymphoton.attenuation import AttenuationConfig
from asymphoton.distribution import SystemId
from asymphoton.entangled import EntangledConfig
from asymphoton.oam import OamSign, OamSuperposition, OamSystemConfig

# inputs this close to unit norm are rescaled; anything further off is an error
NORMALIZE_SLACK = 1e-3

SYSTEM_KEYS = {
    "oam": ("alpha", "beta", "theta", "a", "b", "phi", "psi"),
    "entangled": ("theta1", "theta2", "theta_hw1", "theta_hw2", "alpha_x", "beta_x", "alpha_y", "beta_y"),
    "attenuation": ("a", "b", "phi", "psi", "d_x1", "d_x2", "d_y1", "d_y2"),
    "bs": ("a", "b"),
}
SOLVER_KEYS = ("target_r", "locus")
ANGLE_KEYS = {"theta", "phi", "psi", "theta1", "theta2", "theta_hw1", "theta_hw2", "alpha_x", "beta_x", "alpha_y", "beta_y"}

_UNIT_SUFFIX = re.compile(r"(deg|degrees?|°|rad|grad)\s*$", re.IGNORECASE)


class ConfigError(ValueError):
    """A configuration value could not be parsed; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def parse_float(text, name: str, *, angle: bool = False) -> float:
    raw = str(text).strip()
    if angle and _UNIT_SUFFIX.search(raw):
        raise ConfigError(name, f"angles are plain radians, unit suffixes are not accepted ({raw!r})")
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(name, f"not a number: {raw!r}") from None
    if math.isnan(value) or math.isinf(value):
        raise ConfigError(name, f"must be finite, got {raw!r}")
    return value


def parse_vector(text, name: str, *, length: int | None = None, angle: bool = False) -> tuple:
    parts = [p for p in re.split(r"[,\s]+", str(text).strip()) if p]
    if not parts:
        raise ConfigError(name, "empty list")
    values = tuple(parse_float(p, name, angle=angle) for p in parts)
    if length is not None and len(values) != length:
        raise ConfigError(name, f"expected {length} comma-separated values, got {len(values)}")
    return values


def parse_int(text, name: str, *, minimum: int | None = None, maximum: int | None = None) -> int:
    raw = str(text).strip()
    try:
        value = int(raw, 0)
    except ValueError:
        raise ConfigError(name, f"not an integer: {raw!r}") from None
    if minimum is not None and value < minimum:
        raise ConfigError(name, f"must be at least {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ConfigError(name, f"must be at most {maximum}, got {value}")
    return value


def parse_bool(text, name: str) -> bool:
    raw = str(text).strip().lower()
    if raw in ("1", "true", "yes", "on"):
        return True
    if raw in ("0", "false", "no", "off"):
        return False
    raise ConfigError(name, f"not a boolean: {raw!r}")


def parse_seed(text, name: str = "seed") -> int:
    return parse_int(text, name, minimum=0, maximum=2**64 - 1)


def _normalized(values: tuple, name: str) -> tuple:
    norm2 = math.fsum(v * v for v in values)
    if abs(norm2 - 1.0) > NORMALIZE_SLACK:
        raise ConfigError(name, f"squared norm must be 1, got {norm2!r}")
    scale = 1.0 / math.sqrt(norm2)
    return tuple(v * scale for v in values)


def build_system_config(system: str, values: dict, label=lambda key: key):
    """Turn raw ``key -> text`` values into a system configuration object.

    ``label`` maps a key to the name used in error messages (a flag or a file
    field). For the ``bs`` control system a pair of OAM superpositions is returned.
    """
    system = str(system)
    if system not in SYSTEM_KEYS:
        raise ConfigError(label("system"), f"unknown system {system!r}; choose from {', '.join(SYSTEM_KEYS)}")
    known = set(SYSTEM_KEYS[system])
    for key in values:
        if key not in known:
            raise ConfigError(label(key), f"not a parameter of the {system} system")

    def num(key, default):
        return default if key not in values else parse_float(values[key], label(key), angle=key in ANGLE_KEYS)

    if system == "entangled":
        kwargs = {key: num(key, getattr(EntangledConfig, key)) for key in SYSTEM_KEYS["entangled"]}
        if "theta2" not in values:
            kwargs["theta2"] = kwargs["theta1"] + math.pi / 2
        if "theta_hw2" not in values:
            kwargs["theta_hw2"] = kwargs["theta_hw1"]
        return EntangledConfig(**kwargs)

    if "a" not in values:
        raise ConfigError(label("a"), "required")
    if "b" not in values:
        raise ConfigError(label("b"), "required")
    a = parse_vector(values["a"], label("a"))
    if len(a) < 2:
        raise ConfigError(label("a"), f"need one amplitude per arm (at least 2), got {len(a)}")
    if system in ("attenuation", "bs") and len(a) != 2:
        raise ConfigError(label("a"), f"the {system} system has exactly 2 arms, got {len(a)}")
    K = len(a)
    b = parse_vector(values["b"], label("b"), length=K)
    a, b = _normalized(a, label("a")), _normalized(b, label("b"))
    if system == "bs":
        return (
            OamSuperposition(a, (0.0,) * K, OamSign.POSITIVE),
            OamSuperposition(b, (0.0,) * K, OamSign.NEGATIVE),
        )
    phi = parse_vector(values["phi"], label("phi"), length=K, angle=True) if "phi" in values else (0.0,) * K
    psi = parse_vector(values["psi"], label("psi"), length=K, angle=True) if "psi" in values else (0.0,) * K

    if system == "attenuation":
        ds = {key: num(key, 1.0) for key in ("d_x1", "d_x2", "d_y1", "d_y2")}
        for key, d in ds.items():
            if not 0.0 <= d <= 1.0:
                raise ConfigError(label(key), f"attenuation must lie in [0, 1], got {d!r}")
        return AttenuationConfig.build(a, b, phi, psi, **ds)

    if "theta" in values:
        if "alpha" in values or "beta" in values:
            raise ConfigError(label("theta"), "give either theta or alpha/beta, not both")
        theta = num("theta", 0.0)
        return OamSystemConfig.from_theta(theta, a, b, phi, psi)
    if "alpha" not in values or "beta" not in values:
        raise ConfigError(label("alpha"), "give theta, or both alpha and beta")
    try:
        alpha, beta = _normalized((num("alpha", 1.0), num("beta", 0.0)), label("alpha"))
    except ConfigError:
        raise ConfigError(label("alpha"), "alpha^2 + beta^2 must be 1") from None
    return OamSystemConfig.build(alpha, beta, a, b, phi, psi)


@dataclass
class ExperimentConfig:
    system: SystemId
    system_values: dict = field(default_factory=dict)
    target_r: str | None = None
    locus: str = "a2b1_zero"
    seed: int = 0
    samples: int = 1
    arms: int = 2
    rewards: tuple | None = None
    trials: int | None = None
    resample_on_loss: bool = True
    out: str | None = None
    format: str | None = None

    def system_config(self, label=lambda key: f"[system] {key}"):
        """The configured system; solves for it when ``target_r`` is set."""
        if self.target_r is not None:
            from asymphoton.solver import solve_ratio

            r = parse_float(self.target_r, label("target_r")) if self.target_r.strip().lower() != "inf" else math.inf
            if r <= 0:
                raise ConfigError(label("target_r"), f"must be positive, got {self.target_r!r}")
            kwargs = {"locus": self.locus} if self.system is SystemId.OAM else {}
            return solve_ratio(self.system, r, **kwargs).parameters
        return build_system_config(self.system.value, self.system_values, label)


def read_config_file(path) -> dict:
    """Raw ``section -> {key: text}`` mapping of an experiment file."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config file: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(str(path), f"malformed config file: {exc}") from None
    known = {"experiment", "system", "sweep", "bandit"}
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"[{section}]", f"unknown section; expected one of {sorted(known)}")
    return {s: dict(parser.items(s)) for s in parser.sections()}


def experiment_from_raw(raw: dict, overrides: dict | None = None) -> ExperimentConfig:
    """Validate a raw mapping; ``overrides`` holds flag values as ``(section, key) -> text``."""
    merged = {s: dict(v) for s, v in raw.items()}
    for (section, key), value in (overrides or {}).items():
        if value is not None:
            merged.setdefault(section, {})[key] = value
    exp = merged.get("experiment", {})
    if "system" not in exp:
        raise ConfigError("[experiment] system", "required")
    system_name = exp["system"].strip()
    try:
        system = SystemId(system_name)
    except ValueError:
        raise ConfigError("[experiment] system", f"unknown system {system_name!r}") from None
    for key in exp:
        if key not in ("system", "seed", "out", "format"):
            raise ConfigError(f"[experiment] {key}", "unknown key")
    sys_values = dict(merged.get("system", {}))
    target_r = sys_values.pop("target_r", None)
    locus = sys_values.pop("locus", "a2b1_zero").strip()
    sweep = merged.get("sweep", {})
    bandit = merged.get("bandit", {})
    cfg = ExperimentConfig(system=system, system_values=sys_values, target_r=target_r, locus=locus)
    if "seed" in exp:
        cfg.seed = parse_seed(exp["seed"], "[experiment] seed")
    cfg.out = exp.get("out")
    cfg.format = exp.get("format")
    if "samples" in sweep:
        cfg.samples = parse_int(sweep["samples"], "[sweep] samples", minimum=1)
    if "arms" in sweep:
        cfg.arms = parse_int(sweep["arms"], "[sweep] arms", minimum=2)
    if "rewards" in bandit:
        cfg.rewards = parse_vector(bandit["rewards"], "[bandit] rewards")
        if any(not 0.0 <= m <= 1.0 for m in cfg.rewards):
            raise ConfigError("[bandit] rewards", "reward means must lie in [0, 1]")
    if "trials" in bandit:
        cfg.trials = parse_int(bandit["trials"], "[bandit] trials", minimum=1)
    if "resample_on_loss" in bandit:
        cfg.resample_on_loss = parse_bool(bandit["resample_on_loss"], "[bandit] resample_on_loss")
    return cfg


def load_experiment(path, overrides: dict | None = None) -> ExperimentConfig:
    return experiment_from_raw(read_config_file(path), overrides)
