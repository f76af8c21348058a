"""Experiment configuration: key=value files, flag overrides, canonical hash."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields

from .errors import ConfigError
from .noise import LevyModel

# fields that do not affect results and are excluded from the config hash
_NON_SEMANTIC = {"out", "threads"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = ""
    model: str = "two_point"
    mass: float = 5.0
    jump: float = 1.0
    atoms: str = ""  # "z:mass,z:mass" when model == "atoms"
    alpha: float = 1.0
    t0: float = 1.0
    theta: tuple = (2.0, 8.0, 32.0)
    theta_max: float = 2000.0
    points_per_decade: int = 64
    reps: int = 1000
    seeds: int = 5  # trajectory count for per-seed experiments (asclt, lemma1)
    seed: int = 0
    threads: int = 1
    s_max: float = 3.0
    s_step: float = 0.1
    clip_m: float = 2.0
    mode: str = "wave"  # asclt sanity switch: "wave" | "iid"
    out: str = "out/run"

    def validate(self) -> "ExperimentConfig":
        if self.t0 <= 0:
            raise ConfigError(f"t0 must be positive, got {self.t0}")
        if self.reps < 0:  # 0 = analytic-only path where an experiment supports it
            raise ConfigError(f"reps must be nonnegative, got {self.reps}")
        if self.seeds < 1 or self.threads < 1:
            raise ConfigError("seeds and threads must be >= 1")
        if self.points_per_decade < 1:
            raise ConfigError("points_per_decade must be >= 1")
        if self.theta_max <= 0:
            raise ConfigError(f"theta_max must be positive, got {self.theta_max}")
        if not self.theta or any(v <= 0 for v in self.theta):
            raise ConfigError("theta list must be nonempty and positive")
        if tuple(sorted(self.theta)) != tuple(self.theta):
            raise ConfigError("theta list must be ascending")
        if self.s_max <= 0 or self.s_step <= 0:
            raise ConfigError("s_max and s_step must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.mode not in ("wave", "iid"):
            raise ConfigError(f"mode must be 'wave' or 'iid', got {self.mode!r}")
        return self


def _parse_scalar(name: str, raw: str, like) -> object:
    raw = raw.strip()
    try:
        if isinstance(like, bool):
            return raw.lower() in ("1", "true", "yes")
        if isinstance(like, int):
            return int(raw)
        if isinstance(like, float):
            return float(raw)
        if isinstance(like, tuple):
            return tuple(float(tok) for tok in raw.split(",") if tok.strip())
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {raw!r}") from exc


def parse_config_file(path: str) -> dict:
    """Read key=value lines ('#' comments); unknown keys are errors."""
    known = {f.name: f.default for f in fields(ExperimentConfig)}
    out: dict = {}
    try:
        text = open(path).read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        default = known[key]
        if key == "theta":
            default = (1.0,)
        out[key] = _parse_scalar(key, raw, default)
    return out


def make_config(file_values: dict | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Defaults <- config file <- CLI flag overrides (None values skipped)."""
    merged: dict = {}
    for src in (file_values or {}), (overrides or {}):
        for k, v in src.items():
            if v is not None:
                merged[k] = v
    try:
        cfg = ExperimentConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def build_model(cfg: ExperimentConfig) -> LevyModel:
    """LevyModel from the config; noncentered/invalid models are rejected here."""
    if cfg.model == "atoms":
        if not cfg.atoms:
            raise ConfigError("model=atoms needs atoms=\"z:mass,z:mass\"")
        pairs = []
        for tok in cfg.atoms.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                z, lam = (float(p) for p in tok.split(":"))
            except ValueError as exc:
                raise ConfigError(f"bad atom entry {tok!r}, want z:mass") from exc
            pairs.append((z, lam))
        model = LevyModel.from_atoms(pairs, alpha=cfg.alpha)
    elif cfg.model == "two_point":
        model = LevyModel.two_point(mass=cfg.mass, jump=cfg.jump, alpha=cfg.alpha)
    elif cfg.model == "uniform":
        model = LevyModel.uniform(mass=cfg.mass, jump=cfg.jump, alpha=cfg.alpha)
    else:
        raise ConfigError(f"unknown model kind {cfg.model!r}")
    model.require_centered()
    return model


def config_hash(cfg: ExperimentConfig) -> str:
    """sha256 over the canonical semantic key=value listing (12 hex chars)."""
    parts = []
    for f in sorted(fields(ExperimentConfig), key=lambda f: f.name):
        if f.name in _NON_SEMANTIC:
            continue
        v = getattr(cfg, f.name)
        if isinstance(v, tuple):
            v = ",".join(repr(float(x)) for x in v)
        elif isinstance(v, float):
            v = repr(v)
        parts.append(f"{f.name}={v}")
    return hashlib.sha256("\n".join(parts).encode()).hexdigest()[:12]
