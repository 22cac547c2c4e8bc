"""Run configuration: a single strict JSON document.

Unknown keys anywhere in the document are errors; every numeric field is
range-checked at load time so that failures happen before any compute.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from .errors import ConfigError

__all__ = ["EXPERIMENTS", "RunConfig"]

EXPERIMENTS = (
    "resolvent_checks",
    "theorem21",
    "theorem22",
    "gamma_norms",
    "propagate_linear",
    "nls_strang",
    "nls_picard",
    "rescaling_checks",
    "embedding_sweep",
)


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    n: int = 512
    L: float = 40.0
    alpha: float = 0.3
    omega: float = 2.0
    t_final: float = 1.0
    n_steps: int = 256
    p: float = 3.0
    mu: int = 1
    n_nodes: int = 400
    t_max_factor: float = 200.0
    seed: int = 0
    output_dir: str = "."

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}"
            )
        if self.n < 16 or self.n & (self.n - 1) != 0:
            raise ConfigError(f"grid.n must be a power of two >= 16, got {self.n}")
        if not self.L > 0:
            raise ConfigError(f"grid.L must be positive, got {self.L}")
        if not self.omega > 0:
            raise ConfigError(f"operator.omega must be positive, got {self.omega}")
        if not self.t_final > 0:
            raise ConfigError(f"time.t_final must be positive, got {self.t_final}")
        if self.n_steps < 1:
            raise ConfigError(f"time.n_steps must be >= 1, got {self.n_steps}")
        if not self.p > 1:
            raise ConfigError(f"nls.p must exceed 1, got {self.p}")
        if self.mu not in (-1, 1):
            raise ConfigError(f"nls.mu must be -1 or +1, got {self.mu}")
        if self.n_nodes < 40:
            raise ConfigError(f"quadrature.n_nodes must be >= 40, got {self.n_nodes}")
        if not self.t_max_factor >= 10:
            raise ConfigError(
                f"quadrature.t_max_factor must be >= 10, got {self.t_max_factor}"
            )
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    # JSON layout groups related fields; the flat dataclass is the in-memory
    # form.

    _GROUPS = {
        "grid": {"n": "n", "L": "L"},
        "operator": {"alpha": "alpha", "omega": "omega"},
        "time": {"t_final": "t_final", "n_steps": "n_steps"},
        "nls": {"p": "p", "mu": "mu"},
        "quadrature": {"n_nodes": "n_nodes", "t_max_factor": "t_max_factor"},
    }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        kwargs = {}
        for key, value in doc.items():
            if key in ("experiment", "seed", "output_dir"):
                kwargs[key] = value
            elif key in cls._GROUPS:
                if not isinstance(value, dict):
                    raise ConfigError(f"config section {key!r} must be an object")
                fields = cls._GROUPS[key]
                for sub, subval in value.items():
                    if sub not in fields:
                        raise ConfigError(f"unknown key {key}.{sub!r}")
                    kwargs[fields[sub]] = subval
            else:
                raise ConfigError(f"unknown key {key!r}")
        if "experiment" not in kwargs:
            raise ConfigError("config must name an experiment")
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        flat = asdict(self)
        doc = {
            "experiment": flat["experiment"],
            "seed": flat["seed"],
            "output_dir": flat["output_dir"],
        }
        for group, fields in self._GROUPS.items():
            doc[group] = {sub: flat[attr] for sub, attr in fields.items()}
        return doc
