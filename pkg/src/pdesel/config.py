"""Run configuration shared by the command line and the demo scripts."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Optional, Union

from .discovery import LibrarySpec, SweepConfig


@dataclass
class RunConfig:
    """
    Every input of a reproducible run.

    Defaults reproduce the desk-scale Burgers experiment: nu = 0.1 on a
    256 x 101 grid over x in [-8, 8), t in [0, 10], N = 10000 samples, a
    15-term library plus intercept, 1 % measurement noise on u_t.
    """

    # simulation
    nu: float = 0.1
    x_min: float = -8.0
    x_max: float = 8.0
    n_x: int = 256
    t_max: float = 10.0
    n_t: int = 101
    initial: str = "gaussian_pulse"
    field_noise: float = 0.0
    # library
    max_poly_degree: int = 3
    max_deriv_order: int = 3
    differentiation: str = "central_fd"
    time_accuracy: int = 4
    n_samples: int = 10000
    target_noise: float = 0.01
    # sweep
    max_size: int = 8
    strategy: str = "auto"
    a_n: List[Union[float, str]] = field(default_factory=lambda: [1.0, "logN"])
    n_boot: int = 100
    oracle: List[str] = field(default_factory=lambda: ["u*u_x", "u_xx"])
    schedule: List[Union[float, str]] = field(default_factory=lambda: [1.0, "logN"])
    # equivalence battery
    instances: int = 200
    perturb: float = 0.0
    # global
    seed: int = 0
    field: Optional[str] = None
    library: Optional[str] = None
    out: str = "."

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        data = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
        return cls(**data)

    def updated(self, **overrides) -> "RunConfig":
        data = asdict(self)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(**data)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @property
    def domain(self):
        return (self.x_min, self.x_max, self.n_x, self.t_max, self.n_t)

    def library_spec(self) -> LibrarySpec:
        return LibrarySpec(self.max_poly_degree, self.max_deriv_order, self.differentiation, self.time_accuracy)

    def sweep_config(self) -> SweepConfig:
        return SweepConfig(a_n=tuple(self.a_n), n_boot=self.n_boot, seed=self.seed, strategy=self.strategy)
