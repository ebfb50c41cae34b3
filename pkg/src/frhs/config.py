"""Tolerances and run configuration.

Every numeric gate in the package reads its threshold from a
:class:`Tolerances` instance so that a single model file or command line can
override them consistently.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields


@dataclass(frozen=True)
class Tolerances:
    jacobi_tol: float = 1e-12
    nr_tol: float = 1e-10
    nr_finsler_tol: float = 1e-8
    phiprime_tol: float = 1e-8
    alpha_floor: float = 1e-12
    denom_floor: float = 1e-12
    curvature_agree_tol: float = 1e-8
    g_fd_tol: float = 1e-6
    cartan_fd_tol: float = 1e-4
    geodesic_route_tol: float = 1e-10
    corollary_tol: float = 1e-10

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise ValueError(f"tolerance {f.name} must be > 0, got {value!r}")

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def replace(self, **overrides) -> "Tolerances":
        unknown = set(overrides) - set(self.names())
        if unknown:
            raise ValueError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")
        return dataclasses.replace(self, **{k: float(v) for k, v in overrides.items()})


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class RunConfig:
    seed: int = 42
    n_samples: int = 64
    admissibility_grid: int = 101
    tolerances: Tolerances = field(default_factory=Tolerances)
    output_format: str = "table"

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.admissibility_grid < 2:
            raise ValueError("admissibility_grid must be >= 2")
        if self.output_format not in ("json", "csv", "table"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    def updated(self, overrides: dict) -> "RunConfig":
        """Apply a flat mapping of overrides (run fields or tolerance names)."""
        run_keys = {"seed", "n_samples", "admissibility_grid", "output_format"}
        run = {k: v for k, v in overrides.items() if k in run_keys}
        tol = {k: v for k, v in overrides.items() if k not in run_keys}
        nested = tol.pop("tolerances", None) or {}
        tol.update(nested)
        if "seed" in run:
            run["seed"] = int(run["seed"])
        if "n_samples" in run:
            run["n_samples"] = int(run["n_samples"])
        return dataclasses.replace(self, tolerances=self.tolerances.replace(**tol), **run)
