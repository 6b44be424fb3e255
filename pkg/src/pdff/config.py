"""Run configuration: defaults, plain-text key-value files, validation.

Config files are flat ``key = value`` lines; ``#`` starts a comment and
values may be numbers, strings, or comma-separated number lists.  Every
field of :class:`RunConfig` can be set from a file and overridden
individually, and validation errors always name the offending key.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

import numpy as np

from .arm import MORPHOLOGIES, ArmModel, TargetSet, default_targets
from .cost import CostWeights
from .optimizer import OptimizerConfig
from .policy import BasisFunctionSet, time_grid

__all__ = [
    "ConfigError",
    "OUTPUT_DIR_ENV",
    "RunConfig",
    "load_config",
    "parse_kv_file",
]

# Environment variable supplying the default output directory.
OUTPUT_DIR_ENV = "PDFF_OUTPUT_DIR"


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _parse_scalar(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_kv_file(path) -> dict[str, object]:
    """Read ``key = value`` lines; comma-separated values become tuples."""
    values: dict[str, object] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, rhs = line.partition("=")
            if not sep:
                raise ConfigError(key.strip() or f"line {lineno}",
                                  f"expected 'key = value' at line {lineno}")
            key = key.strip()
            if "," in rhs:
                values[key] = tuple(_parse_scalar(tok) for tok in rhs.split(","))
            else:
                values[key] = _parse_scalar(rhs)
    return values


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of a run; defaults match the reaching experiments."""

    morphology: str = "human"
    links: tuple[float, ...] | None = None
    samples_per_update: int = 20
    eliteness: float = 10.0
    lambda_init: float = 0.05
    lambda_min: float = 0.05
    updates: int = 100
    basis_count: int = 5
    basis_width: float = 0.05
    duration: float = 0.5
    dt: float = 0.01
    sessions_per_target: int = 10
    seed: int = 1
    targets_per_arc: int = 10
    target_radii: tuple[float, ...] = (0.65, 0.85)
    target_angle_min_deg: float = 30.0
    target_angle_max_deg: float = 150.0
    target_anchor: tuple[float, float] | None = (0.0, 0.85)
    target_min_radius: float = 0.5
    distance_weight: float = 100.0
    comfort_weight: float = 1.0
    acceleration_weight: float = 1.0e-5
    output_dir: str = ""
    jobs: int = 1

    @classmethod
    def from_mapping(cls, mapping, base: "RunConfig | None" = None) -> "RunConfig":
        """Build a config from a key-value mapping, rejecting unknown keys."""
        config = base if base is not None else cls()
        known = {field.name for field in fields(cls)}
        overrides = {}
        for key, value in mapping.items():
            if key not in known:
                raise ConfigError(key, "unknown configuration key")
            overrides[key] = _coerce(key, value)
        return replace(config, **overrides)

    @classmethod
    def from_file(cls, path, base: "RunConfig | None" = None) -> "RunConfig":
        return cls.from_mapping(parse_kv_file(path), base=base)

    def validated(self) -> "RunConfig":
        """Return self after range checks; raises ConfigError naming the key."""
        _require(self.samples_per_update >= 2, "samples_per_update", "must be at least 2")
        _require(self.eliteness >= 0.0, "eliteness", "must be nonnegative")
        _require(self.lambda_init > 0.0, "lambda_init", "must be positive")
        _require(self.lambda_min >= 0.0, "lambda_min", "must be nonnegative")
        _require(self.updates >= 1, "updates", "must be at least 1")
        _require(self.basis_count >= 1, "basis_count", "must be at least 1")
        _require(self.basis_width > 0.0, "basis_width", "must be positive")
        _require(self.duration > 0.0, "duration", "must be positive")
        _require(self.dt > 0.0, "dt", "must be positive")
        try:
            time_grid(BasisFunctionSet(self.basis_count, self.basis_width, self.duration), self.dt)
        except ValueError as err:
            raise ConfigError("dt", str(err)) from None
        _require(self.sessions_per_target >= 1, "sessions_per_target", "must be at least 1")
        _require(self.seed >= 0, "seed", "must be nonnegative")
        _require(self.targets_per_arc >= 1, "targets_per_arc", "must be at least 1")
        _require(len(self.target_radii) >= 1, "target_radii", "needs at least one radius")
        for radius in self.target_radii:
            _require(0.0 < float(radius) <= 1.0, "target_radii", "radii must lie in (0, 1]")
        _require(
            self.target_angle_min_deg <= self.target_angle_max_deg,
            "target_angle_min_deg", "must not exceed target_angle_max_deg",
        )
        _require(self.target_min_radius >= 0.0, "target_min_radius", "must be nonnegative")
        if self.target_anchor is not None:
            _require(len(self.target_anchor) == 2, "target_anchor", "must be an x, y pair")
            norm = float(np.hypot(*map(float, self.target_anchor)))
            _require(norm <= 1.0, "target_anchor", "must lie inside the unit workspace")
        _require(self.distance_weight >= 0.0, "distance_weight", "must be nonnegative")
        _require(self.comfort_weight >= 0.0, "comfort_weight", "must be nonnegative")
        _require(self.acceleration_weight >= 0.0, "acceleration_weight", "must be nonnegative")
        _require(self.jobs >= 1, "jobs", "must be at least 1")
        if self.links is not None:
            lengths = np.asarray(self.links, dtype=float)
            _require(lengths.size >= 1, "links", "needs at least one length")
            _require(bool(np.all(lengths > 0.0)), "links", "lengths must be positive")
            _require(
                abs(float(lengths.sum()) - 1.0) <= 1e-9,
                "links", f"lengths must sum to 1, got {float(lengths.sum())!r}",
            )
        elif self.morphology != "all":
            _require(
                self.morphology in MORPHOLOGIES,
                "morphology",
                f"unknown morphology {self.morphology!r}; expected one of "
                f"{sorted(MORPHOLOGIES)} or 'all'",
            )
        return self

    def morphology_tags(self) -> list[str]:
        if self.morphology == "all":
            return list(MORPHOLOGIES)
        return [self.morphology]

    def make_arm(self, tag: str | None = None) -> ArmModel:
        tag = tag if tag is not None else self.morphology
        if self.links is not None and tag == self.morphology:
            return ArmModel(np.asarray(self.links, dtype=float), name=tag)
        return ArmModel.from_morphology(tag)

    def make_targets(self) -> TargetSet:
        return default_targets(
            radii=self.target_radii,
            per_arc=self.targets_per_arc,
            angle_deg_range=(self.target_angle_min_deg, self.target_angle_max_deg),
            anchor=self.target_anchor,
            min_radius=self.target_min_radius,
        )

    def make_basis(self) -> BasisFunctionSet:
        return BasisFunctionSet(self.basis_count, self.basis_width, self.duration)

    def make_optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(
            n_samples=self.samples_per_update,
            eliteness=self.eliteness,
            lambda_init=self.lambda_init,
            lambda_min=self.lambda_min,
            n_updates=self.updates,
        )

    def make_cost_weights(self) -> CostWeights:
        return CostWeights(
            distance=self.distance_weight,
            comfort=self.comfort_weight,
            acceleration=self.acceleration_weight,
        )

    def resolve_output_dir(self) -> str:
        return self.output_dir or os.environ.get(OUTPUT_DIR_ENV, "") or "pdff_out"

    def as_dict(self) -> dict[str, object]:
        """JSON-ready view of every field (tuples become lists)."""
        out: dict[str, object] = {}
        for field in fields(self):
            value = getattr(self, field.name)
            if isinstance(value, tuple):
                value = list(value)
            out[field.name] = value
        return out


def load_config(path) -> RunConfig:
    """Parse and validate a config file in one step."""
    return RunConfig.from_file(path).validated()


def _require(condition: bool, key: str, message: str):
    if not condition:
        raise ConfigError(key, message)


_INT_FIELDS = {
    "samples_per_update", "updates", "basis_count", "sessions_per_target",
    "seed", "targets_per_arc", "jobs",
}
_FLOAT_FIELDS = {
    "eliteness", "lambda_init", "lambda_min", "basis_width", "duration", "dt",
    "target_angle_min_deg", "target_angle_max_deg", "target_min_radius",
    "distance_weight", "comfort_weight", "acceleration_weight",
}
_TUPLE_FIELDS = {"links", "target_radii", "target_anchor"}


def _coerce(key: str, value):
    if key in _INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return value
    if key in _FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(key, f"expected a number, got {value!r}")
        return float(value)
    if key in _TUPLE_FIELDS:
        if value is None or (isinstance(value, str) and value == "none"):
            return None
        if isinstance(value, (int, float)):
            value = (value,)
        if not isinstance(value, (tuple, list)):
            raise ConfigError(key, f"expected comma-separated numbers, got {value!r}")
        try:
            return tuple(float(item) for item in value)
        except (TypeError, ValueError):
            raise ConfigError(key, f"expected comma-separated numbers, got {value!r}") from None
    if key in ("morphology", "output_dir"):
        if not isinstance(value, str):
            raise ConfigError(key, f"expected a string, got {value!r}")
        return value
    raise ConfigError(key, "unknown configuration key")
