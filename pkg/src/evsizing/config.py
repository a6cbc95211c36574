"""Run configuration: a JSON document naming the mission, vehicle, layouts and solver options."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import jsonschema

from .drivecycle import DriveCycle, load_cycle, wltc_class3
from .errors import ConfigError
from .motor import load_referent
from .optimizer import DEFAULT_BOUNDS, OptimizerOptions, SizingProblem
from .perfcheck import PerformanceSpec
from .thermal import load_network
from .topology import PRESETS
from .vehicle import VehicleParams

SCHEMA_VERSION = 1
BUILTIN_CYCLE = "wltc_class3"
# layout sets selectable by name in ``topologies``
LAYOUT_SETS = {"layout-comparison": ["RWD_RFM", "AWD_RFM", "AWD_AFM"]}

_number = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_bounds = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}

SCHEMA = {
    "type": "object",
    "required": ["schema_version", "topologies"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "cycle": {"type": "string"},
        "cycle_columns": {
            "type": "object", "additionalProperties": False,
            "properties": {"time": {"type": "string"}, "speed": {"type": "string"}},
        },
        "vehicle": {
            "type": "object", "additionalProperties": False,
            "properties": {f.name: _pos for f in fields(VehicleParams)},
        },
        "performance": {
            "type": "object", "additionalProperties": False,
            "properties": {f.name: _pos for f in fields(PerformanceSpec)},
        },
        "topologies": {
            "oneOf": [
                {"type": "string", "enum": sorted(LAYOUT_SETS)},
                {"type": "array", "minItems": 1, "uniqueItems": True,
                 "items": {"type": "string", "enum": sorted(PRESETS)}},
            ],
        },
        "referents": {
            "type": "object", "additionalProperties": False,
            "properties": {"AFM": {"type": "string"}, "RFM": {"type": "string"}},
        },
        "thermal_networks": {
            "type": "object", "additionalProperties": False,
            "properties": {"AFM": {"type": "string"}, "RFM": {"type": "string"}},
        },
        "powertrain": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "eta_g": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "r_b": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0, "maximum": 1}},
                "rb_in_traction": {"type": "boolean"},
            },
        },
        "thermal": {
            "type": "object", "additionalProperties": False,
            "properties": {"enabled": {"type": "boolean"}, "T_winding_max": _number,
                           "hotspot": {"type": "string"}},
        },
        "optimizer": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "starts": {"type": "integer", "minimum": 1},
                "max_evals": {"type": "integer", "minimum": 1},
                "xtol": _pos, "ftol": _pos, "initial_step": _pos,
                "penalty_weight": _pos, "feasibility_tol": {"type": "number", "minimum": 0},
                "optimize_split": {"type": "boolean"},
                "bounds": {"type": "object", "additionalProperties": False,
                           "properties": {k: _bounds for k in DEFAULT_BOUNDS}},
            },
        },
        "output_dir": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
    },
}


@dataclass
class RunConfig:
    doc: dict
    base_dir: Path
    topologies: list = field(default_factory=list)

    @property
    def seed(self) -> int:
        return int(self.doc.get("seed", 0))

    @property
    def output_dir(self) -> Path:
        return self.resolve(self.doc.get("output_dir", "out"))

    def resolve(self, p) -> Path:
        p = Path(p)
        return p if p.is_absolute() else self.base_dir / p

    def digest(self) -> str:
        canonical = json.dumps(self.doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def cycle(self) -> DriveCycle:
        name = self.doc.get("cycle", BUILTIN_CYCLE)
        if name == BUILTIN_CYCLE:
            return wltc_class3()
        cols = self.doc.get("cycle_columns", {})
        return load_cycle(self.resolve(name), cols.get("time", "t_s"), cols.get("speed", "v_kmh"))

    def problem(self) -> SizingProblem:
        refs = {tech: load_referent(self.resolve(p)) for tech, p in self.doc.get("referents", {}).items()}
        nets = {tech: load_network(self.resolve(p))
                for tech, p in self.doc.get("thermal_networks", {}).items()}
        pt = self.doc.get("powertrain", {})
        th = self.doc.get("thermal", {})
        return SizingProblem(
            cycle=self.cycle(),
            vehicle=VehicleParams(**self.doc.get("vehicle", {})),
            performance=PerformanceSpec(**self.doc.get("performance", {})),
            referents=refs,
            networks=nets,
            T_winding_max=th.get("T_winding_max", 160.0),
            hotspot=th.get("hotspot", "winding"),
            eta_g=pt.get("eta_g", 0.95),
            r_b=dict(pt.get("r_b", {})),
            rb_in_traction=pt.get("rb_in_traction", False),
            thermal=th.get("enabled", True),
        )

    def optimizer_options(self, seed: int | None = None) -> OptimizerOptions:
        opts = dict(self.doc.get("optimizer", {}))
        bounds = dict(DEFAULT_BOUNDS)
        bounds.update({k: tuple(v) for k, v in opts.pop("bounds", {}).items()})
        return OptimizerOptions(bounds=bounds, seed=self.seed if seed is None else seed, **opts)


def parse_config(doc: dict, base_dir=".") -> RunConfig:
    """Validate a config document. Raises :class:`ConfigError` with all schema problems."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors]
        raise ConfigError("invalid run config:\n  " + "\n  ".join(lines))
    cfg = RunConfig(doc, Path(base_dir))
    tops = doc["topologies"]
    cfg.topologies = list(LAYOUT_SETS[tops]) if isinstance(tops, str) else list(tops)
    for key in ("referents", "thermal_networks"):
        for tech, p in doc.get(key, {}).items():
            if not cfg.resolve(p).is_file():
                raise ConfigError(f"{key}.{tech}: file not found: {p}")
    cycle = doc.get("cycle", BUILTIN_CYCLE)
    if cycle != BUILTIN_CYCLE and not cfg.resolve(cycle).is_file():
        raise ConfigError(f"cycle: file not found: {cycle}")
    for kind in doc.get("powertrain", {}).get("r_b", {}):
        if kind not in PRESETS:
            raise ConfigError(f"powertrain.r_b: unknown layout {kind!r}")
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(doc, path.parent)
