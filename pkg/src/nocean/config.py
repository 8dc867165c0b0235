"""Flat key-value run configuration.

Grammar: one `section.key = value` per line, `#` starts a comment, blank
lines ignored. Unknown keys are rejected with the offending line number.
Booleans are true/false; the observation region is `none` or i0:i1:j0:j1.
"""

from dataclasses import fields as dc_fields

from .assimilation import AssimilationConfig
from .errors import ParseError, ValidationError
from .experiment import ExperimentConfig
from .physics import PhysicsConfig

_GRID_KEYS = {
    "nx": ("nx", int),
    "ny": ("ny", int),
    "nz": ("nz", int),
    "dx": ("dx", float),
    "dy": ("dy", float),
    "mask": ("mask_spec", str),
    "depth": ("depth_spec", str),
    "periodic_x": ("periodic_x", bool),
    "periodic_y": ("periodic_y", bool),
}

_EXPERIMENT_KEYS = {
    "spinup_duration": float,
    "spinup_ke_window": float,
    "spinup_ke_sample": float,
    "spinup_ke_tol": float,
    "reference_duration": float,
    "error_output_interval": float,
    "seed": int,
    "init_noise": float,
    "theta_surf": float,
    "theta_bot": float,
    "sal_surf": float,
    "sal_bot": float,
    "ablation_duration": float,
    "ablation_output_interval": float,
    "ablation_mu_explicit": float,
    "ablation_mu_implicit": float,
    "ablation_noise": float,
    "ablation_tilt": float,
}


def _dataclass_schema(cls):
    out = {}
    for f in dc_fields(cls):
        if f.type in ("bool", bool):
            out[f.name] = bool
        elif f.type in ("int", int):
            out[f.name] = int
        elif f.type in ("float", float):
            out[f.name] = float
        elif f.type in ("str", str):
            out[f.name] = str
    return out

_PHYSICS_KEYS = _dataclass_schema(PhysicsConfig)
_ASSIM_KEYS = _dataclass_schema(AssimilationConfig)
_ASSIM_KEYS["region"] = str  # none | i0:i1:j0:j1, stored on ExperimentConfig


def schema():
    """All accepted keys with their value types."""
    out = {}
    for name, (_, typ) in _GRID_KEYS.items():
        out[f"grid.{name}"] = typ
    for name, typ in _PHYSICS_KEYS.items():
        out[f"physics.{name}"] = typ
    for name, typ in _ASSIM_KEYS.items():
        out[f"assim.{name}"] = typ
    for name, typ in _EXPERIMENT_KEYS.items():
        out[f"experiment.{name}"] = typ
    return out


def _parse_value(raw, typ, line_no):
    raw = raw.strip()
    if typ is bool:
        low = raw.lower()
        if low in ("true", "false"):
            return low == "true"
        raise ParseError(line_no, f"expected true/false, got {raw!r}")
    if typ is int:
        try:
            return int(raw)
        except ValueError:
            raise ParseError(line_no, f"expected an integer, got {raw!r}") from None
    if typ is float:
        try:
            return float(raw)
        except ValueError:
            raise ParseError(line_no, f"expected a number, got {raw!r}") from None
    return raw


def _parse_region(raw):
    if raw.lower() == "none":
        return None
    parts = raw.split(":")
    if len(parts) != 4:
        raise ValidationError("assim.region must be none or i0:i1:j0:j1")
    return tuple(int(p) for p in parts)


def parse_config(text):
    """Parse a config document into a validated ExperimentConfig."""
    sections = {"grid": {}, "physics": {}, "assim": {}, "experiment": {}}
    known = schema()
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(line_no, f"expected 'key = value', got {body!r}")
        key, raw = body.split("=", 1)
        key = key.strip()
        if key not in known:
            raise ParseError(line_no, f"unknown key {key!r}")
        section, name = key.split(".", 1)
        sections[section][name] = _parse_value(raw, known[key], line_no)

    region = None
    if "region" in sections["assim"]:
        region = _parse_region(sections["assim"].pop("region"))
    physics = PhysicsConfig(**sections["physics"])
    assim = AssimilationConfig(**sections["assim"])
    grid_kw = {_GRID_KEYS[k][0]: v for k, v in sections["grid"].items()}
    cfg = ExperimentConfig(physics=physics, assim=assim, region=region,
                           **grid_kw, **sections["experiment"])
    return cfg.validate()


def _format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def config_items(cfg):
    """Fully resolved (key, value-string) pairs; enough to reproduce the run."""
    items = []
    for name, (attr, _) in _GRID_KEYS.items():
        items.append((f"grid.{name}", _format_value(getattr(cfg, attr))))
    for name in _PHYSICS_KEYS:
        items.append((f"physics.{name}", _format_value(getattr(cfg.physics, name))))
    for name in _ASSIM_KEYS:
        if name == "region":
            v = cfg.region
            items.append(("assim.region",
                          "none" if v is None else ":".join(str(x) for x in v)))
        else:
            items.append((f"assim.{name}", _format_value(getattr(cfg.assim, name))))
    for name in _EXPERIMENT_KEYS:
        items.append((f"experiment.{name}", _format_value(getattr(cfg, name))))
    return sorted(items)
