"""Experiment configuration: JSON files validated against a schema that carries every default."""
from __future__ import annotations

import copy
import hashlib
import json
from importlib import resources
from pathlib import Path

import jsonschema
from jsonschema import validators

from .errors import ConfigError

EXPERIMENTS = ("verify", "szego", "berezin-limit", "kernel-decay", "commute")

SYMBOL_NAMES = ["const", "abs2_g11", "abs4_g11", "re_g12", "im_g12", "re_g11", "abs2_g11_plus_g12",
                "re_g11_sq", "re_g12_g21", "im_g12_sq", "hopf_x", "hopf_y", "hopf_z", "sigmoid_abs2_g11",
                "minor_power", "matrix_coefficient"]

_INT_LIST = {"type": "array", "items": {"type": "integer", "minimum": 0}}

SYMBOL_SCHEMA = {
    "type": "object",
    "required": ["name"],
    "additionalProperties": False,
    "properties": {
        "name": {"enum": SYMBOL_NAMES},
        "c": {"type": "number", "default": 1.0},
        "center": {"type": "number", "default": 0.5},
        "steepness": {"type": "number", "default": 10.0},
        "mu": _INT_LIST,
        "aux_weight": _INT_LIST,
        "u": {"enum": ["highest", "random"], "default": "random"},
        "v0": {"enum": ["zero_weight", "highest"], "default": "zero_weight"},
        "seed": {"type": "integer", "default": 0},
    },
}

LAW_SCHEMA = {
    "type": "object",
    "required": ["a"],
    "additionalProperties": False,
    "properties": {
        "a": {"type": "number"},
        "p": {"type": "number", "default": 1.0},
        "b": {"type": "number", "default": 0.0},
        "kind": {"enum": ["power", "logpower"], "default": "power"},
    },
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "flagq experiment configuration",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "experiment": {"enum": list(EXPERIMENTS)},
        "description": {"type": "string", "default": ""},
        "seed": {"type": "integer", "minimum": 0, "default": 0},
        "group": {
            "type": "object", "additionalProperties": False, "default": {},
            "properties": {
                "n": {"type": "integer", "minimum": 2, "default": 2},
                "special": {"type": "boolean", "default": True},
            },
        },
        "weight": {
            "type": "object", "additionalProperties": False, "default": {},
            "properties": {
                "coeffs": {**_INT_LIST, "default": [4]},
                "central": {"type": "integer", "default": 0},
            },
        },
        "family": {
            "type": "object", "additionalProperties": False, "default": {},
            "properties": {
                "laws": {"type": "object", "patternProperties": {"^[0-9]+$": LAW_SCHEMA},
                         "additionalProperties": False, "default": {"1": {"a": 1.0}}},
                "central": {"type": "integer", "default": 0},
                "horizon": {"type": "integer", "minimum": 10, "default": 100},
            },
        },
        "sweep": {
            "type": "object", "additionalProperties": False, "default": {},
            "properties": {"values": {"type": "array", "items": {"type": "integer", "minimum": 1},
                                      "minItems": 1, "default": [10, 20, 40]}},
        },
        "symbols": {"type": "array", "items": SYMBOL_SCHEMA, "default": [{"name": "abs2_g11"}]},
        "pairs": {
            "type": "array", "default": [],
            "items": {
                "type": "object", "required": ["a", "b"], "additionalProperties": False,
                "properties": {"a": SYMBOL_SCHEMA, "b": SYMBOL_SCHEMA,
                               "expect": {"enum": ["commute", "noncommute", "none"], "default": "none"}},
            },
        },
        "quadrature": {
            "type": "object", "additionalProperties": False, "default": {},
            "properties": {
                "kind": {"enum": ["product", "mc"], "default": "product"},
                "max_degree": {"type": ["integer", "null"], "minimum": 0, "default": None},
                "N": {"type": "integer", "minimum": 1, "default": 200000},
                "seed": {"type": "integer", "minimum": 0, "default": 0},
            },
        },
        "taus": {"type": "array", "items": {"type": "number"}, "default": [0.2, 0.5, 0.8]},
        "level_measure": {
            "type": "object", "additionalProperties": False, "default": {},
            "properties": {"N": {"type": "integer", "minimum": 1, "default": 100000},
                           "seed": {"type": "integer", "minimum": 0, "default": 1}},
        },
        "test_points": {
            "type": "object", "additionalProperties": False, "default": {},
            "properties": {"count": {"type": "integer", "minimum": 1, "default": 20},
                           "seed": {"type": "integer", "minimum": 0, "default": 7}},
        },
        "k": {"type": "integer", "minimum": 1, "default": 1},
        "theta0": {"type": "number", "exclusiveMinimum": 0, "default": 1.5707963267948966},
        "l1_resolution": {"type": "integer", "minimum": 8, "default": 64},
        "mc_count": {"type": "integer", "minimum": 1, "default": 20000},
        "corrupt_kernel": {"type": "number", "default": 1.0},
        "tolerances": {
            "type": "object", "additionalProperties": False, "default": {},
            "properties": {
                "schur": {"type": "number", "default": 1e-10},
                "idempotent": {"type": "number", "default": 1e-8},
                "trace": {"type": "number", "default": 1e-10},
                "adjoint": {"type": "number", "default": 1e-10},
                "positivity": {"type": "number", "default": 1e-10},
                "norm": {"type": "number", "default": 1e-8},
                "equivariance": {"type": "number", "default": 1e-9},
                "averaged": {"type": "number", "default": 1e-8},
                "kernel": {"type": "number", "default": 1e-8},
                "commute": {"type": "number", "default": 1e-9},
                "noncommute": {"type": "number", "default": 1e-3},
                "berezin_trace": {"type": "number", "default": 1e-8},
                "hs": {"type": "number", "default": 1e-8},
                "cross": {"type": "number", "default": 1e-9},
                "unit_integral": {"type": "number", "default": 1e-8},
                "mc_sigmas": {"type": "number", "default": 5.0},
            },
        },
        "assertions": {
            "type": "object", "additionalProperties": False, "default": {},
            "properties": {
                "gap_bounds": {"type": ["array", "null"], "items": {"type": "number"}, "default": None},
                "monotone": {"type": "boolean", "default": True},
                "final_sup_bound": {"type": ["number", "null"], "default": None},
                "closed_form_tol": {"type": ["number", "null"], "default": None},
                "sup_bound": {"type": ["object", "null"], "default": None,
                              "properties": {"n": {"type": "integer"}, "bound": {"type": "number"}},
                              "required": ["n", "bound"]},
                "l1_target": {"type": ["object", "null"], "default": None,
                              "properties": {"n": {"type": "integer"}, "tol": {"type": "number"}},
                              "required": ["n", "tol"]},
                "constant_sup": {"type": "boolean", "default": False},
            },
        },
        "out": {"type": ["string", "null"], "default": None},
    },
}


def _extend_with_default(validator_class):
    validate_properties = validator_class.VALIDATORS["properties"]

    def set_defaults(validator, properties, instance, schema):
        if isinstance(instance, dict):
            for prop, sub in properties.items():
                if "default" in sub and prop not in instance:
                    instance[prop] = copy.deepcopy(sub["default"])
        yield from validate_properties(validator, properties, instance, schema)

    return validators.extend(validator_class, {"properties": set_defaults})


_Filling = _extend_with_default(jsonschema.Draft202012Validator)


def resolve(cfg: dict) -> dict:
    """Validate ``cfg`` and fill in every default; returns a new dict."""
    out = copy.deepcopy(cfg)
    # two passes: defaults of nested objects are filled once the parent exists
    for _ in range(2):
        try:
            _Filling(SCHEMA).validate(out)
        except jsonschema.ValidationError as exc:
            loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigError(f"{loc}: {exc.message}") from None
    return out


def load(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return resolve(raw)


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def bundled(name: str) -> Path:
    """Path of a configuration shipped with the package (``configs/<name>.json``)."""
    p = resources.files("flagq") / "configs" / f"{name}.json"
    return Path(str(p))


def bundled_names() -> list[str]:
    d = resources.files("flagq") / "configs"
    return sorted(p.name[:-5] for p in d.iterdir() if p.name.endswith(".json"))
