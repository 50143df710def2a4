"""JSON Schemas for CLI job configurations and emitted JSON reports.

``docs/config.schema.json`` is a dump of :data:`CONFIG_SCHEMA`.
"""

from __future__ import annotations

from typing import Any

import jsonschema

__all__ = [
    "CONFIG_SCHEMA",
    "REPORT_SCHEMAS",
    "validate_config",
    "validate_report",
]

_number = {"type": "number"}
_vector = {"type": "array", "items": _number, "minItems": 1}
_matrix = {"type": "array", "items": _vector, "minItems": 1}
_axis = {"type": "array", "prefixItems": [_number, _number, {"type": "integer", "minimum": 2}], "minItems": 3, "maxItems": 3}
_nullable_number = {"type": ["number", "null"]}

_structure = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"kind": {"const": "standard"}, "n": {"type": "integer", "minimum": 1}},
            "required": ["kind", "n"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "kind": {"const": "random"},
                "n": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
            },
            "required": ["kind", "n"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "s6"}, "point": {**_vector, "minItems": 7, "maxItems": 7}},
            "required": ["kind", "point"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"kind": {"const": "explicit"}, "metric": _matrix, "jop": _matrix},
            "required": ["kind", "metric", "jop"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "kind": {"const": "field"},
                "name": {"enum": ["flat", "s6-orthographic"]},
                "params": {"type": "array", "items": _number},
                "step": {"type": "number", "exclusiveMinimum": 0},
                "at": _vector,
            },
            "required": ["kind", "name"],
            "additionalProperties": False,
        },
    ]
}

_chart = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "components": {
                    "oneOf": [
                        {"type": "string"},
                        {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    ]
                },
                "variables": {"type": "array", "items": {"type": "string"}, "minItems": 2},
                "jacobian": {"enum": ["analytic", "central"]},
                "step": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["components"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "catalog": {"enum": ["slant-plane", "slant-family", "holomorphic-graph", "conjugate-graph"]},
                "params": {"type": "array", "items": _number},
                "jacobian": {"enum": ["analytic", "central"]},
                "step": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["catalog"],
            "additionalProperties": False,
        },
    ]
}

_common = {
    "tol": {"type": "number", "exclusiveMinimum": 0},
    "seed": {"type": "integer", "minimum": 0},
    "output": {"type": "string"},
    "format": {"enum": ["csv", "json"]},
}


def _command(name: str, props: dict, required: list[str]) -> dict:
    return {
        "type": "object",
        "properties": {"command": {"const": name}, **_common, **props},
        "required": ["command", *required],
        "additionalProperties": False,
    }


CONFIG_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "wirtinger job configuration",
    "oneOf": [
        _command("validate-structure", {"structure": _structure}, ["structure"]),
        _command(
            "angle",
            {"structure": _structure, "subspace": _matrix},
            ["structure", "subspace"],
        ),
        _command(
            "scan",
            {
                "structure": _structure,
                "chart": _chart,
                "grid": {"type": "array", "items": _axis, "minItems": 2},
            },
            ["structure", "chart", "grid"],
        ),
        _command(
            "verify",
            {
                "count": {"type": "integer", "minimum": 1},
                "ambient_dim": {
                    "oneOf": [
                        {"type": "integer", "minimum": 2},
                        {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
                    ]
                },
                "sub_dim": {
                    "oneOf": [
                        {"type": "integer", "minimum": 2},
                        {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
                    ]
                },
                "complex_fraction": {"type": "number", "minimum": 0, "maximum": 1},
            },
            ["count", "ambient_dim"],
        ),
        _command(
            "nijenhuis",
            {
                "structure": _structure,
                "step": {"type": "number", "exclusiveMinimum": 0},
                "points": _matrix,
                "pairs": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2},
                    "minItems": 1,
                },
                "vectors": {
                    "type": "array",
                    "items": {"type": "array", "items": _vector, "minItems": 2, "maxItems": 2},
                    "minItems": 1,
                },
            },
            ["structure", "points"],
        ),
    ],
}

_counts = {
    "type": "object",
    "properties": {k: {"type": "integer", "minimum": 0} for k in ("complex", "anti-complex", "isotropic", "generic")},
    "required": ["complex", "anti-complex", "isotropic", "generic"],
    "additionalProperties": False,
}
_fractions = {
    "type": "object",
    "properties": {k: {"type": "number", "minimum": 0, "maximum": 1} for k in ("complex", "anti-complex", "isotropic", "generic")},
    "required": ["complex", "anti-complex", "isotropic", "generic"],
    "additionalProperties": False,
}
_classification = {"enum": ["complex", "anti-complex", "isotropic", "generic"]}

REPORT_SCHEMAS: dict[str, dict[str, Any]] = {
    "validate-structure": {
        "type": "object",
        "properties": {
            "dim": {"type": "integer"},
            "jsquare_residual": _number,
            "compatibility_residual": _number,
            "symmetry_residual": _number,
            "metric_eig_min": _number,
            "metric_eig_max": _number,
            "passed": {"type": "boolean"},
        },
        "required": ["dim", "jsquare_residual", "compatibility_residual", "symmetry_residual", "passed"],
    },
    "angle": {
        "type": "object",
        "properties": {
            "cos_alpha": _number,
            "alpha": {"type": "number", "minimum": 0},
            "lambdas": {"type": "array", "items": _number},
            "classification": _classification,
            "complexity_residual": {"type": "number", "minimum": 0},
            "bound_margin": _number,
        },
        "required": ["cos_alpha", "alpha", "lambdas", "classification", "complexity_residual"],
    },
    "scan": {
        "type": "object",
        "properties": {
            "n_points": {"type": "integer", "minimum": 0},
            "n_reported": {"type": "integer", "minimum": 0},
            "cos_alpha_min": _nullable_number,
            "cos_alpha_max": _nullable_number,
            "cos_alpha_mean": _nullable_number,
            "counts": _counts,
            "fractions": _fractions,
            "max_grad_alpha_norm": _nullable_number,
            "n_flagged": {"type": "integer", "minimum": 0},
            "flag_counts": {"type": "object", "additionalProperties": {"type": "integer"}},
        },
        "required": ["n_points", "n_reported", "counts", "fractions", "n_flagged"],
        "additionalProperties": False,
    },
    "verify": {
        "type": "object",
        "properties": {
            "count": {"type": "integer"},
            "seed": {"type": "integer"},
            "dimension_pairs": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
            "worst_bound_margin": _number,
            "worst_index": {"type": "integer"},
            "max_abs_cos_alpha": _number,
            "n_complex_detected": {"type": "integer"},
            "n_violations": {"type": "integer"},
            "n_equality_inconsistent": {"type": "integer"},
            "violations": {"type": "array"},
            "passed": {"type": "boolean"},
        },
        "required": ["count", "worst_bound_margin", "n_violations", "passed"],
    },
    "nijenhuis": {
        "type": "object",
        "properties": {
            "field": {"type": "string"},
            "step": _number,
            "rows": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "point": _vector,
                        "X": _vector,
                        "Y": _vector,
                        "norm": _number,
                        "norm_half_step": _number,
                        "ratio": _nullable_number,
                    },
                    "required": ["point", "X", "Y", "norm", "norm_half_step", "ratio"],
                },
            },
        },
        "required": ["field", "step", "rows"],
    },
}


def validate_config(cfg: Any) -> None:
    """Raise ``jsonschema.ValidationError`` if ``cfg`` does not match the config schema."""
    jsonschema.validate(cfg, CONFIG_SCHEMA, cls=jsonschema.Draft202012Validator)


def validate_report(command: str, report: Any) -> None:
    jsonschema.validate(report, REPORT_SCHEMAS[command], cls=jsonschema.Draft202012Validator)
