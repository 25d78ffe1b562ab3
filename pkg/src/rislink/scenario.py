"""JSON scenario files for the coverage and near-field commands."""

from __future__ import annotations

import json
import math
from pathlib import Path

import jsonschema

from . import coverage as cv
from .overhead import OverheadConfig, RisSsbLoad
from .radio import RadioConfig


class ConfigError(ValueError):
    """Invalid user configuration; the message names the offending location."""


_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_int_pos = {"type": "integer", "minimum": 1}
_point3 = {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}

SCENARIO_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "frequency_hz": _pos,
        "bandwidth_hz": _pos,
        "noise_figure_db": _num,
        "bs_tx_power_dbm": _num,
        "bs_antennas": _int_pos,
        "bs_position": _point3,
        "node_position": _point3,
        "node_azimuth_deg": {"type": ["number", "null"]},
        "ue_height_m": _num,
        "k_factor_db": {"type": ["number", "null"]},
        "seed": {"type": "integer", "minimum": 0},
        "model": {"enum": sorted(cv.MODEL_NAMES)},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"x0": _num, "x1": _num, "y0": _num, "y1": _num, "resolution_m": _pos},
        },
        "ris": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "nx": _int_pos,
                "ny": _int_pos,
                "phase_bits": {"type": ["integer", "null"], "minimum": 1},
                "phase_error_sigma_rad": {"type": "number", "minimum": 0},
                "insertion_loss_db": {"type": "number", "minimum": 0},
                "reflector_seed": {"type": "integer", "minimum": 0},
                "anchor_point": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
            },
        },
        "ncr": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_antennas": _int_pos,
                "max_tx_power_dbm": _num,
                "si_suppression_db": _num,
                "ext_interference_over_noise_db": _num,
                "stability_margin_db": {"type": "number", "minimum": 0},
            },
        },
    },
}

OVERHEAD_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "ssb_budget": _int_pos,
        "ris": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["columns"],
                "properties": {
                    "columns": _int_pos,
                    "beams_per_column": _int_pos,
                    "reflects_ssb": {"type": "boolean"},
                },
            },
        },
    },
}


def _location(err: jsonschema.ValidationError) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)


def _validate(doc, schema, source: str):
    err = jsonschema.exceptions.best_match(jsonschema.Draft7Validator(schema).iter_errors(doc))
    if err is not None:
        raise ConfigError(f"{source}: at {_location(err)}: {err.message}")


def _read(path_or_doc, source=None):
    if isinstance(path_or_doc, dict):
        return path_or_doc, source or "<scenario>"
    path = Path(path_or_doc)
    try:
        return json.loads(path.read_text()), str(path)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def model_from_doc(name: str, doc: dict) -> cv.NodeModel:
    ris = doc.get("ris", {})
    if name == "reflector":
        return cv.Reflector(seed=ris.get("reflector_seed", doc.get("seed", 0)))
    if name == "fixedris":
        anchor = ris.get("anchor_point")
        return cv.FixedRis(tuple(anchor) if anchor is not None else None)
    if name == "ris":
        return cv.AdaptiveRis()
    if name == "ncr":
        return cv.Ncr(**doc.get("ncr", {}))
    raise ConfigError(f"unknown node model {name!r}; expected one of {sorted(cv.MODEL_NAMES)}")


def load_scenario(path_or_doc=None, source=None) -> cv.Scenario:
    """Build a :class:`~rislink.coverage.Scenario` from a JSON file or an already-parsed dict."""
    doc, source = ({}, "<defaults>") if path_or_doc is None else _read(path_or_doc, source)
    _validate(doc, SCENARIO_SCHEMA, source)
    freq = doc.get("frequency_hz", 15e9)
    radio = RadioConfig(
        freq,
        bandwidth_hz=doc.get("bandwidth_hz", cv.default_bandwidth_hz(freq)),
        noise_figure_db=doc.get("noise_figure_db", 10.0),
        bs_tx_power_dbm=doc.get("bs_tx_power_dbm", 40.0),
    )
    kwargs = {}
    if "grid" in doc:
        kwargs["grid"] = cv.Grid(**doc["grid"])
    for key, attr in (("bs_position", "bs"), ("node_position", "node")):
        if key in doc:
            kwargs[attr] = tuple(float(v) for v in doc[key])
    for key in ("node_azimuth_deg", "ue_height_m", "bs_antennas", "seed"):
        if key in doc:
            kwargs[key] = doc[key]
    if "k_factor_db" in doc:
        kwargs["k_factor_db"] = math.inf if doc["k_factor_db"] is None else doc["k_factor_db"]
    ris = doc.get("ris", {})
    for key, attr in (("nx", "ris_nx"), ("ny", "ris_ny"), ("phase_bits", "phase_bits"),
                      ("phase_error_sigma_rad", "phase_error_sigma_rad"),
                      ("insertion_loss_db", "insertion_loss_db")):
        if key in ris:
            kwargs[attr] = ris[key]
    try:
        model = model_from_doc(doc.get("model", "ris"), doc)
        return cv.Scenario(radio=radio, node_model=model, **kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_overhead(path_or_doc) -> OverheadConfig:
    doc, source = _read(path_or_doc)
    _validate(doc, OVERHEAD_SCHEMA, source)
    loads = tuple(RisSsbLoad(**item) for item in doc.get("ris", []))
    return OverheadConfig(ssb_budget=doc.get("ssb_budget", 64), ris_list=loads)
