"""JSON (de)serialization of models.

Schema for a plain distribution:

    { "n_x": 2, "n_y": 2, "pF": { "01": "1/2", "10": "1/2" } }

Keys are the table outputs as a digit string (f(0) first), values are
rationals serialized as strings to keep them exact.  Confounded models
use "joint" instead of "pF", keyed by "<r_x>|<outputs>".  Digit-string
keys require n_y <= 10.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .core import ConfoundedModel, FunctionDistribution, FunctionTable
from .errors import ValidationError


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse rational {text!r}") from exc


def table_to_digits(table: FunctionTable) -> str:
    if table.n_y > 10:
        raise ValidationError(
            "digit-string serialization requires n_y <= 10; "
            f"got n_y = {table.n_y}"
        )
    return "".join(str(v) for v in table.outputs)


def table_from_digits(digits: str, n_x: int, n_y: int) -> FunctionTable:
    if n_y > 10:
        raise ValidationError(
            "digit-string serialization requires n_y <= 10; "
            f"got n_y = {n_y}"
        )
    if len(digits) != n_x or not digits.isdigit():
        raise ValidationError(
            f"table key {digits!r} must be {n_x} digits for n_x = {n_x}"
        )
    return FunctionTable(n_x, n_y, tuple(int(ch) for ch in digits))


def distribution_to_json_dict(pF: FunctionDistribution) -> dict:
    return {
        "n_x": pF.n_x,
        "n_y": pF.n_y,
        "pF": {table_to_digits(t): str(w) for t, w in pF.weights.items()},
    }


def confounded_to_json_dict(model: ConfoundedModel) -> dict:
    return {
        "n_x": model.n_x,
        "n_y": model.n_y,
        "joint": {
            f"{r_x}|{table_to_digits(t)}": str(w)
            for (r_x, t), w in model.joint_weights.items()
        },
    }


def parse_model(data: dict) -> FunctionDistribution | ConfoundedModel:
    """Build a model from its JSON dictionary, naming any violated
    invariant in the raised error."""
    if not isinstance(data, dict):
        raise ValidationError("model JSON must be an object")
    try:
        n_x = int(data["n_x"])
        n_y = int(data["n_y"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(
            "model JSON needs integer fields 'n_x' and 'n_y'"
        ) from exc
    if "pF" in data:
        weights = {
            table_from_digits(key, n_x, n_y): parse_rational(value)
            for key, value in data["pF"].items()
        }
        return FunctionDistribution(n_x, n_y, weights)
    if "joint" in data:
        joint = {}
        for key, value in data["joint"].items():
            try:
                r_x_str, digits = key.split("|")
            except ValueError as exc:
                raise ValidationError(
                    f"joint key {key!r} must look like '<r_x>|<outputs>'"
                ) from exc
            joint[(int(r_x_str), table_from_digits(digits, n_x, n_y))] = (
                parse_rational(value)
            )
        return ConfoundedModel(n_x, n_y, joint)
    raise ValidationError("model JSON needs a 'pF' or 'joint' mapping")


def load_model(path: str | Path) -> FunctionDistribution | ConfoundedModel:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    return parse_model(data)


def save_model(
    model: FunctionDistribution | ConfoundedModel, path: str | Path
) -> None:
    if isinstance(model, FunctionDistribution):
        payload = distribution_to_json_dict(model)
    else:
        payload = confounded_to_json_dict(model)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
