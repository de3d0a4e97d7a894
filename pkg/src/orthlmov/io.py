"""JSON reading/writing with stable bytes and precise parse errors."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .partitions import PartitionVector
from .pbseries import PbSeries
from .qt import QTLaurent, QTSeries, RationalQT

__all__ = ["InputError", "read_json", "write_json", "dumps", "coefficient_map_json", "read_w_data"]


class InputError(Exception):
    """Unreadable or schema-violating input; maps to exit status 3."""


def read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno} "
                         f"(char {exc.pos}): {exc.msg}") from None


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def write_json(path, data: Any) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(data))
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    return path


def coefficient_map_json(coeffs: dict, L: int, D: int) -> dict:
    """Serialize a ``{PartitionVector: coefficient}`` map in the PbSeries layout."""
    kinds = {type(v) for v in coeffs.values()}
    mode = "series" if QTSeries in kinds else "rational" if RationalQT in kinds else "laurent"
    keys = sorted(coeffs, key=PartitionVector.sort_key)
    data: dict = {"L": L, "D": D, "mode": mode}
    if mode == "series":
        first = coeffs[keys[0]]
        data["regime"], data["order"] = first.regime, min(v.order for v in coeffs.values())
    data["terms"] = [{"mu": [list(c) for c in k], "coeff": _coeff_json(coeffs[k], mode)} for k in keys]
    return data


def _coeff_json(c, mode: str):
    if mode == "rational":
        return RationalQT.coerce(c).to_json()
    return c.to_json()


def read_w_data(data) -> tuple[int, dict[PartitionVector, Any]]:
    """Parse ``{"L": int, "reps": [{"labels": [[..], ..], "value": ...}]}``."""
    if not isinstance(data, dict) or "L" not in data or "reps" not in data:
        raise InputError("W-input JSON needs 'L' and 'reps'")
    L = int(data["L"])
    out: dict = {}
    for i, rep in enumerate(data["reps"]):
        try:
            labels = PartitionVector(rep["labels"])
            raw = rep["value"]
            value = RationalQT.from_json(raw) if isinstance(raw, dict) else QTLaurent.from_json(raw)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"reps[{i}] is malformed: {exc}") from None
        if labels.L != L:
            raise InputError(f"reps[{i}] has {labels.L} labels, expected L = {L}")
        if labels in out:
            raise InputError(f"reps[{i}] repeats labels {[list(c) for c in labels]}")
        out[labels] = value
    return L, out


def read_pbseries(data) -> PbSeries:
    try:
        return PbSeries.from_json(data)
    except (TypeError, ValueError) as exc:
        raise InputError(f"PbSeries JSON: {exc}") from None
