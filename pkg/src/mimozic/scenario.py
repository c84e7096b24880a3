"""Scenario documents: channel, power constraint and solver overrides as JSON.

Matrices are row-major lists of rows.  An entry is a number (real) or a
two-element ``[re, im]`` list (complex).  Example::

    {
      "channel": {"H1": [[1, 0], [0, 1]], "F": [[0.3, 0], [0, 0.9]],
                  "H2": [[1, 0], [0, 1]]},
      "constraint": {"type": "total_power", "P1": 1, "P2": 4},
      "solver": {"seed": 0, "restarts": 8}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from numbers import Real
from typing import Optional

import numpy as np

from .channel import (
    CovarianceConstraint,
    PerAntennaPowerConstraint,
    PerSymbolPowerConstraint,
    TotalPowerConstraint,
    ZicChannel,
    check_dims,
)
from .matcore import DimensionError
from .solvers.config import SolverConfig

CONSTRAINT_TYPES = ("covariance", "total_power", "per_symbol_power", "per_antenna_power")
SOLVER_FIELDS = {f.name: f.type for f in fields(SolverConfig)}


class ScenarioError(ValueError):
    """Schema violation in a scenario document; the message names the field."""


@dataclass(frozen=True)
class Scenario:
    channel: ZicChannel
    constraint: object
    solver: Optional[dict] = None

    def config(self, **overrides) -> SolverConfig:
        return SolverConfig().with_overrides(**(self.solver or {})).with_overrides(**overrides)


def _is_number(v):
    return isinstance(v, Real) and not isinstance(v, bool)


def _entry(v, where):
    if _is_number(v):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(_is_number(x) for x in v):
        return complex(v[0], v[1])
    raise ScenarioError(f"{where}: entry must be a number or a [re, im] pair, got {v!r}")


def parse_matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ScenarioError(f"{where}: expected a non-empty list of rows")
    rows = []
    width = None
    for i, row in enumerate(value):
        if not isinstance(row, list) or not row:
            raise ScenarioError(f"{where}[{i}]: expected a non-empty row list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ScenarioError(f"{where}[{i}]: row has {len(row)} entries, expected {width}")
        rows.append([_entry(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)])
    M = np.array(rows, dtype=complex)
    if not np.any(M.imag):
        return M.real.copy()
    return M


def encode_matrix(M) -> list:
    M = np.asarray(M)
    if np.iscomplexobj(M) and np.any(M.imag):
        return [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return [[float(np.real(z)) for z in row] for row in M]


def _number(d, key, where):
    if key not in d:
        raise ScenarioError(f"{where}.{key}: missing")
    v = d[key]
    if not _is_number(v):
        raise ScenarioError(f"{where}.{key}: expected a number, got {v!r}")
    if v < 0:
        raise ScenarioError(f"{where}.{key}: must be non-negative")
    return float(v)


def _vector(d, key, where):
    if key not in d:
        raise ScenarioError(f"{where}.{key}: missing")
    v = d[key]
    if not isinstance(v, list) or not v or not all(_is_number(x) for x in v):
        raise ScenarioError(f"{where}.{key}: expected a non-empty list of numbers")
    if any(x < 0 for x in v):
        raise ScenarioError(f"{where}.{key}: entries must be non-negative")
    return tuple(float(x) for x in v)


def _constraint(doc):
    where = "constraint"
    if not isinstance(doc, dict):
        raise ScenarioError(f"{where}: expected an object")
    kind = doc.get("type")
    if kind not in CONSTRAINT_TYPES:
        raise ScenarioError(f"{where}.type: must be one of {', '.join(CONSTRAINT_TYPES)}, got {kind!r}")
    if kind == "covariance":
        mats = {}
        for key in ("S1", "S2"):
            if key not in doc:
                raise ScenarioError(f"{where}.{key}: missing")
            mats[key] = parse_matrix(doc[key], f"{where}.{key}")
            if mats[key].shape[0] != mats[key].shape[1]:
                raise ScenarioError(f"{where}.{key}: covariance must be square")
        try:
            return CovarianceConstraint(mats["S1"], mats["S2"])
        except ValueError as exc:
            raise ScenarioError(f"{where}: {exc}") from exc
    if kind == "per_antenna_power":
        return PerAntennaPowerConstraint(_vector(doc, "p1", where), _vector(doc, "p2", where))
    cls = TotalPowerConstraint if kind == "total_power" else PerSymbolPowerConstraint
    return cls(_number(doc, "P1", where), _number(doc, "P2", where))


def _solver(doc):
    if doc is None:
        return None
    if not isinstance(doc, dict):
        raise ScenarioError("solver: expected an object")
    out = {}
    for key, v in doc.items():
        if key not in SOLVER_FIELDS or key == "request_certificate":
            raise ScenarioError(f"solver.{key}: unknown setting")
        if not _is_number(v):
            raise ScenarioError(f"solver.{key}: expected a number")
        out[key] = v
    try:
        SolverConfig().with_overrides(**out)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"solver: {exc}") from exc
    return out


def scenario_from_dict(doc) -> Scenario:
    """Validate a decoded document.

    Raises
    ------
    ScenarioError
        Schema violations (missing fields, ragged rows, bad types).
    DimensionError
        Well-formed matrices whose sizes do not fit together.
    """
    if not isinstance(doc, dict):
        raise ScenarioError("document root must be an object")
    unknown = set(doc) - {"channel", "constraint", "solver"}
    if unknown:
        raise ScenarioError(f"unknown top-level field(s): {', '.join(sorted(unknown))}")
    chdoc = doc.get("channel")
    if not isinstance(chdoc, dict):
        raise ScenarioError("channel: expected an object with H1, F, H2")
    mats = {}
    for key in ("H1", "F", "H2"):
        if key not in chdoc:
            raise ScenarioError(f"channel.{key}: missing")
        mats[key] = parse_matrix(chdoc[key], f"channel.{key}")
    ch = ZicChannel(mats["H1"], mats["F"], mats["H2"])
    if "constraint" not in doc:
        raise ScenarioError("constraint: missing")
    P = _constraint(doc["constraint"])
    check_dims(ch, P)
    return Scenario(ch, P, _solver(doc.get("solver")))


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc)


def constraint_to_dict(P) -> dict:
    if isinstance(P, CovarianceConstraint):
        return {"type": P.kind, "S1": encode_matrix(P.S1), "S2": encode_matrix(P.S2)}
    if isinstance(P, PerAntennaPowerConstraint):
        return {"type": P.kind, "p1": list(P.p1), "p2": list(P.p2)}
    return {"type": P.kind, "P1": float(P.P1), "P2": float(P.P2)}


def scenario_to_dict(sc: Scenario) -> dict:
    doc = {
        "channel": {k: encode_matrix(getattr(sc.channel, k)) for k in ("H1", "F", "H2")},
        "constraint": constraint_to_dict(sc.constraint),
    }
    if sc.solver:
        doc["solver"] = dict(sc.solver)
    return doc


def dump_scenario(sc: Scenario) -> str:
    return json.dumps(scenario_to_dict(sc), indent=2, sort_keys=True) + "\n"


__all__ = [
    "DimensionError",
    "Scenario",
    "ScenarioError",
    "dump_scenario",
    "load_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
]
