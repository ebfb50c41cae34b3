"""JSON model files.

Layout::

    {
      "dim": 4,
      "brackets": [[0, 1, 2, 1.0], ...],
      "h_indices": [],
      "metric": [[1, 0, 0, 0], ...],      # over m, in m_indices order
      "X": [0, 0, 0, 0.5],                 # over m
      "phi": {"family": "randers", "params": {}},
      "config": {"seed": 7, "nr_tol": 1e-9}   # optional
    }

``phi.params`` accepts ``coeffs`` (polynomial, ascending powers), ``s_min``
(kropina, matsumoto) and ``b0`` (``null`` or ``"inf"`` for unbounded).
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .config import RunConfig
from .errors import FrhsError, ValidationError
from .lie_algebra import StructureConstants, decompose, validate
from .metric import FAMILIES, AlphaBetaModel, InnerProduct, PhiFamily


class ModelFileError(ValidationError):
    """Problem with a specific field of a model file."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


_KNOWN_KEYS = {"dim", "brackets", "h_indices", "metric", "X", "phi", "config", "name"}


def _require(doc, key):
    if key not in doc:
        raise ModelFileError(key, "missing required field")
    return doc[key]


def _float_array(field, value, shape=None):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ModelFileError(field, "must contain only numbers") from None
    if shape is not None and arr.shape != shape:
        raise ModelFileError(field, f"expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ModelFileError(field, "contains non-finite values")
    return arr


def _parse_b0(value, default):
    if value is None:
        return math.inf
    if isinstance(value, str) and value.lower() in ("inf", "infinity"):
        return math.inf
    return float(value)


def parse_phi(doc) -> PhiFamily:
    if not isinstance(doc, dict):
        raise ModelFileError("phi", "must be an object with 'family' and 'params'")
    fam = doc.get("family")
    if fam not in FAMILIES:
        raise ModelFileError("phi.family", f"must be one of {list(FAMILIES)}, got {fam!r}")
    params = doc.get("params") or {}
    if not isinstance(params, dict):
        raise ModelFileError("phi.params", "must be an object")
    allowed = {"randers": {"b0"}, "kropina": {"s_min", "b0"}, "matsumoto": {"s_min", "b0"}, "polynomial": {"coeffs", "b0"}}
    extra = set(params) - allowed[fam]
    if extra:
        raise ModelFileError("phi.params", f"unexpected key(s) for {fam}: {sorted(extra)}")
    try:
        b0 = _parse_b0(params["b0"], None) if "b0" in params else PhiFamily.default_b0(fam)
        kwargs = {"b0": b0}
        if "s_min" in params:
            kwargs["s_min"] = float(params["s_min"])
        if fam == "polynomial":
            if "coeffs" not in params:
                raise ModelFileError("phi.params.coeffs", "missing for polynomial family")
            kwargs["coeffs"] = tuple(float(c) for c in params["coeffs"])
        return PhiFamily(fam, **kwargs)
    except (TypeError, ValueError) as exc:
        raise ModelFileError("phi.params", str(exc)) from None


def model_from_dict(doc: dict) -> tuple[AlphaBetaModel, dict]:
    """Build a model; also return the raw ``config`` overrides."""
    if not isinstance(doc, dict):
        raise ModelFileError("<root>", "top level must be a JSON object")
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise ModelFileError(sorted(unknown)[0], "unknown top-level field")
    dim = _require(doc, "dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ModelFileError("dim", f"must be a positive integer, got {dim!r}")
    brackets = _require(doc, "brackets")
    if not isinstance(brackets, list):
        raise ModelFileError("brackets", "must be a list of [i, j, k, value]")
    for n, row in enumerate(brackets):
        if not isinstance(row, list) or len(row) != 4:
            raise ModelFileError(f"brackets[{n}]", "must be [i, j, k, value]")
        if any(isinstance(t, bool) or not isinstance(t, int) for t in row[:3]):
            raise ModelFileError(f"brackets[{n}]", "indices must be integers")
        if not isinstance(row[3], (int, float)) or isinstance(row[3], bool):
            raise ModelFileError(f"brackets[{n}]", "value must be a number")
    h = doc.get("h_indices", [])
    if not isinstance(h, list) or any(isinstance(t, bool) or not isinstance(t, int) for t in h):
        raise ModelFileError("h_indices", "must be a list of integers")

    config = doc.get("config") or {}
    if not isinstance(config, dict):
        raise ModelFileError("config", "must be an object")
    try:
        run = RunConfig().updated(config)
    except (TypeError, ValueError) as exc:
        raise ModelFileError("config", str(exc)) from None
    tol = run.tolerances

    try:
        alg = validate(StructureConstants.from_entries(dim, brackets), tol.jacobi_tol)
    except FrhsError as exc:
        raise ModelFileError("brackets", str(exc)) from None
    try:
        dec = decompose(alg, h, tol.jacobi_tol)
    except FrhsError as exc:
        raise ModelFileError("h_indices", str(exc)) from None
    k = dec.dim_m
    A = _float_array("metric", _require(doc, "metric"), (k, k))
    X = _float_array("X", _require(doc, "X"), (k,))
    try:
        inner = InnerProduct(A)
    except FrhsError as exc:
        raise ModelFileError("metric", str(exc)) from None
    phi = parse_phi(_require(doc, "phi"))
    model = AlphaBetaModel(dec, inner, X, phi, tol, name=str(doc.get("name", "")))
    return model, config


def model_to_dict(model: AlphaBetaModel, config: dict | None = None) -> dict:
    dec = model.decomposition
    doc = {
        "name": model.name,
        "dim": dec.algebra.dim,
        "brackets": [[i, j, k, c] for i, j, k, c in dec.algebra.entries],
        "h_indices": list(dec.h_indices),
        "metric": model.A.tolist(),
        "X": model.X.tolist(),
        "phi": model.phi.to_dict(),
    }
    if config:
        doc["config"] = dict(config)
    return doc


def load_model(path) -> tuple[AlphaBetaModel, dict]:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"line {exc.lineno} column {exc.colno}", f"invalid JSON: {exc.msg}") from None
    model, config = model_from_dict(doc)
    if not model.name:
        model = AlphaBetaModel(model.decomposition, model.inner, model.X, model.phi, model.tol, Path(path).stem)
    return model, config


def save_model(model: AlphaBetaModel, path, config: dict | None = None) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model, config), indent=2) + "\n")
