"""JSON model files.

Layout::

    {
      "p": 2,
      "sigma": [[0.04, 0.0], [0.0, 0.09]]   or  {"diag": [0.04, 0.09]},
      "delta": [1.0, -2.0],
      "gamma": [[...], [...]]               or  {"diag": [...]},
      "theta": 0.0,
      "dt": 0.0397,
      "dist": "normal"                      or  {"t": {"nu": 5}}
    }

``theta`` defaults to 0. Floats are written with Python's shortest
round-trip repr, so a write/read cycle is bit-exact.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .errors import InvalidModel, ModelFileError
from .spectral import DeltaGammaModel, Normal, StudentT


def _number(path, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ModelFileError(path, f"expected a number, got {json.dumps(v)}")
    if not math.isfinite(v):
        raise ModelFileError(path, "number must be finite")
    return float(v)


def _vector(path, v, p):
    if not isinstance(v, list):
        raise ModelFileError(path, "expected an array")
    if len(v) != p:
        raise ModelFileError(path, f"expected {p} entries, got {len(v)}")
    return np.array([_number(f"{path}[{i}]", x) for i, x in enumerate(v)])


def _matrix(path, v, p):
    if isinstance(v, dict):
        if set(v) != {"diag"}:
            raise ModelFileError(path, "matrix object must have exactly the key 'diag'")
        return np.diag(_vector(f"{path}.diag", v["diag"], p))
    if not isinstance(v, list):
        raise ModelFileError(path, "expected an array of rows or {\"diag\": [...]}")
    if len(v) != p:
        raise ModelFileError(path, f"expected {p} rows, got {len(v)}")
    return np.array([_vector(f"{path}[{i}]", row, p) for i, row in enumerate(v)])


def _dist(path, v):
    if v == "normal":
        return Normal()
    if isinstance(v, dict) and set(v) == {"t"} and isinstance(v["t"], dict):
        if "nu" not in v["t"]:
            raise ModelFileError(f"{path}.t.nu", "missing")
        nu = _number(f"{path}.t.nu", v["t"]["nu"])
        if not nu > 0:
            raise ModelFileError(f"{path}.t.nu", "must be positive")
        return StudentT(nu)
    raise ModelFileError(path, "expected \"normal\" or {\"t\": {\"nu\": ...}}")


def model_from_dict(doc) -> DeltaGammaModel:
    if not isinstance(doc, dict):
        raise ModelFileError("$", "top level must be an object")
    for key in ("p", "sigma", "delta", "gamma", "dt", "dist"):
        if key not in doc:
            raise ModelFileError(key, "missing")
    p = doc["p"]
    if isinstance(p, bool) or not isinstance(p, int) or p < 1:
        raise ModelFileError("p", "expected a positive integer")
    sigma = _matrix("sigma", doc["sigma"], p)
    delta = _vector("delta", doc["delta"], p)
    gamma = _matrix("gamma", doc["gamma"], p)
    theta = _number("theta", doc.get("theta", 0.0))
    dt = _number("dt", doc["dt"])
    dist = _dist("dist", doc["dist"])
    try:
        return DeltaGammaModel(sigma, delta, gamma, theta=theta, dt=dt, dist=dist)
    except InvalidModel as exc:
        raise ModelFileError("$", str(exc)) from exc


def loads(text) -> DeltaGammaModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    return model_from_dict(doc)


def load(path) -> DeltaGammaModel:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ModelFileError(str(path), exc.strerror or str(exc)) from exc
    return loads(text)


def _matrix_doc(a):
    a = np.asarray(a)
    if np.count_nonzero(a - np.diag(np.diag(a))) == 0:
        return {"diag": [float(x) for x in np.diag(a)]}
    return [[float(x) for x in row] for row in a]


def model_to_dict(model: DeltaGammaModel):
    dist = "normal" if isinstance(model.dist, Normal) else {"t": {"nu": float(model.dist.nu)}}
    return {
        "p": model.p,
        "sigma": _matrix_doc(model.sigma),
        "delta": [float(x) for x in model.delta],
        "gamma": _matrix_doc(model.gamma_matrix),
        "theta": model.theta,
        "dt": model.dt,
        "dist": dist,
    }


def dumps(model: DeltaGammaModel) -> str:
    return json.dumps(model_to_dict(model), indent=2)


def dump(model: DeltaGammaModel, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model))
        fh.write("\n")
