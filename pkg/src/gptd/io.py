"""JSON file formats for models, states, instances and measurements, and reports.

Complex matrices are stored as row-major nested lists of ``[re, im]`` pairs.
A flat list of ``dim*dim`` pairs is accepted on input as well.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .cones import GeneratorCone, GptModel, PSDCone, SeparableCone
from .embedding import AbstractModel

FORMAT_VERSION = 1


class ParseError(ValueError):
    """A file could not be parsed; ``where`` names the offending field."""

    def __init__(self, message, where=""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(obj, dim: int | None = None, where: str = "matrix") -> np.ndarray:
    try:
        a = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"not a numeric array ({exc})", where) from None
    if a.ndim == 2 and a.shape[1] == 2:
        n = int(round(np.sqrt(a.shape[0])))
        if n * n != a.shape[0]:
            raise ParseError(f"flat matrix has {a.shape[0]} entries, not a square number", where)
        a = a.reshape(n, n, 2)
    if a.ndim != 3 or a.shape[2] != 2 or a.shape[0] != a.shape[1]:
        raise ParseError(f"expected a square array of [re, im] pairs, got shape {a.shape}", where)
    if dim is not None and a.shape[0] != dim:
        raise ParseError(f"expected dimension {dim}, got {a.shape[0]}", where)
    return a[..., 0] + 1j * a[..., 1]


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", str(path)) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", str(path))
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION})", f"{path}:format_version")
    return data


def _field(data, key, where):
    if key not in data:
        raise ParseError("missing field", f"{where}:{key}")
    return data[key]


def model_from_dict(data: dict, tol: float = 1e-9, seed: int = 0, where: str = "model"):
    """Parse a model description.

    Returns either a :class:`GptModel` or, when an ``abstract`` block is
    present, an :class:`AbstractModel` that still has to be embedded.
    """
    if "abstract" in data:
        block = data["abstract"]
        try:
            gens = np.array(_field(block, "generators", f"{where}:abstract"), dtype=float)
            unit = np.array(_field(block, "unit", f"{where}:abstract"), dtype=float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"non-numeric entries ({exc})", f"{where}:abstract") from None
        dim_v = block.get("dim_v", unit.shape[0] if unit.ndim == 1 else None)
        if gens.ndim != 2 or unit.ndim != 1 or gens.shape[1] != unit.shape[0] or unit.shape[0] != dim_v:
            raise ParseError("generators and unit must be vectors of length dim_v", f"{where}:abstract")
        return AbstractModel(gens, unit)
    dim = _field(data, "dim", where)
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"dim must be a positive integer, got {dim!r}", f"{where}:dim")
    cone = _field(data, "cone", where)
    kind = cone.get("type") if isinstance(cone, dict) else None
    if kind == "psd":
        return GptModel(PSDCone(dim, tol))
    if kind == "sep22":
        if dim != 4:
            raise ParseError("sep22 cone requires dim 4", f"{where}:dim")
        return GptModel(SeparableCone(tol, seed))
    if kind == "generators":
        gens = _field(cone, "generators", f"{where}:cone")
        mats = [matrix_from_json(g, dim, f"{where}:cone:generators[{i}]") for i, g in enumerate(gens)]
        return GptModel(GeneratorCone(mats, tol))
    raise ParseError(f"unknown cone type {kind!r}", f"{where}:cone:type")


def model_to_dict(model) -> dict:
    if isinstance(model, AbstractModel):
        return {
            "format_version": FORMAT_VERSION,
            "abstract": {
                "dim_v": model.dim_v,
                "generators": model.generators.tolist(),
                "unit": model.unit.tolist(),
            },
        }
    cone = model.cone
    if isinstance(cone, PSDCone):
        desc = {"type": "psd"}
    elif isinstance(cone, SeparableCone):
        desc = {"type": "sep22"}
    else:
        desc = {"type": "generators", "generators": [matrix_to_json(g) for g in cone.generators]}
    return {"format_version": FORMAT_VERSION, "dim": model.dim, "cone": desc}


def load_model(path, tol: float = 1e-9, seed: int = 0):
    return model_from_dict(_load_json(path), tol, seed, where=str(path))


def load_states(path, dim: int) -> list[np.ndarray]:
    data = _load_json(path)
    if "state" in data:
        return [matrix_from_json(data["state"], dim, f"{path}:state")]
    states = _field(data, "states", str(path))
    return [matrix_from_json(s, dim, f"{path}:states[{i}]") for i, s in enumerate(states)]


def load_instance(path, dim: int):
    """``(rho0, rho1, p)`` from an instance file; ``p`` defaults to 1/2."""
    data = _load_json(path)
    rho0 = matrix_from_json(_field(data, "rho0", str(path)), dim, f"{path}:rho0")
    rho1 = matrix_from_json(_field(data, "rho1", str(path)), dim, f"{path}:rho1")
    p = data.get("p", 0.5)
    if not isinstance(p, (int, float)):
        raise ParseError(f"p must be a number, got {p!r}", f"{path}:p")
    return rho0, rho1, float(p)


def instance_to_dict(rho0, rho1, p: float) -> dict:
    return {"format_version": FORMAT_VERSION, "rho0": matrix_to_json(rho0), "rho1": matrix_to_json(rho1), "p": p}


def load_measurement(path, dim: int) -> list[np.ndarray]:
    data = _load_json(path)
    effects = _field(data, "effects", str(path))
    if not isinstance(effects, list):
        raise ParseError("effects must be a list", f"{path}:effects")
    return [matrix_from_json(e, dim, f"{path}:effects[{i}]") for i, e in enumerate(effects)]


def measurement_to_dict(effects) -> dict:
    return {"format_version": FORMAT_VERSION, "effects": [matrix_to_json(e) for e in effects]}


def file_digest(path) -> str:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from None
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj) and obj.ndim == 2:
            return matrix_to_json(obj)
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps_report(report: dict) -> str:
    """Deterministic JSON text; floats use the shortest round-tripping repr."""
    return json.dumps(_jsonable(report), indent=2, sort_keys=True, allow_nan=False) + "\n"
