"""JSON serialization for algebras, gluing data, and verdicts.

All scalars serialize as exact "p/q" strings (never floats), keys are sorted,
and every encoder is deterministic, so serialized output is byte-stable and
suitable for golden-file comparison.
"""
from __future__ import annotations

import json
from typing import Optional, Tuple

from .builder import QuasiQnSpec, RelatedMatrix, make_spec
from .derivations import GeneratorImages
from .automorphisms import AutCandidate
from .liecore import GenLabel, JacobiViolation, LieAlgebra, PlainLabel, TopLabel
from .linalg import Matrix, MonomialMatrix, scalar, scalar_to_str


class BadInput(ValueError):
    """Malformed or inconsistent JSON input; the message names the field."""


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- scalars and matrices -----------------------------------------------------------


def matrix_to_json(M: Matrix) -> list:
    return [[scalar_to_str(M.entry(i, j)) for j in range(M.cols)] for i in range(M.rows)]


def matrix_from_json(data, field: str = "matrix") -> Matrix:
    if not isinstance(data, list) or any(not isinstance(row, list) for row in data):
        raise BadInput(f"{field}: expected an array of arrays")
    try:
        return Matrix([[scalar(x) for x in row] for row in data])
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise BadInput(f"{field}: {exc}") from exc


def vector_from_json(data, length: int, field: str) -> tuple:
    if not isinstance(data, list) or len(data) != length:
        raise BadInput(f"{field}: expected an array of {length} scalars")
    try:
        return tuple(scalar(x) for x in data)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise BadInput(f"{field}: {exc}") from exc


def monomial_to_json(K: MonomialMatrix) -> dict:
    return {
        "perm": [p + 1 for p in K.perm],
        "scale": [scalar_to_str(s) for s in K.scale],
    }


# -- gluing parameters --------------------------------------------------------------


def spec_to_json(spec: QuasiQnSpec) -> dict:
    return {"n": spec.n, "m": spec.m, "r": spec.r, "B": matrix_to_json(spec.B)}


def spec_from_json(data) -> QuasiQnSpec:
    if not isinstance(data, dict):
        raise BadInput("spec: expected an object")
    for key in ("n", "m", "r"):
        if not isinstance(data.get(key), int):
            raise BadInput(f"{key}: expected an integer")
    n, m, r = data["n"], data["m"], data["r"]
    B = data.get("B")
    if B is None:
        if m != r:
            raise BadInput("B: required when r < m")
        return make_spec(n, m, r)
    rows = matrix_from_json(B, "B")
    if rows.rows != r:
        raise BadInput(f"B: expected {r} rows, got {rows.rows}")
    if rows.cols != m - r:
        raise BadInput(f"B: expected {m - r} columns, got {rows.cols}")
    return QuasiQnSpec(n, m, r, rows)


# -- algebras -----------------------------------------------------------------------


def _label_to_str(label) -> str:
    if isinstance(label, GenLabel):
        return f"e_{label.copy}_{label.level}"
    if isinstance(label, TopLabel):
        return f"e_{label.index}_n"
    if isinstance(label, PlainLabel):
        return f"x_{label.index}"
    raise TypeError(f"unknown label {label!r}")


def algebra_to_json(L: LieAlgebra, spec: Optional[QuasiQnSpec] = None) -> dict:
    out = {
        "dim": L.dim,
        "labels": [_label_to_str(l) for l in L.labels],
        "brackets": [
            {
                "i": i,
                "j": j,
                "value": [[k, scalar_to_str(c)] for k, c in sorted(L.sc[(i, j)].items())],
            }
            for (i, j) in sorted(L.sc)
        ],
    }
    if spec is not None:
        out["spec"] = spec_to_json(spec)
    return out


def algebra_from_json(data) -> Tuple[LieAlgebra, Optional[QuasiQnSpec]]:
    if not isinstance(data, dict):
        raise BadInput("algebra: expected an object")
    dim = data.get("dim")
    if not isinstance(dim, int) or dim < 0:
        raise BadInput("dim: expected a nonnegative integer")
    sc = {}
    for entry in data.get("brackets", []):
        if not isinstance(entry, dict) or not {"i", "j", "value"} <= set(entry):
            raise BadInput("brackets: each entry needs i, j, value")
        i, j = entry["i"], entry["j"]
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < j < dim):
            raise BadInput(f"brackets: indices ({i},{j}) must satisfy 0 <= i < j < dim")
        value = {}
        for pair in entry["value"]:
            if not isinstance(pair, list) or len(pair) != 2 or not isinstance(pair[0], int):
                raise BadInput("value: expected [index, scalar] pairs")
            k, c = pair
            if not 0 <= k < dim:
                raise BadInput(f"value: target index {k} out of range")
            value[k] = scalar(c)
        sc[(i, j)] = value
    spec = spec_from_json(data["spec"]) if "spec" in data else None
    labels = spec.labels() if spec is not None else None
    try:
        L = LieAlgebra(dim, sc, labels=labels)
    except JacobiViolation:
        raise
    except ValueError as exc:
        raise BadInput(f"algebra: {exc}") from exc
    if spec is not None and spec.dim != dim:
        raise BadInput(f"spec: implies dim {spec.dim}, but dim is {dim}")
    return L, spec


# -- generator-image candidates ------------------------------------------------------


def _images_from_json(data, spec: QuasiQnSpec) -> tuple:
    if not isinstance(data, dict) or not isinstance(data.get("images"), dict):
        raise BadInput("images: expected an object keyed by generator")
    images = data["images"]
    e0, e1 = [], []
    for s in range(1, spec.m + 1):
        for t, dest in ((0, e0), (1, e1)):
            key = f"e_{s}{t}"
            if key not in images:
                raise BadInput(f"images: missing key {key}")
            dest.append(vector_from_json(images[key], spec.dim, f"images.{key}"))
    return tuple(e0), tuple(e1)


def candidate_from_json(data, spec: QuasiQnSpec) -> AutCandidate:
    e0, e1 = _images_from_json(data, spec)
    return AutCandidate(e0, e1)


def generator_images_from_json(data, spec: QuasiQnSpec) -> GeneratorImages:
    e0, e1 = _images_from_json(data, spec)
    return GeneratorImages(e0, e1)


def candidate_to_json(spec: QuasiQnSpec, e0, e1) -> dict:
    images = {}
    for s in range(1, spec.m + 1):
        images[f"e_{s}0"] = [scalar_to_str(scalar(x)) for x in e0[s - 1]]
        images[f"e_{s}1"] = [scalar_to_str(scalar(x)) for x in e1[s - 1]]
    return {"images": images}


# -- related matrices and verdicts --------------------------------------------------


def related_to_json(R: RelatedMatrix) -> dict:
    return {"m": R.m, "r": R.r, "matrix": matrix_to_json(R.matrix)}


def iso_verdict_to_json(verdict) -> dict:
    out = {"isomorphic": verdict.isomorphic, "witness": None, "reason": verdict.reason}
    if verdict.isomorphic:
        out["witness"] = {
            "E": matrix_to_json(verdict.equivalence.E),
            "K": monomial_to_json(verdict.equivalence.K),
            "map": matrix_to_json(verdict.map),
        }
    return out


def condition_verdict_to_json(verdict) -> dict:
    return {"ok": verdict.ok, "failed": verdict.failed, "detail": verdict.detail}
