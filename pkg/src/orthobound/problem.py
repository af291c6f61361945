"""Problem documents: the JSON input format shared by the CLI and the
sharpness witnesses.

A document looks like::

    {
      "schema": "orthobound/1",
      "mode": "real",
      "space": {"coordinates": {"dimension": 2}},
      "family": {"explicit": [[0.7071067811865476, 0.7071067811865476]]},
      "vectors": {"x": [0.7071067811865476, -0.7071067811865476]},
      "boxes": {"x": {"lower": [-1.0], "upper": [1.0]}}
    }

Complex scalars are written ``[re, im]``. On a quadrature space vectors are
function values at the nodes, either as a plain list or as
``{"nodes": [...], "values": [...]}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import jsonschema
import numpy as np

from . import bounds, quadrature
from .conditions import DEFAULT_TOLERANCE, BoxBounds
from .errors import OrthoboundError, ProblemError
from .space import (COMPLEX, GRAM_TOLERANCE, REAL, OrthonormalFamily, Vector, canonical_family,
                    gram_schmidt)

SCHEMA_ID = "orthobound/1"

_scalar = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_scalars = {"type": "array", "items": _scalar, "minItems": 1}
_matrix = {"type": "array", "items": _scalars, "minItems": 1}
_box = {
    "type": "object",
    "required": ["lower", "upper"],
    "properties": {"lower": _scalars, "upper": _scalars},
    "additionalProperties": False,
}
_sampled = {
    "oneOf": [
        _scalars,
        {
            "type": "object",
            "required": ["values"],
            "properties": {"nodes": {"type": "array", "items": {"type": "number"}},
                           "values": _scalars},
            "additionalProperties": False,
        },
    ]
}
_density = {"oneOf": [{"type": "number", "minimum": 0},
                      {"type": "array", "items": {"type": "number", "minimum": 0}}]}

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "mode", "space", "family"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "mode": {"enum": [REAL, COMPLEX]},
        "space": {
            "type": "object",
            "minProperties": 1,
            "maxProperties": 1,
            "properties": {
                "coordinates": {
                    "type": "object",
                    "required": ["dimension"],
                    "properties": {"dimension": {"type": "integer", "minimum": 1}},
                    "additionalProperties": False,
                },
                "quadrature": {
                    "type": "object",
                    "required": ["rule"],
                    "properties": {
                        "rule": {"enum": ["trapezoid", "trapezoid_closed", "gauss_legendre",
                                          "table"]},
                        "interval": {"type": "array", "items": {"type": "number"},
                                     "minItems": 2, "maxItems": 2},
                        "node_count": {"type": "integer", "minimum": 1},
                        "nodes": {"type": "array", "items": {"type": "number"}},
                        "weights": {"type": "array", "items": {"type": "number"}},
                        "density": _density,
                    },
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
        },
        "family": {
            "type": "object",
            "minProperties": 1,
            "maxProperties": 1,
            "properties": {
                "canonical": {"type": "array", "items": {"type": "integer", "minimum": 0},
                              "minItems": 1},
                "gram_schmidt": _matrix,
                "explicit": _matrix,
                "fourier": {"type": "integer", "minimum": 1},
                "legendre": {"type": "integer", "minimum": 1},
                "custom": _matrix,
                "samples": _matrix,
            },
            "additionalProperties": False,
        },
        "vectors": {"type": "object", "additionalProperties": _sampled},
        "boxes": {"type": "object", "additionalProperties": _box},
        "lambda": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "lambdas": _scalars,
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "tolerance": {
            "type": "object",
            "properties": {"condition": {"type": "number", "minimum": 0},
                           "gram": {"type": "number", "minimum": 0}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft202012Validator(PROBLEM_SCHEMA)


@dataclass
class Problem:
    """A parsed problem document."""

    mode: str
    family: OrthonormalFamily
    vectors: dict
    boxes: dict
    space: quadrature.QuadratureSpace = None
    family_samples: list = None
    lam: float = None
    lambdas: np.ndarray = None
    radius: float = None
    tolerance: float = DEFAULT_TOLERANCE
    document: dict = field(default_factory=dict)

    def vector(self, name: str) -> Vector:
        """Coordinate vector for `name` (embedded when on a quadrature space)."""
        if name not in self.vectors:
            raise ProblemError("missing vector required by this operation", f"vectors.{name}")
        v = self.vectors[name]
        return quadrature.embed(v) if self.space is not None else v

    def box(self, name: str) -> BoxBounds:
        if name not in self.boxes:
            raise ProblemError("missing box required by this operation", f"boxes.{name}")
        return self.boxes[name]


def _scalar_value(v):
    return complex(v[0], v[1]) if isinstance(v, list) else complex(v)


def _scalar_array(values):
    return np.array([_scalar_value(v) for v in values], dtype=np.complex128)


def _path(error) -> str:
    return ".".join(str(p) for p in error.absolute_path) or "<document>"


def _guard(location, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ProblemError:
        raise
    except (OrthoboundError, ValueError) as exc:
        raise ProblemError(str(exc), location) from None


def load_problem(doc: dict) -> Problem:
    """Validate `doc` and build the library objects it describes.

    Raises
    ------
    ProblemError
        With ``location`` set to the dotted path of the offending field.
    """
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ProblemError(err.message, _path(err))
    mode = doc["mode"]
    tol = doc.get("tolerance", {})
    gram_tol = tol.get("gram", GRAM_TOLERANCE)
    space = None
    if "quadrature" in doc["space"]:
        space = _guard("space.quadrature", _build_space, doc["space"]["quadrature"], mode)
        dim = space.size
    else:
        dim = doc["space"]["coordinates"]["dimension"]

    family, samples = _guard("family", _build_family, doc["family"], mode, dim, space, gram_tol)

    vectors = {}
    for name, raw in doc.get("vectors", {}).items():
        loc = f"vectors.{name}"
        if space is None:
            if not isinstance(raw, list):
                raise ProblemError("coordinate vectors are plain lists", loc)
            vectors[name] = _guard(loc, Vector, _scalar_array(raw), mode)
            if vectors[name].dimension != dim:
                raise ProblemError(f"expected {dim} coordinates", loc)
        else:
            vectors[name] = _guard(loc, _function_sample, raw, space)

    boxes = {}
    for name, raw in doc.get("boxes", {}).items():
        loc = f"boxes.{name}"
        box = _guard(loc, BoxBounds, _scalar_array(raw["lower"]), _scalar_array(raw["upper"]))
        if len(box) != family.size:
            raise ProblemError(f"box has {len(box)} entries, family has {family.size}", loc)
        if mode == REAL and not box.is_real:
            raise ProblemError("complex bounds in a real problem", loc)
        boxes[name] = box

    lambdas = None
    if "lambdas" in doc:
        lambdas = _scalar_array(doc["lambdas"])
        if lambdas.size != family.size:
            raise ProblemError(f"expected {family.size} entries", "lambdas")
    return Problem(mode=mode, family=family, vectors=vectors, boxes=boxes, space=space,
                   family_samples=samples, lam=doc.get("lambda"), lambdas=lambdas,
                   radius=doc.get("radius"),
                   tolerance=tol.get("condition", DEFAULT_TOLERANCE), document=doc)


def _build_space(q, mode):
    rule = q["rule"]
    density = q.get("density", 1.0)
    if rule == "table":
        if "nodes" not in q or "weights" not in q:
            raise ProblemError("table rules need nodes and weights", "space.quadrature")
        return quadrature.QuadratureSpace(q["nodes"], q["weights"],
                                          np.broadcast_to(density, (len(q["nodes"]),)),
                                          mode, q.get("interval"))
    if "node_count" not in q:
        raise ProblemError("node_count is required for this rule", "space.quadrature")
    n = q["node_count"]
    if rule == "gauss_legendre":
        a, b = q.get("interval", (-1.0, 1.0))
        return quadrature.gauss_legendre(n, a, b, density, mode)
    a, b = q.get("interval", (0.0, 2 * np.pi))
    return quadrature.trapezoid(a, b, n, density, mode, periodic=(rule == "trapezoid"))


def _function_sample(raw, space):
    if isinstance(raw, dict):
        if "nodes" in raw and not np.allclose(raw["nodes"], space.nodes, rtol=0, atol=1e-12):
            raise ValueError("nodes do not match the quadrature space")
        raw = raw["values"]
    return quadrature.FunctionSample(_scalar_array(raw), space)


def _build_family(spec, mode, dim, space, gram_tol):
    kind, value = next(iter(spec.items()))
    if kind == "canonical":
        return canonical_family(dim, value, mode), None
    if kind in ("fourier", "legendre", "custom", "samples"):
        if space is None:
            raise ProblemError(f"'{kind}' families need a quadrature space", f"family.{kind}")
        if kind == "samples":
            samples = [quadrature.FunctionSample(_scalar_array(v), space) for v in value]
            return quadrature.embed_family(samples, max(gram_tol, quadrature.FAMILY_TOLERANCE)), samples
        funcs = [_scalar_array(v) for v in value] if kind == "custom" else None
        count = len(value) if kind == "custom" else value
        samples, family = quadrature.build_family(kind, count, space, funcs)
        return family, samples
    rows = [Vector(_scalar_array(v), mode) for v in value]
    for i, r in enumerate(rows):
        if r.dimension != dim:
            raise ProblemError(f"expected {dim} coordinates", f"family.{kind}.{i}")
    if space is not None:
        raise ProblemError("on a quadrature space give the family as functions",
                           f"family.{kind}")
    if kind == "gram_schmidt":
        return gram_schmidt(rows, gram_tol), None
    return OrthonormalFamily.from_vectors(rows, gram_tolerance=gram_tol), None


# -- evaluation ---------------------------------------------------------------

def _lambda(problem: Problem) -> float:
    if problem.lam is None:
        raise ProblemError("this theorem needs a mixing weight", "lambda")
    return problem.lam


def _mixture_box(problem: Problem) -> BoxBounds:
    return problem.boxes["mixture"] if "mixture" in problem.boxes else problem.box("x")


def evaluate(problem: Problem, tag: str, force: bool = False) -> bounds.BoundReport:
    """Run the bound named by `tag` on a parsed problem."""
    tol = problem.tolerance
    fam = problem.family
    if tag in ("integral_bessel", "integral_gruess"):
        if problem.space is None:
            raise ProblemError(f"{tag} needs a quadrature space", "space")
        if "x" not in problem.vectors:
            raise ProblemError("missing vector required by this operation", "vectors.x")
        f = problem.vectors["x"]
        if tag == "integral_bessel":
            return quadrature.integral_bessel(f, problem.family_samples, problem.box("x"),
                                              problem.space, tol, force)
        if "y" not in problem.vectors:
            raise ProblemError("missing vector required by this operation", "vectors.y")
        return quadrature.integral_gruess(f, problem.vectors["y"], problem.family_samples,
                                          problem.box("x"), problem.box("y"), problem.space,
                                          tol, force)
    x = problem.vector("x")
    if tag == "lemma21":
        if problem.lambdas is not None and problem.radius is not None:
            lambdas, r = problem.lambdas, problem.radius
        elif "x" in problem.boxes:
            box = problem.boxes["x"]
            lambdas, r = box.midpoints, 0.5 * np.sqrt(box.width_sq)
        else:
            raise ProblemError("lemma21 needs lambdas and radius (or a box for x)", "lambdas")
        return bounds.lemma21_bound(x, fam, lambdas, r, tol, force)
    if tag == "bessel_b1":
        return bounds.bessel_counterpart_b1(x, fam, problem.box("x"), tol, force)
    if tag == "bessel_b2":
        return bounds.bessel_counterpart_b2(x, fam, problem.box("x"), tol, force)
    if tag == "compare":
        return bounds.compare_b1_b2(x, fam, problem.box("x"), tol, force).report
    y = problem.vector("y")
    if tag == "gruess_v1":
        return bounds.gruess_v1(x, y, fam, problem.box("x"), problem.box("y"), tol, force)
    if tag == "gruess_v2":
        return bounds.gruess_v2(x, y, fam, problem.box("x"), problem.box("y"), tol, force)
    if tag == "companion":
        return bounds.companion_bound(x, y, fam, _mixture_box(problem), _lambda(problem),
                                      tol, force)
    if tag == "companion_abs":
        return bounds.companion_abs(x, y, fam, _mixture_box(problem), _lambda(problem),
                                    tol, force)
    raise ProblemError(f"unknown theorem tag {tag!r}", "theorem")


# -- serialization ------------------------------------------------------------

def scalars_to_json(values, mode: str) -> list:
    values = np.asarray(values, dtype=np.complex128)
    if mode == REAL:
        return [float(v) for v in values.real]
    return [[float(v.real), float(v.imag)] for v in values]


def box_to_json(lower, upper, mode: str) -> dict:
    return {"lower": scalars_to_json(lower, mode), "upper": scalars_to_json(upper, mode)}


def coordinate_document(mode: str, members, vectors: dict, boxes: dict, **extra) -> dict:
    """Build a coordinate-space problem document from raw arrays.

    `boxes` maps names to ``(lower, upper)`` pairs.
    """
    members = np.asarray(members)
    doc = {
        "schema": SCHEMA_ID,
        "mode": mode,
        "space": {"coordinates": {"dimension": int(members.shape[1])}},
        "family": {"explicit": [scalars_to_json(row, mode) for row in members]},
        "vectors": {k: scalars_to_json(v, mode) for k, v in vectors.items()},
        "boxes": {k: box_to_json(lo, hi, mode) for k, (lo, hi) in boxes.items()},
    }
    doc.update(_extras(mode, extra))
    return doc


def quadrature_document(mode: str, rule: dict, family: dict, functions: dict, boxes: dict,
                        **extra) -> dict:
    doc = {
        "schema": SCHEMA_ID,
        "mode": mode,
        "space": {"quadrature": rule},
        "family": family,
        "vectors": {k: scalars_to_json(v, mode) for k, v in functions.items()},
        "boxes": {k: box_to_json(lo, hi, mode) for k, (lo, hi) in boxes.items()},
    }
    doc.update(_extras(mode, extra))
    return doc


def _extras(mode, extra):
    out = {}
    if extra.get("lam") is not None:
        out["lambda"] = float(extra["lam"])
    if extra.get("lambdas") is not None:
        out["lambdas"] = scalars_to_json(extra["lambdas"], mode)
    if extra.get("radius") is not None:
        out["radius"] = float(extra["radius"])
    return out
