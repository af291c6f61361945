"""Best-constant witnesses and randomized tightness probing.

The ratio of interest is ``left_value / outer_bound``. A proven bound keeps
it at or below 1 for every admissible input; a ratio of 1 shows the
constant in the outer term cannot be lowered.

Probes are drawn in chunks of :data:`CHUNK` instances. Chunk ``j`` uses a
generator seeded from ``(seed, j)`` alone, so chunks can be evaluated in any
order or in parallel and give the same result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds, problem, quadrature
from .conditions import ball_points, combine, re_form_satisfied, re_form_terms, sq_norm
from .errors import DomainError, ShapeError, UnsupportedTagError
from .space import COMPLEX, REAL

CHUNK = 4096
BOUNDARY_FRACTION = 0.1
SOUNDNESS_TOLERANCE = 1e-9

WITNESS_TAGS = bounds.TAGS
PROBE_TAGS = bounds.TAGS
_INTEGRAL = ("integral_bessel", "integral_gruess")
_MIXED = ("companion", "companion_abs")


@dataclass(frozen=True)
class SharpnessResult:
    theorem_tag: str
    best_ratio: float
    witness: dict
    probes: int
    lam: float = None
    seed: int = None
    dim: int = None
    family_size: int = None
    mode: str = REAL
    soundness_violations: int = 0

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem_tag,
            "best_ratio": self.best_ratio,
            "probes": self.probes,
            "lambda": self.lam,
            "seed": self.seed,
            "dim": self.dim,
            "family_size": self.family_size,
            "mode": self.mode,
            "soundness_violations": self.soundness_violations,
            "witness": self.witness,
        }


def paper_witness(tag: str, m: float = 1.0, lam: float = 0.5) -> dict:
    """The extremal instance in R^2 with e = (1/sqrt 2, 1/sqrt 2).

    x = (m/sqrt 2, -m/sqrt 2) is orthogonal to e and lies on the boundary of
    the ball for the box (-m, m), so the bilinear form vanishes and the
    Bessel difference m^2 equals the outer bound. Grüss tags use y = x;
    companion tags use y = x with ``lam = 1/2``. Integral tags realize the
    same vectors on the 2-point Gauss-Legendre rule with unit density, where
    the normalized constant function samples to exactly e.
    """
    if tag not in WITNESS_TAGS:
        raise UnsupportedTagError(f"no witness for theorem tag {tag!r}")
    if not m > 0:
        raise DomainError("m must be positive")
    if tag in _MIXED and lam != 0.5:
        raise UnsupportedTagError("the companion witness is only known at lambda = 1/2")
    s = 1 / math.sqrt(2)
    x = np.array([m * s, -m * s])
    box = (np.array([-m]), np.array([m]))
    if tag in _INTEGRAL:
        return problem.quadrature_document(
            REAL, {"rule": "gauss_legendre", "interval": [-1.0, 1.0], "node_count": 2,
                   "density": 1.0},
            {"legendre": 1}, {"x": x, "y": x}, {"x": box, "y": box})
    extra = {}
    if tag == "lemma21":
        extra = {"lambdas": [0.0], "radius": m}
    if tag in _MIXED:
        extra = {"lam": lam}
    return problem.coordinate_document(REAL, [[s, s]], {"x": x, "y": x},
                                       {"x": box, "y": box}, **extra)


def witness_report(tag: str, m: float = 1.0) -> bounds.BoundReport:
    return problem.evaluate(problem.load_problem(paper_witness(tag, m)), tag)


# -- batched instance generation ----------------------------------------------

def _gauss(rng, shape, is_complex):
    g = rng.standard_normal(shape)
    if is_complex:
        g = (g + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    return g.astype(np.complex128)


def random_members(rng, batch, dim, size, is_complex):
    """Random orthonormal families, shape (batch, size, dim)."""
    q, _ = np.linalg.qr(_gauss(rng, (batch, dim, size), is_complex))
    return np.swapaxes(q, -1, -2).copy()


def random_boxes(rng, batch, size, is_complex):
    lower = _gauss(rng, (batch, size), is_complex)
    upper = lower + _gauss(rng, (batch, size), is_complex) * rng.uniform(0.1, 3.0, (batch, 1))
    return lower, upper


def _in_box_ball(rng, members, lower, upper, is_complex, boundary):
    centre = combine((lower + upper) / 2, members)
    radius = 0.5 * np.sqrt(sq_norm(upper - lower))
    return ball_points(rng, centre, radius, is_complex, boundary)


def draw_instances(rng, tag: str, batch: int, dim: int, size: int, mode: str = REAL,
                   lam: float = 0.5, boundary_fraction: float = BOUNDARY_FRACTION,
                   space: quadrature.QuadratureSpace = None, members=None) -> dict:
    """Random instances satisfying the hypothesis of `tag`, as arrays.

    The dict holds ``members`` and whatever of ``x, y, lower, upper,
    lower_y, upper_y, lambdas, radius`` the theorem needs. Every vector
    hypothesis is met by construction: points are drawn uniformly from the
    ball form, a `boundary_fraction` of them on the sphere itself.
    """
    c = mode == COMPLEX
    if members is None:
        members = random_members(rng, batch, dim, size, c)
    else:
        members = np.broadcast_to(members, (batch,) + np.shape(members)[-2:])
    on_sphere = lambda: rng.random(batch) < boundary_fraction  # noqa: E731
    out = {"members": members}
    if tag == "lemma21":
        lambdas = _gauss(rng, (batch, size), c)
        radius = rng.uniform(0.1, 3.0, batch)
        out["x"] = ball_points(rng, combine(lambdas, members), radius, c, on_sphere())
        out.update(lambdas=lambdas, radius=radius)
        return out
    lower, upper = random_boxes(rng, batch, size, c)
    out.update(lower=lower, upper=upper)
    if tag in ("bessel_b1", "bessel_b2", "compare", "integral_bessel"):
        out["x"] = _in_box_ball(rng, members, lower, upper, c, on_sphere())
    elif tag in ("gruess_v1", "gruess_v2", "integral_gruess"):
        lower_y, upper_y = random_boxes(rng, batch, size, c)
        out["x"] = _in_box_ball(rng, members, lower, upper, c, on_sphere())
        out["y"] = _in_box_ball(rng, members, lower_y, upper_y, c, on_sphere())
        out.update(lower_y=lower_y, upper_y=upper_y)
    elif tag == "companion":
        z = _in_box_ball(rng, members, lower, upper, c, on_sphere())
        spread = np.sqrt(sq_norm(upper - lower))[:, None]
        y = _gauss(rng, (batch, members.shape[-1]), c) * spread
        out["x"] = (z - (1 - lam) * y) / lam
        out["y"] = y
    elif tag == "companion_abs":
        zp = _in_box_ball(rng, members, lower, upper, c, on_sphere())
        zm = _in_box_ball(rng, members, lower, upper, c, on_sphere())
        out["x"] = (zp + zm) / (2 * lam)
        out["y"] = (zp - zm) / (2 * (1 - lam))
    else:
        raise UnsupportedTagError(f"unknown theorem tag {tag!r}")
    return out


def chain_terms(tag: str, inst: dict, lam: float = 0.5):
    """(left, refined, outer) arrays for a batch from :func:`draw_instances`."""
    e, x = inst["members"], inst["x"]
    if tag == "lemma21":
        return bounds.lemma21_terms(x, e, inst["lambdas"], inst["radius"])[:3]
    if tag in ("bessel_b2", "integral_bessel"):
        return bounds.bessel_b2_terms(x, e, inst["lower"], inst["upper"])
    if tag == "bessel_b1":
        return bounds.bessel_b1_terms(x, e, inst["lower"], inst["upper"])
    if tag == "compare":
        left, r1, outer = bounds.bessel_b1_terms(x, e, inst["lower"], inst["upper"])
        _, r2, _ = bounds.bessel_b2_terms(x, e, inst["lower"], inst["upper"])
        return left, np.minimum(r1, r2), outer
    y = inst["y"]
    if tag == "gruess_v1":
        return bounds.gruess_v1_terms(x, y, e, inst["lower"], inst["upper"],
                                      inst["lower_y"], inst["upper_y"])
    if tag in ("gruess_v2", "integral_gruess"):
        return bounds.gruess_v2_terms(x, y, e, inst["lower"], inst["upper"],
                                      inst["lower_y"], inst["upper_y"])
    if tag == "companion":
        return bounds.companion_terms(x, y, e, inst["lower"], inst["upper"], lam)
    if tag == "companion_abs":
        return bounds.companion_abs_terms(x, y, e, inst["lower"], inst["upper"], lam)
    raise UnsupportedTagError(f"unknown theorem tag {tag!r}")


def hypotheses_hold(tag: str, inst: dict, lam: float = 0.5, tolerance: float = 1e-9):
    """Boolean mask: which instances of the batch pass the hypothesis check."""
    e, x = inst["members"], inst["x"]
    if tag == "lemma21":
        dist2 = sq_norm(x - combine(inst["lambdas"], e))
        r2 = inst["radius"] ** 2
        return r2 - dist2 >= -tolerance * np.maximum(1.0, r2)

    def ok(v, lo, hi):
        re_value, _, rhs = re_form_terms(v, e, lo, hi)
        return re_form_satisfied(re_value, rhs, tolerance)

    lo, hi = inst["lower"], inst["upper"]
    if tag in ("gruess_v1", "gruess_v2", "integral_gruess"):
        return ok(x, lo, hi) & ok(inst["y"], inst["lower_y"], inst["upper_y"])
    if tag == "companion":
        return ok(lam * x + (1 - lam) * inst["y"], lo, hi)
    if tag == "companion_abs":
        y = inst["y"]
        return ok(lam * x + (1 - lam) * y, lo, hi) & ok(lam * x - (1 - lam) * y, lo, hi)
    return ok(x, lo, hi)


# -- probing -------------------------------------------------------------------

def _integral_setup(dim, size, mode):
    space = quadrature.gauss_legendre(dim, mode=mode)
    _, family = quadrature.build_family("legendre", size, space)
    return space, family.members


def _witness_document(tag, inst, i, mode, lam, dim, size):
    pick = {k: v[i] for k, v in inst.items() if k != "radius"}
    extra = {}
    if tag == "lemma21":
        extra = {"lambdas": pick["lambdas"], "radius": float(inst["radius"][i])}
    if tag in _MIXED:
        extra = {"lam": lam}
    boxes = {"x": (pick["lower"], pick["upper"])} if "lower" in pick else {}
    if "lower_y" in pick:
        boxes["y"] = (pick["lower_y"], pick["upper_y"])
    vecs = {k: pick[k] for k in ("x", "y") if k in pick}
    if tag in _INTEGRAL:
        space, _ = _integral_setup(dim, size, mode)
        funcs = {k: v / space.embedding_scale for k, v in vecs.items()}
        return problem.quadrature_document(
            mode, {"rule": "gauss_legendre", "interval": [-1.0, 1.0], "node_count": dim,
                   "density": 1.0},
            {"legendre": size}, funcs, boxes, **extra)
    return problem.coordinate_document(mode, pick["members"], vecs, boxes, **extra)


def probe(tag: str, dim: int, family_size: int, probes: int, seed: int = 0,
          lam: float = None, mode: str = REAL,
          boundary_fraction: float = BOUNDARY_FRACTION) -> SharpnessResult:
    """Search for the largest ``left / outer`` ratio over random feasible inputs.

    With ``dim == 2`` and ``family_size == 1`` the extremal witness (m = 1) is
    evaluated as the first probe whenever one exists for `tag`, so a ratio of
    1 is always reachable there. Results depend only on the arguments.
    """
    if tag not in PROBE_TAGS:
        raise UnsupportedTagError(f"unknown theorem tag {tag!r}")
    if probes < 1:
        raise DomainError("probes must be at least 1")
    if not 1 <= family_size <= dim:
        raise ShapeError("need 1 <= family_size <= dim")
    if mode not in (REAL, COMPLEX):
        raise DomainError(f"unknown mode {mode!r}")
    if tag in _MIXED:
        lam = 0.5 if lam is None else lam
        if not 0 < lam < 1:
            raise DomainError("lambda must lie in (0, 1)")
    else:
        lam = None

    best, witness, violations, remaining = -math.inf, None, 0, probes
    if dim == 2 and family_size == 1 and (tag not in _MIXED or lam == 0.5):
        report = witness_report(tag)
        best, witness = report.ratio, paper_witness(tag)
        remaining -= 1

    fixed = None
    if tag in _INTEGRAL:
        _, fixed = _integral_setup(dim, family_size, mode)

    chunk = 0
    while remaining > 0:
        n = min(CHUNK, remaining)
        rng = np.random.default_rng([seed, chunk])
        inst = draw_instances(rng, tag, n, dim, family_size, mode, lam if lam else 0.5,
                              boundary_fraction, members=fixed)
        left, _, outer = chain_terms(tag, inst, lam if lam else 0.5)
        feasible = hypotheses_hold(tag, inst, lam if lam else 0.5) & (outer > 1e-300)
        ratio = np.where(feasible, left / np.where(outer > 1e-300, outer, 1.0), -np.inf)
        violations += int(np.sum(ratio > 1 + SOUNDNESS_TOLERANCE))
        i = int(np.argmax(ratio))
        if ratio[i] > best:
            best = float(ratio[i])
            witness = _witness_document(tag, inst, i, mode, lam, dim, family_size)
        remaining -= n
        chunk += 1
    return SharpnessResult(tag, max(best, 0.0), witness, probes, lam, seed, dim, family_size,
                           mode, violations)
