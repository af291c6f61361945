"""Weighted L^2 spaces realized through a quadrature rule.

A :class:`QuadratureSpace` replaces ``int rho(s) f(s) conj(g(s)) dmu(s)`` by
``sum_k w_k rho_k f(s_k) conj(g(s_k))``. The map
``f -> (sqrt(w_k rho_k) f(s_k))_k`` is then an isometry onto coordinate
space, so every bound of :mod:`orthobound.bounds` applies to sampled
functions unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bounds import BoundReport, bessel_counterpart_b2, gruess_v2
from .conditions import DEFAULT_TOLERANCE, BoxBounds, ConditionReport, check_re_form
from .errors import DependenceError, ModeError, ResolutionError, ShapeError
from .space import (COMPLEX, REAL, OrthonormalFamily, Vector, as_complex_array, gram_schmidt,
                    inner)

FAMILY_TOLERANCE = 1e-8
POINTWISE_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class QuadratureSpace:
    """Nodes, positive weights and sampled density on an interval [a, b]."""

    nodes: np.ndarray
    weights: np.ndarray
    density: np.ndarray
    mode: str = REAL
    interval: tuple = None

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        density = np.broadcast_to(np.array(self.density, dtype=float), nodes.shape).copy()
        if nodes.ndim != 1 or nodes.size == 0 or weights.shape != nodes.shape:
            raise ShapeError("nodes and weights must be nonempty and of equal length")
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))
                and np.all(np.isfinite(density))):
            raise ValueError("nodes, weights and density must be finite")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if np.any(density < 0):
            raise ValueError("density must be nonnegative")
        if not np.sum(weights * density) > 0:
            raise ValueError("the weighted measure has zero total mass")
        if self.mode not in (REAL, COMPLEX):
            raise ModeError(f"unknown mode {self.mode!r}")
        interval = (float(nodes[0]), float(nodes[-1])) if self.interval is None \
            else tuple(float(v) for v in self.interval)
        if not interval[0] <= nodes[0] or not nodes[-1] <= interval[1]:
            raise ValueError(f"nodes leave the interval {interval}")
        for arr in (nodes, weights, density):
            arr.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "density", density)
        object.__setattr__(self, "interval", interval)
        scale = np.sqrt(weights * density)
        scale.setflags(write=False)
        object.__setattr__(self, "_scale", scale)

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def embedding_scale(self) -> np.ndarray:
        """sqrt(w_k rho_k), the per-node factor of the isometry."""
        return self._scale

    @property
    def support(self) -> np.ndarray:
        """Mask of nodes carrying positive weighted mass."""
        return self._scale > 0

    def sample(self, func: Callable) -> "FunctionSample":
        return FunctionSample(np.asarray(func(self.nodes)), self)

    def same_as(self, other: "QuadratureSpace") -> bool:
        return self is other or (
            self.mode == other.mode
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.density, other.density))


def trapezoid(a: float, b: float, n: int, density=1.0, mode: str = REAL,
              periodic: bool = True) -> QuadratureSpace:
    """Composite trapezoid rule with n nodes.

    The periodic variant drops the right endpoint and gives every node the
    weight (b - a)/n, which integrates trigonometric polynomials of degree
    below n exactly.
    """
    if n < 2:
        raise ResolutionError("trapezoid rule needs at least 2 nodes")
    if periodic:
        nodes = a + (b - a) * np.arange(n) / n
        weights = np.full(n, (b - a) / n)
    else:
        nodes = np.linspace(a, b, n)
        weights = np.full(n, (b - a) / (n - 1))
        weights[[0, -1]] /= 2
    return QuadratureSpace(nodes, weights, _density(density, nodes), mode, (a, b))


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0, density=1.0,
                   mode: str = REAL) -> QuadratureSpace:
    """n-point Gauss-Legendre rule mapped to [a, b]."""
    if n < 1:
        raise ResolutionError("Gauss-Legendre rule needs at least 1 node")
    t, w = np.polynomial.legendre.leggauss(n)
    nodes = (b - a) / 2 * t + (a + b) / 2
    return QuadratureSpace(nodes, w * (b - a) / 2, _density(density, nodes), mode, (a, b))


def _density(density, nodes):
    if callable(density):
        return np.asarray(density(nodes), dtype=float)
    return np.broadcast_to(np.asarray(density, dtype=float), nodes.shape)


@dataclass(frozen=True, eq=False)
class FunctionSample:
    """Values of a function at the nodes of a space."""

    values: np.ndarray
    space: QuadratureSpace

    def __post_init__(self):
        vals = as_complex_array(self.values, self.space.mode, "function values")
        if vals.shape != (self.space.size,):
            raise ShapeError(f"expected {self.space.size} values, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def _same_space(f: FunctionSample, g: FunctionSample) -> None:
    if not f.space.same_as(g.space):
        raise ShapeError("functions are sampled on different quadrature spaces")


def embed(f: FunctionSample) -> Vector:
    """Coordinates ``sqrt(w_k rho_k) f(s_k)``."""
    return Vector(f.space.embedding_scale * f.values, f.space.mode)


def unembed(v, space: QuadratureSpace) -> FunctionSample:
    """Inverse of :func:`embed`; needs positive density at every node."""
    coords = v.coords if isinstance(v, Vector) else np.asarray(v)
    if not np.all(space.support):
        raise ValueError("cannot invert the embedding where the density vanishes")
    return FunctionSample(coords / space.embedding_scale, space)


def weighted_inner(f: FunctionSample, g: FunctionSample) -> complex:
    """Quadrature value of ``int rho f conj(g) dmu``."""
    _same_space(f, g)
    return inner(embed(f), embed(g))


def embed_family(samples: Sequence[FunctionSample],
                 tolerance: float = FAMILY_TOLERANCE) -> OrthonormalFamily:
    samples = list(samples)
    if not samples:
        raise ShapeError("empty function family")
    for s in samples[1:]:
        _same_space(samples[0], s)
    return OrthonormalFamily.from_vectors([embed(s) for s in samples],
                                          gram_tolerance=tolerance)


def _fourier_functions(count, s):
    funcs = [np.full_like(s, 1 / np.sqrt(2 * np.pi))]
    k = 1
    while len(funcs) < count:
        funcs.append(np.cos(k * s) / np.sqrt(np.pi))
        if len(funcs) < count:
            funcs.append(np.sin(k * s) / np.sqrt(np.pi))
        k += 1
    return funcs


def _legendre_functions(count, s):
    basis = np.polynomial.legendre.Legendre.basis
    return [np.sqrt((2 * n + 1) / 2) * basis(n)(s) for n in range(count)]


def build_family(kind: str, count: int, space: QuadratureSpace, functions=None,
                 tolerance: float = FAMILY_TOLERANCE):
    """Sampled orthonormal functions and their embedded family.

    ``fourier`` gives 1/sqrt(2 pi), cos(s)/sqrt(pi), sin(s)/sqrt(pi),
    cos(2s)/sqrt(pi), ... on [0, 2 pi]; ``legendre`` gives the normalized
    Legendre polynomials on [-1, 1]. Both closed forms assume unit density;
    for any other density the same functions are orthonormalized in the
    weighted inner product, which is also what ``custom`` does with the
    sample arrays passed in `functions`.

    Returns
    -------
    (list of FunctionSample, OrthonormalFamily)
    """
    count = int(count)
    if count < 1:
        raise ValueError("count must be positive")
    if count > space.size:
        raise ResolutionError(f"{count} functions need at least {count} nodes, "
                              f"the rule has {space.size}")
    s = space.nodes
    if kind == "fourier":
        a, b = space.interval
        if not (np.isclose(a, 0.0) and np.isclose(b, 2 * np.pi)):
            raise ValueError("the fourier family is defined on [0, 2*pi]")
        raw = _fourier_functions(count, s)
    elif kind == "legendre":
        a, b = space.interval
        if not (np.isclose(a, -1.0) and np.isclose(b, 1.0)):
            raise ValueError("the legendre family is defined on [-1, 1]")
        raw = _legendre_functions(count, s)
    elif kind == "custom":
        if functions is None:
            raise ValueError("custom families need sampled functions")
        raw = [f.values if isinstance(f, FunctionSample) else np.asarray(f) for f in functions]
    else:
        raise ValueError(f"unknown family kind {kind!r}")

    if kind == "custom" or not np.all(space.density == 1.0):
        samples = _weighted_gram_schmidt(raw, space, count, tolerance)
    else:
        samples = [FunctionSample(v, space) for v in raw]
    return samples, embed_family(samples, tolerance)


def _weighted_gram_schmidt(raw, space, count, tolerance):
    if not np.all(space.support):
        raise ValueError("orthonormalization needs positive density at every node")
    vecs = [embed(FunctionSample(v, space)) for v in raw]
    try:
        fam = gram_schmidt(vecs, tolerance)
    except DependenceError:
        raise DependenceError("the supplied functions are not orthonormalizable")
    if fam.dropped:
        raise DependenceError(f"functions {list(fam.dropped)} depend on earlier ones")
    fam_vectors = fam.vectors[:count]
    return [unembed(v, space) for v in fam_vectors]


# -- pointwise sufficient condition ------------------------------------------

@dataclass(frozen=True)
class PointwiseCheck:
    holds: bool
    violating_nodes: tuple
    condition: ConditionReport


def pointwise_box_check(f: FunctionSample, family_samples: Sequence[FunctionSample],
                        box: BoxBounds, tolerance: float = DEFAULT_TOLERANCE) -> PointwiseCheck:
    """Check ``sum m_i f_i(s) <= f(s) <= sum M_i f_i(s)`` at every node with
    positive weighted mass (real spaces only).

    The embedded bilinear-form condition is evaluated as well; it is implied
    by the pointwise one, and an inconsistency raises ``AssertionError``.
    """
    space = f.space
    if space.mode != REAL:
        raise ModeError("the pointwise envelope condition is stated for real spaces only")
    if not box.is_real:
        raise ModeError("pointwise bounds must be real")
    family_samples = list(family_samples)
    for g in family_samples:
        _same_space(f, g)
    if len(family_samples) != len(box):
        raise ShapeError("box length must equal the number of family functions")
    phi = np.stack([g.values.real for g in family_samples])
    lower_env = box.lower.real @ phi
    upper_env = box.upper.real @ phi
    vals = f.values.real
    bad = (vals < lower_env - POINTWISE_SLACK) | (vals > upper_env + POINTWISE_SLACK)
    bad &= space.support
    holds = not bool(np.any(bad))
    family = embed_family(family_samples)
    cond = check_re_form(embed(f), family, box, tolerance)
    if holds and not cond.satisfied:
        raise AssertionError("pointwise envelope holds but the embedded condition fails")
    return PointwiseCheck(holds, tuple(int(k) for k in np.flatnonzero(bad)), cond)


# -- bounds through the embedding --------------------------------------------

def _embedded(functions, family_samples, space):
    for g in list(functions) + list(family_samples):
        if not g.space.same_as(space):
            raise ShapeError("every function must be sampled on the given space")
    return [embed(g) for g in functions], embed_family(family_samples)


def integral_bessel(f: FunctionSample, family_samples: Sequence[FunctionSample],
                    box: BoxBounds, space: QuadratureSpace,
                    tolerance: float = DEFAULT_TOLERANCE, force: bool = False) -> BoundReport:
    """Bessel counterpart for ``int rho |f|^2 - sum |int rho f conj(f_i)|^2``."""
    (x,), family = _embedded([f], family_samples, space)
    r = bessel_counterpart_b2(x, family, box, tolerance, force)
    return BoundReport("integral_bessel", r.left_value, r.refined_bound, r.outer_bound,
                       r.condition_reports, r.details)


def integral_gruess(f: FunctionSample, g: FunctionSample,
                    family_samples: Sequence[FunctionSample], box_f: BoxBounds,
                    box_g: BoxBounds, space: QuadratureSpace,
                    tolerance: float = DEFAULT_TOLERANCE, force: bool = False) -> BoundReport:
    """Grüss-type chain for ``|int rho f conj(g) - sum (f, f_i)(f_i, g)|``."""
    (x, y), family = _embedded([f, g], family_samples, space)
    r = gruess_v2(x, y, family, box_f, box_g, tolerance, force)
    return BoundReport("integral_gruess", r.left_value, r.refined_bound, r.outer_bound,
                       r.condition_reports, r.details)
