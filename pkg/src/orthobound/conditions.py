"""Box hypotheses on a vector relative to an orthonormal family.

For a family {e_i}, scalars lower_i, upper_i and the combinations
``a = sum lower_i e_i``, ``A = sum upper_i e_i`` the hypothesis comes in two
equivalent forms::

    Re<A - x, x - a> >= 0                                   (bilinear form)
    |x - (a + A)/2| <= |A - a| / 2                          (ball form)

and the two are tied by the exact identity
``Re<A - x, x - a> = |A - a|^2/4 - |x - (a + A)/2|^2``.

The array-level helpers (``re_form_terms``) accept leading batch axes so the
same arithmetic serves single instances and vectorized probing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ModeError, ShapeError
from .space import REAL, OrthonormalFamily, Vector, as_complex_array, check_family

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class BoxBounds:
    """Per-index scalar bounds (lower_i, upper_i), i in F.

    A degenerate box (lower == upper everywhere) is representable; it pins the
    vector to the midpoint combination and gives only trivial bounds.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = as_complex_array(self.lower, "complex", "box lower bounds")
        hi = as_complex_array(self.upper, "complex", "box upper bounds")
        if lo.ndim != 1 or lo.shape != hi.shape or lo.size == 0:
            raise ShapeError("lower and upper must be nonempty sequences of equal length")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def __len__(self):
        return self.lower.size

    @property
    def is_real(self) -> bool:
        return not (np.any(self.lower.imag) or np.any(self.upper.imag))

    @property
    def midpoints(self) -> np.ndarray:
        return (self.lower + self.upper) / 2

    @property
    def width_sq(self) -> float:
        """sum_i |upper_i - lower_i|^2"""
        return float(np.sum(np.abs(self.upper - self.lower) ** 2))

    @property
    def is_degenerate(self) -> bool:
        return self.width_sq == 0.0

    def scaled(self, t) -> "BoxBounds":
        return BoxBounds(self.lower * t, self.upper * t)


def check_box(box: BoxBounds, family: OrthonormalFamily) -> None:
    if len(box) != family.size:
        raise ShapeError(f"box has {len(box)} entries but the family has {family.size} members")
    if family.mode == REAL and not box.is_real:
        raise ModeError("complex box bounds given for a real space")


@dataclass(frozen=True)
class ConditionReport:
    """Both forms of one box hypothesis, evaluated independently.

    ``satisfied`` comes from the bilinear form for :func:`check_re_form` and
    from the ball form for :func:`check_norm_form`; outside the ambiguity
    band ``|re_form_value| <= tolerance_used * scale`` the two agree.
    """

    re_form_value: float
    norm_form_lhs: float
    norm_form_rhs: float
    satisfied: bool
    tolerance_used: float
    form: str = "re"

    @property
    def scale(self) -> float:
        return max(1.0, self.norm_form_rhs ** 2)

    @property
    def identity_residual(self) -> float:
        """|re_form_value - (rhs^2 - lhs^2)|, zero up to rounding."""
        return abs(self.re_form_value - (self.norm_form_rhs ** 2 - self.norm_form_lhs ** 2))

    @property
    def ambiguous(self) -> bool:
        return abs(self.re_form_value) <= self.tolerance_used * self.scale

    @property
    def excess(self) -> float:
        """How far the ball form is violated (0 when satisfied)."""
        return max(0.0, self.norm_form_lhs - self.norm_form_rhs)

    def as_dict(self) -> dict:
        return {
            "form": self.form,
            "re_form_value": self.re_form_value,
            "norm_form_lhs": self.norm_form_lhs,
            "norm_form_rhs": self.norm_form_rhs,
            "equivalence_residual": self.identity_residual,
            "satisfied": self.satisfied,
            "ambiguous": self.ambiguous,
            "tolerance_used": self.tolerance_used,
        }


# -- array kernels -----------------------------------------------------------

def combine(coeffs, members):
    """sum_i coeffs[..., i] * members[..., i, :]"""
    return np.einsum("...k,...kn->...n", coeffs, members)


def coefficients(x, members):
    """<x, e_i> for every row e_i of `members`."""
    return np.einsum("...kn,...n->...k", members.conj(), x)


def sq_norm(v):
    return np.sum(v.real ** 2 + v.imag ** 2, axis=-1)


def re_form_terms(x, members, lower, upper):
    """Return (re_form_value, norm_form_lhs, norm_form_rhs) as arrays.

    The bilinear form is evaluated directly, not through the identity, so the
    identity residual is an honest numerical check.
    """
    a = combine(lower, members)
    big_a = combine(upper, members)
    re_value = np.sum(((big_a - x) * (x - a).conj()).real, axis=-1)
    centre = combine((lower + upper) / 2, members)
    lhs = np.sqrt(sq_norm(x - centre))
    rhs = 0.5 * np.sqrt(sq_norm(upper - lower))
    return re_value, lhs, rhs


def re_form_satisfied(re_value, rhs, tolerance=DEFAULT_TOLERANCE):
    return re_value >= -tolerance * np.maximum(1.0, rhs ** 2)


def norm_form_satisfied(lhs, rhs, tolerance=DEFAULT_TOLERANCE):
    return rhs ** 2 - lhs ** 2 >= -tolerance * np.maximum(1.0, rhs ** 2)


# -- single-instance checks --------------------------------------------------

def _validate(x: Vector, family: OrthonormalFamily, box: BoxBounds, tolerance: float) -> None:
    check_family(x, family)
    check_box(box, family)
    if not tolerance >= 0:
        raise DomainError("tolerance must be nonnegative")


def _report(x, family, box, tolerance, form) -> ConditionReport:
    re_value, lhs, rhs = re_form_terms(x.coords, family.members, box.lower, box.upper)
    if form == "re":
        ok = re_form_satisfied(re_value, rhs, tolerance)
    else:
        ok = norm_form_satisfied(lhs, rhs, tolerance)
    return ConditionReport(float(re_value), float(lhs), float(rhs), bool(ok),
                           float(tolerance), form)


def check_re_form(x: Vector, family: OrthonormalFamily, box: BoxBounds,
                  tolerance: float = DEFAULT_TOLERANCE) -> ConditionReport:
    """Evaluate ``Re<sum upper_i e_i - x, x - sum lower_i e_i> >= 0``."""
    _validate(x, family, box, tolerance)
    return _report(x, family, box, tolerance, "re")


def check_norm_form(x: Vector, family: OrthonormalFamily, box: BoxBounds,
                    tolerance: float = DEFAULT_TOLERANCE) -> ConditionReport:
    """Evaluate ``|x - sum (lower_i+upper_i)/2 e_i| <= (sum |upper_i-lower_i|^2)^(1/2) / 2``."""
    _validate(x, family, box, tolerance)
    return _report(x, family, box, tolerance, "norm")


def check_pair(x: Vector, y: Vector, family: OrthonormalFamily, box_x: BoxBounds,
               box_y: BoxBounds, tolerance: float = DEFAULT_TOLERANCE):
    return (check_re_form(x, family, box_x, tolerance),
            check_re_form(y, family, box_y, tolerance))


def check_lambda(lam) -> float:
    lam = float(lam)
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam}")
    return lam


def mixture(x: Vector, y: Vector, lam: float, sign: int = 1) -> Vector:
    """The vector ``lam*x + sign*(1-lam)*y``."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    lam = check_lambda(lam)
    if x.mode != y.mode or x.dimension != y.dimension:
        raise ShapeError("x and y must share dimension and mode")
    return Vector(lam * x.coords + sign * (1.0 - lam) * y.coords, x.mode)


def check_mixture(x: Vector, y: Vector, family: OrthonormalFamily, box: BoxBounds,
                  lam: float, sign: int = 1,
                  tolerance: float = DEFAULT_TOLERANCE) -> ConditionReport:
    """Box hypothesis on ``lam*x + sign*(1-lam)*y``."""
    return check_re_form(mixture(x, y, lam, sign), family, box, tolerance)


# -- feasible sampling -------------------------------------------------------

def ball_points(rng: np.random.Generator, centre, radius, is_complex: bool,
                boundary=False):
    """Uniform points in the balls ``|z - centre| <= radius``.

    `centre` has shape (..., n) and `radius` broadcasts against its batch
    shape. Where `boundary` is true the point is put on the sphere itself.
    Complex K^n is treated as R^(2n).
    """
    centre = np.asarray(centre, dtype=np.complex128)
    shape = centre.shape
    n = shape[-1]
    dim = 2 * n if is_complex else n
    g = rng.standard_normal(shape[:-1] + (dim,))
    g /= np.linalg.norm(g, axis=-1, keepdims=True)
    direction = g[..., :n] + 1j * g[..., n:] if is_complex else g.astype(np.complex128)
    u = rng.random(shape[:-1])
    rho = np.where(boundary, 1.0, u ** (1.0 / dim))
    return centre + (np.asarray(radius) * rho)[..., None] * direction


def sample_feasible(rng: np.random.Generator, family: OrthonormalFamily, box: BoxBounds,
                    boundary: bool = False) -> Vector:
    """Draw x uniformly from the ball form of the box hypothesis."""
    check_box(box, family)
    centre = combine(box.midpoints, family.members)
    radius = 0.5 * np.sqrt(box.width_sq)
    z = ball_points(rng, centre, radius, family.mode != REAL, boundary)
    return Vector(z, family.mode)
