"""Bessel-counterpart, Grüss-type and companion inequality chains.

Every public bound returns a :class:`BoundReport` carrying the three terms of
a chain ``left <= refined <= outer``. The ``*_terms`` functions hold the
formulas themselves; they work on plain arrays with optional leading batch
axes and are shared with the sharpness probe.

Notation used below: ``c_i = <x, e_i>``, ``d_i = <y, e_i>``,
``W_x = sum |upper_i - lower_i|^2`` and ``mid_i = (lower_i + upper_i)/2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .conditions import (DEFAULT_TOLERANCE, BoxBounds, ConditionReport, check_box,
                         check_lambda, check_mixture, check_re_form, coefficients,
                         combine, norm_form_satisfied, re_form_terms, sq_norm)
from .errors import DomainError, HypothesisError, ShapeError
from .space import OrthonormalFamily, Vector, as_complex_array, check_family

CHAIN_TOLERANCE = 1e-9

TAGS = (
    "lemma21", "bessel_b1", "bessel_b2", "compare", "gruess_v1", "gruess_v2",
    "companion", "companion_abs", "integral_bessel", "integral_gruess",
)


@dataclass(frozen=True)
class BoundReport:
    """One evaluated inequality chain ``left_value <= refined_bound <= outer_bound``."""

    theorem_tag: str
    left_value: float
    refined_bound: float
    outer_bound: float
    condition_reports: tuple = ()
    details: dict = field(default_factory=dict)

    @property
    def scale(self) -> float:
        return max(1.0, self.outer_bound)

    @property
    def hypotheses_satisfied(self) -> bool:
        return all(r.satisfied for r in self.condition_reports)

    @property
    def chain_ok(self) -> bool:
        tol = CHAIN_TOLERANCE * self.scale
        return (self.left_value <= self.refined_bound + tol
                and self.refined_bound <= self.outer_bound + tol)

    @property
    def ratio(self) -> float:
        """left_value / outer_bound (0 when the outer bound vanishes)."""
        return self.left_value / self.outer_bound if self.outer_bound > 1e-300 else 0.0

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem_tag,
            "left_value": self.left_value,
            "refined_bound": self.refined_bound,
            "outer_bound": self.outer_bound,
            "chain_ok": self.chain_ok,
            "hypotheses_satisfied": self.hypotheses_satisfied,
            "conditions": [r.as_dict() for r in self.condition_reports],
            "details": dict(self.details),
        }


# -- formulas ----------------------------------------------------------------

def bessel_terms(x, members):
    """|x|^2 - sum |<x, e_i>|^2"""
    c = coefficients(x, members)
    return sq_norm(x) - sq_norm(c)


def lemma21_terms(x, members, lambdas, radius):
    """Chain ``bessel <= r^2 - sum |lambda_i - c_i|^2 <= r^2`` and the identity residual.

    Returns (left, refined, outer, identity_residual).
    """
    c = coefficients(x, members)
    left = sq_norm(x) - sq_norm(c)
    gap = sq_norm(lambdas - c)
    r2 = np.asarray(radius, dtype=float) ** 2
    residual = np.abs(sq_norm(x - combine(lambdas, members)) - gap - left)
    return left, r2 - gap, r2 * np.ones_like(left), residual


def bessel_b1_terms(x, members, lower, upper):
    """``W/4 - Re<A - x, x - a>`` as the middle term."""
    left = bessel_terms(x, members)
    re_value, _, rhs = re_form_terms(x, members, lower, upper)
    outer = rhs ** 2
    return left, outer - re_value, outer


def bessel_b2_terms(x, members, lower, upper):
    """``W/4 - sum |mid_i - c_i|^2`` as the middle term."""
    c = coefficients(x, members)
    left = sq_norm(x) - sq_norm(c)
    outer = sq_norm(upper - lower) / 4
    return left, outer - sq_norm((lower + upper) / 2 - c), outer


def _gruess_left(x, y, members):
    c = coefficients(x, members)
    d = coefficients(y, members)
    z = np.sum(x * y.conj(), axis=-1) - np.sum(c * d.conj(), axis=-1)
    return z, c, d


def gruess_v1_terms(x, y, members, lower_x, upper_x, lower_y, upper_y):
    """Middle term ``W_x^(1/2) W_y^(1/2)/4 - sqrt(Re-form_x) sqrt(Re-form_y)``.

    Bilinear-form values below zero (hypothesis failure or rounding) are
    clamped to zero before the square root.
    """
    z, _, _ = _gruess_left(x, y, members)
    re_x, _, rhs_x = re_form_terms(x, members, lower_x, upper_x)
    re_y, _, rhs_y = re_form_terms(y, members, lower_y, upper_y)
    outer = rhs_x * rhs_y
    refined = outer - np.sqrt(np.maximum(re_x, 0.0)) * np.sqrt(np.maximum(re_y, 0.0))
    return np.abs(z), refined, outer


def gruess_v2_terms(x, y, members, lower_x, upper_x, lower_y, upper_y):
    """Middle term ``W_x^(1/2) W_y^(1/2)/4 - sum |mid_x,i - c_i| |mid_y,i - d_i|``."""
    z, c, d = _gruess_left(x, y, members)
    outer = 0.25 * np.sqrt(sq_norm(upper_x - lower_x)) * np.sqrt(sq_norm(upper_y - lower_y))
    cross = np.sum(np.abs((lower_x + upper_x) / 2 - c) * np.abs((lower_y + upper_y) / 2 - d),
                   axis=-1)
    return np.abs(z), outer - cross, outer


def companion_terms(x, y, members, lower, upper, lam):
    """Signed chain for ``Re[<x,y> - sum c_i conj(d_i)]`` under a hypothesis on
    ``lam*x + (1-lam)*y``."""
    z, _, _ = _gruess_left(x, y, members)
    k = 1.0 / (lam * (1.0 - lam))
    mix = lam * x + (1.0 - lam) * y
    cm = coefficients(mix, members)
    width = sq_norm(upper - lower)
    outer = k * width / 16
    refined = outer - k * sq_norm((lower + upper) / 2 - cm) / 4
    return z.real, refined, outer


def companion_abs_terms(x, y, members, lower, upper, lam):
    """Two-sided form: ``|Re[...]| <= W / (16 lam (1-lam))``."""
    z, _, _ = _gruess_left(x, y, members)
    outer = sq_norm(upper - lower) / (16 * lam * (1.0 - lam))
    return np.abs(z.real), outer, outer


# -- single-instance API -----------------------------------------------------

def _require(tag: str, reports: Sequence[ConditionReport], names: Sequence[str],
             force: bool) -> None:
    failed = [n for n, r in zip(names, reports) if not r.satisfied]
    if failed and not force:
        excess = max(r.excess for r in reports)
        raise HypothesisError(
            f"{tag}: hypothesis fails for {', '.join(failed)}", reports, failed, excess)


def _pair_checks(x, y, family, box_x, box_y):
    check_family(x, family)
    check_family(y, family)
    check_box(box_x, family)
    check_box(box_y, family)


def bessel_difference(x: Vector, family: OrthonormalFamily) -> float:
    """``|x|^2 - sum_i |<x, e_i>|^2``, the gap in Bessel's inequality."""
    check_family(x, family)
    return float(bessel_terms(x.coords, family.members))


def lemma21_bound(x: Vector, family: OrthonormalFamily, lambdas, r: float,
                  tolerance: float = DEFAULT_TOLERANCE, force: bool = False) -> BoundReport:
    """Bound the Bessel difference given ``|x - sum lambda_i e_i| <= r``.

    The report's ``details['identity_residual']`` measures the exact identity
    ``|x - sum lambda_i e_i|^2 - sum |lambda_i - c_i|^2 = |x|^2 - sum |c_i|^2``.
    """
    check_family(x, family)
    lam = as_complex_array(lambdas, family.mode, "lambdas")
    if lam.shape != (family.size,):
        raise ShapeError(f"expected {family.size} lambdas, got {lam.shape}")
    r = float(r)
    if not r > 0:
        raise DomainError("radius r must be positive")
    left, refined, outer, residual = lemma21_terms(x.coords, family.members, lam, r)
    lhs = float(np.sqrt(sq_norm(x.coords - combine(lam, family.members))))
    cond = ConditionReport(r * r - lhs * lhs, lhs, r,
                           bool(norm_form_satisfied(lhs, r, tolerance)), float(tolerance), "norm")
    _require("lemma21", [cond], ["x"], force)
    return BoundReport("lemma21", float(left), float(refined), float(outer), (cond,),
                       {"identity_residual": float(residual)})


def bessel_counterpart_b1(x: Vector, family: OrthonormalFamily, box: BoxBounds,
                          tolerance: float = DEFAULT_TOLERANCE,
                          force: bool = False) -> BoundReport:
    """Bessel counterpart with middle term ``W/4 - Re<A - x, x - a>``."""
    cond = check_re_form(x, family, box, tolerance)
    _require("bessel_b1", [cond], ["x"], force)
    left, refined, outer = bessel_b1_terms(x.coords, family.members, box.lower, box.upper)
    return BoundReport("bessel_b1", float(left), float(refined), float(outer), (cond,))


def bessel_counterpart_b2(x: Vector, family: OrthonormalFamily, box: BoxBounds,
                          tolerance: float = DEFAULT_TOLERANCE,
                          force: bool = False) -> BoundReport:
    """Bessel counterpart with middle term ``W/4 - sum |mid_i - <x, e_i>|^2``."""
    cond = check_re_form(x, family, box, tolerance)
    _require("bessel_b2", [cond], ["x"], force)
    left, refined, outer = bessel_b2_terms(x.coords, family.members, box.lower, box.upper)
    return BoundReport("bessel_b2", float(left), float(refined), float(outer), (cond,))


@dataclass(frozen=True)
class Comparison:
    b1: float
    b2: float
    tighter: str
    report: BoundReport


def compare_b1_b2(x: Vector, family: OrthonormalFamily, box: BoxBounds,
                  tolerance: float = DEFAULT_TOLERANCE, force: bool = False) -> Comparison:
    """Evaluate both Bessel counterparts and say which is smaller.

    Neither dominates in general. ``tighter`` is ``"tie"`` when they differ
    by at most ``1e-9 * max(1, W/4)``. The attached report uses the smaller
    one as its middle term.
    """
    r1 = bessel_counterpart_b1(x, family, box, tolerance, force)
    r2 = bessel_counterpart_b2(x, family, box, tolerance, force)
    b1, b2 = r1.refined_bound, r2.refined_bound
    if abs(b1 - b2) <= CHAIN_TOLERANCE * r1.scale:
        tighter = "tie"
    else:
        tighter = "B1" if b1 < b2 else "B2"
    report = BoundReport("compare", r1.left_value, min(b1, b2), r1.outer_bound,
                         r1.condition_reports, {"b1": b1, "b2": b2, "tighter": tighter})
    return Comparison(b1, b2, tighter, report)


def gruess_v1(x: Vector, y: Vector, family: OrthonormalFamily, box_x: BoxBounds,
              box_y: BoxBounds, tolerance: float = DEFAULT_TOLERANCE,
              force: bool = False) -> BoundReport:
    """Grüss refinement whose middle term subtracts the product of square roots
    of the two bilinear-form values."""
    _pair_checks(x, y, family, box_x, box_y)
    reports = (check_re_form(x, family, box_x, tolerance),
               check_re_form(y, family, box_y, tolerance))
    _require("gruess_v1", reports, ["x", "y"], force)
    left, refined, outer = gruess_v1_terms(x.coords, y.coords, family.members, box_x.lower,
                                           box_x.upper, box_y.lower, box_y.upper)
    return BoundReport("gruess_v1", float(left), float(refined), float(outer), reports)


def gruess_v2(x: Vector, y: Vector, family: OrthonormalFamily, box_x: BoxBounds,
              box_y: BoxBounds, tolerance: float = DEFAULT_TOLERANCE,
              force: bool = False) -> BoundReport:
    """Grüss refinement whose middle term subtracts
    ``sum |mid_x,i - <x,e_i>| |mid_y,i - <y,e_i>|``."""
    _pair_checks(x, y, family, box_x, box_y)
    reports = (check_re_form(x, family, box_x, tolerance),
               check_re_form(y, family, box_y, tolerance))
    _require("gruess_v2", reports, ["x", "y"], force)
    left, refined, outer = gruess_v2_terms(x.coords, y.coords, family.members, box_x.lower,
                                           box_x.upper, box_y.lower, box_y.upper)
    return BoundReport("gruess_v2", float(left), float(refined), float(outer), reports)


@dataclass(frozen=True)
class AczelResult:
    lhs: float
    rhs: float
    holds: bool
    equality: bool


def aczel_check(a: float, b: float, a_seq: Sequence[float], b_seq: Sequence[float],
                tolerance: float = 1e-12) -> AczelResult:
    """Check ``(a^2 - sum a_i^2)(b^2 - sum b_i^2) <= (ab - sum a_i b_i)^2``.

    All entries must be positive with ``a^2 >= sum a_i^2`` and
    ``b^2 >= sum b_i^2``. Comparisons use ``tolerance * max(1, (ab)^2)``.
    """
    a_seq = np.asarray(a_seq, dtype=float).ravel()
    b_seq = np.asarray(b_seq, dtype=float).ravel()
    if a_seq.shape != b_seq.shape:
        raise ShapeError("a_seq and b_seq must have equal length")
    if not (a > 0 and b > 0) or np.any(a_seq <= 0) or np.any(b_seq <= 0):
        raise DomainError("Aczél's inequality needs strictly positive entries")
    da = a * a - float(np.sum(a_seq ** 2))
    db = b * b - float(np.sum(b_seq ** 2))
    if da < 0 or db < 0:
        raise DomainError("need a^2 >= sum a_i^2 and b^2 >= sum b_i^2")
    lhs = da * db
    rhs = (a * b - float(np.dot(a_seq, b_seq))) ** 2
    tol = tolerance * max(1.0, (a * b) ** 2)
    return AczelResult(lhs, rhs, lhs <= rhs + tol, abs(lhs - rhs) <= tol)


def companion_bound(x: Vector, y: Vector, family: OrthonormalFamily, box: BoxBounds,
                    lam: float, tolerance: float = DEFAULT_TOLERANCE,
                    force: bool = False) -> BoundReport:
    """Upper bound on ``Re[<x,y> - sum <x,e_i><e_i,y>]`` (signed) from a box
    hypothesis on ``lam*x + (1-lam)*y``."""
    lam = check_lambda(lam)
    _pair_checks(x, y, family, box, box)
    cond = check_mixture(x, y, family, box, lam, 1, tolerance)
    _require("companion", [cond], ["lambda*x + (1-lambda)*y"], force)
    left, refined, outer = companion_terms(x.coords, y.coords, family.members,
                                           box.lower, box.upper, lam)
    return BoundReport("companion", float(left), float(refined), float(outer), (cond,),
                       {"lambda": lam})


def companion_abs(x: Vector, y: Vector, family: OrthonormalFamily, box: BoxBounds,
                  lam: float, tolerance: float = DEFAULT_TOLERANCE,
                  force: bool = False) -> BoundReport:
    """Two-sided bound on ``|Re[<x,y> - sum <x,e_i><e_i,y>]|``; needs the box
    hypothesis on both ``lam*x + (1-lam)*y`` and ``lam*x - (1-lam)*y``."""
    lam = check_lambda(lam)
    _pair_checks(x, y, family, box, box)
    reports = (check_mixture(x, y, family, box, lam, 1, tolerance),
               check_mixture(x, y, family, box, lam, -1, tolerance))
    _require("companion_abs", reports,
             ["lambda*x + (1-lambda)*y", "lambda*x - (1-lambda)*y"], force)
    left, refined, outer = companion_abs_terms(x.coords, y.coords, family.members,
                                               box.lower, box.upper, lam)
    return BoundReport("companion_abs", float(left), float(refined), float(outer), reports,
                       {"lambda": lam})
