"""Bessel-counterpart and Grüss-type bounds for orthonormal families in
finite inner product spaces, with quadrature-based weighted L^2 analogues
and best-constant probing."""

__version__ = "0.1.0"

from .bounds import (BoundReport, Comparison, aczel_check, bessel_counterpart_b1,
                     bessel_counterpart_b2, bessel_difference, compare_b1_b2, companion_abs,
                     companion_bound, gruess_v1, gruess_v2, lemma21_bound)
from .conditions import (BoxBounds, ConditionReport, check_mixture, check_norm_form, check_pair,
                         check_re_form)
from .errors import (DependenceError, DomainError, FamilyError, HypothesisError, ModeError,
                     OrthoboundError, ProblemError, ResolutionError, ShapeError,
                     UnsupportedTagError)
from .quadrature import (FunctionSample, QuadratureSpace, build_family, embed, gauss_legendre,
                         integral_bessel, integral_gruess, pointwise_box_check, trapezoid,
                         weighted_inner)
from .sharpness import SharpnessResult, paper_witness, probe
from .space import (OrthonormalFamily, Vector, canonical_family, fourier_coefficients,
                    gram_schmidt, inner, norm)

__all__ = [
    "BoundReport", "Comparison", "aczel_check", "bessel_counterpart_b1", "bessel_counterpart_b2",
    "bessel_difference", "compare_b1_b2", "companion_abs", "companion_bound", "gruess_v1",
    "gruess_v2", "lemma21_bound",
    "BoxBounds", "ConditionReport", "check_mixture", "check_norm_form", "check_pair",
    "check_re_form",
    "DependenceError", "DomainError", "FamilyError", "HypothesisError", "ModeError",
    "OrthoboundError", "ProblemError", "ResolutionError", "ShapeError", "UnsupportedTagError",
    "FunctionSample", "QuadratureSpace", "build_family", "embed", "gauss_legendre",
    "integral_bessel", "integral_gruess", "pointwise_box_check", "trapezoid", "weighted_inner",
    "SharpnessResult", "paper_witness", "probe",
    "OrthonormalFamily", "Vector", "canonical_family", "fourier_coefficients", "gram_schmidt",
    "inner", "norm",
]
