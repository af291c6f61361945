"""Finite coordinate inner product spaces over R or C.

Vectors are stored as complex128 arrays in both modes; a real-mode vector
simply has zero imaginary parts. The inner product is linear in the first
argument and conjugate-linear in the second::

    <x, y> = sum_k x_k * conj(y_k)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DependenceError, FamilyError, ModeError, ShapeError

REAL = "real"
COMPLEX = "complex"
MODES = (REAL, COMPLEX)

GRAM_TOLERANCE = 1e-10


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ModeError(f"mode must be 'real' or 'complex', got {mode!r}")
    return mode


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def as_complex_array(values, mode: str, what: str = "values") -> np.ndarray:
    """Convert `values` to a finite complex128 array, enforcing real mode."""
    arr = np.array(values, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite")
    if mode == REAL and np.any(arr.imag != 0.0):
        raise ModeError(f"{what} has nonzero imaginary parts in a real space")
    return arr


@dataclass(frozen=True, eq=False)
class Vector:
    """An element of K^n.

    Parameters
    ----------
    coords : array_like
        The n >= 1 coordinates.
    mode : {'real', 'complex'}
        Scalar field. Defaults to 'real' when every coordinate is real.
    """

    coords: np.ndarray
    mode: str = None

    def __post_init__(self):
        raw = np.asarray(self.coords)
        mode = self.mode
        if mode is None:
            mode = COMPLEX if np.iscomplexobj(raw) and np.any(raw.imag != 0) else REAL
        _check_mode(mode)
        arr = as_complex_array(raw, mode, "vector coordinates")
        if arr.ndim != 1 or arr.size == 0:
            raise ShapeError("a vector needs a nonempty 1-d coordinate sequence")
        object.__setattr__(self, "coords", _frozen(arr))
        object.__setattr__(self, "mode", mode)

    @property
    def dimension(self) -> int:
        return self.coords.size

    def __len__(self):
        return self.coords.size

    def __repr__(self):
        return f"Vector({self.coords.tolist()!r}, mode={self.mode!r})"

    def __add__(self, other: "Vector") -> "Vector":
        _check_compatible(self, other)
        return Vector(self.coords + other.coords, self.mode)

    def __sub__(self, other: "Vector") -> "Vector":
        _check_compatible(self, other)
        return Vector(self.coords - other.coords, self.mode)

    def __mul__(self, scalar) -> "Vector":
        return Vector(self.coords * scalar, _scaled_mode(self.mode, scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Vector":
        return Vector(-self.coords, self.mode)

    def to_list(self) -> list:
        """Coordinates as plain Python scalars (floats in real mode)."""
        if self.mode == REAL:
            return self.coords.real.tolist()
        return self.coords.tolist()


def _scaled_mode(mode: str, scalar) -> str:
    if mode == REAL and complex(scalar).imag != 0.0:
        raise ModeError("cannot scale a real vector by a non-real scalar")
    return mode


def _check_compatible(x: Vector, y: Vector) -> None:
    if x.mode != y.mode:
        raise ModeError(f"mode mismatch: {x.mode} vs {y.mode}")
    if x.dimension != y.dimension:
        raise ShapeError(f"dimension mismatch: {x.dimension} vs {y.dimension}")


def zeros(n: int, mode: str = REAL) -> Vector:
    return Vector(np.zeros(n, dtype=np.complex128), mode)


def inner(x: Vector, y: Vector) -> complex:
    """Coordinate inner product ``sum_k x_k conj(y_k)``."""
    _check_compatible(x, y)
    return complex(np.vdot(y.coords, x.coords))


def norm(x: Vector) -> float:
    """Euclidean norm ``sqrt(<x, x>)``."""
    return float(np.sqrt(np.vdot(x.coords, x.coords).real))


@dataclass(frozen=True, eq=False)
class OrthonormalFamily:
    """A finite orthonormal family {e_i} in K^n.

    The members are the rows of `members`. Construction checks that every
    entry of the Gram matrix is within `gram_tolerance` of the identity.
    `dropped` lists input positions discarded by :func:`gram_schmidt`.
    """

    members: np.ndarray
    mode: str = REAL
    labels: tuple = None
    gram_tolerance: float = GRAM_TOLERANCE
    dropped: tuple = field(default=())

    def __post_init__(self):
        _check_mode(self.mode)
        arr = as_complex_array(self.members, self.mode, "family members")
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ShapeError("a family needs at least one member of positive dimension")
        k, n = arr.shape
        if k > n:
            raise FamilyError(f"{k} orthonormal vectors cannot live in dimension {n}")
        if not self.gram_tolerance >= 0:
            raise ValueError("gram_tolerance must be nonnegative")
        labels = tuple(range(k)) if self.labels is None else tuple(self.labels)
        if len(labels) != k:
            raise ShapeError("one label per member is required")
        err = gram_error(arr)
        if err > self.gram_tolerance:
            raise FamilyError(
                f"Gram matrix deviates from the identity by {err:.3e} "
                f"(tolerance {self.gram_tolerance:.1e})"
            )
        object.__setattr__(self, "members", _frozen(arr))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dropped", tuple(self.dropped))

    @classmethod
    def from_vectors(cls, vectors: Sequence[Vector], labels=None,
                     gram_tolerance: float = GRAM_TOLERANCE) -> "OrthonormalFamily":
        vectors = list(vectors)
        if not vectors:
            raise ShapeError("empty family")
        for v in vectors[1:]:
            _check_compatible(vectors[0], v)
        return cls(np.stack([v.coords for v in vectors]), vectors[0].mode,
                   labels, gram_tolerance)

    @property
    def size(self) -> int:
        return self.members.shape[0]

    @property
    def dimension(self) -> int:
        return self.members.shape[1]

    def __len__(self):
        return self.size

    def __getitem__(self, i) -> Vector:
        return Vector(self.members[i], self.mode)

    @property
    def vectors(self) -> list:
        return [self[i] for i in range(self.size)]

    def combine(self, coefficients) -> Vector:
        """Return ``sum_i coefficients[i] * e_i``."""
        c = as_complex_array(coefficients, self.mode, "coefficients")
        if c.shape != (self.size,):
            raise ShapeError(f"expected {self.size} coefficients, got {c.shape}")
        return Vector(c @ self.members, self.mode)


def gram_error(members: np.ndarray) -> float:
    """max_ij |<e_i, e_j> - delta_ij| for the rows of `members`."""
    members = np.asarray(members)
    gram = members.conj() @ members.T
    return float(np.max(np.abs(gram - np.eye(members.shape[0]))))


def canonical_family(dimension: int, indices=None, mode: str = REAL) -> OrthonormalFamily:
    """Standard basis vectors e_j for j in `indices` (all of them by default)."""
    indices = range(dimension) if indices is None else list(indices)
    eye = np.eye(dimension, dtype=np.complex128)
    try:
        members = eye[list(indices)]
    except IndexError:
        raise ShapeError(f"canonical indices {list(indices)} out of range for dimension {dimension}")
    return OrthonormalFamily(members, mode, labels=tuple(indices))


def gram_schmidt(vectors: Sequence[Vector], tolerance: float = GRAM_TOLERANCE) -> OrthonormalFamily:
    """Orthonormalize `vectors` by modified Gram-Schmidt with reorthogonalization.

    A vector whose residual after projection has norm below
    ``tolerance * max(1, |v|)`` is treated as dependent and skipped; its
    position is recorded in ``family.dropped`` and the kept positions become
    the family labels.

    Raises
    ------
    DependenceError
        If no vector survives.
    """
    vectors = list(vectors)
    if not vectors:
        raise ShapeError("gram_schmidt needs at least one vector")
    for v in vectors[1:]:
        _check_compatible(vectors[0], v)
    mode = vectors[0].mode
    basis: list[np.ndarray] = []
    kept, dropped = [], []
    for pos, v in enumerate(vectors):
        w = v.coords.copy()
        scale = max(1.0, float(np.linalg.norm(w)))
        for _ in range(2):
            for q in basis:
                w -= np.vdot(q, w) * q
        r = float(np.linalg.norm(w))
        if r < tolerance * scale or len(basis) == w.size:
            dropped.append(pos)
            continue
        basis.append(w / r)
        kept.append(pos)
    if not basis:
        raise DependenceError("all input vectors are linearly dependent")
    members = np.stack(basis)
    if mode == REAL:
        members = members.real.astype(np.complex128)
    return OrthonormalFamily(members, mode, labels=tuple(kept),
                             gram_tolerance=tolerance, dropped=tuple(dropped))


def fourier_coefficients(x: Vector, family: OrthonormalFamily) -> np.ndarray:
    """The coefficients <x, e_i> in family order."""
    check_family(x, family)
    return family.members.conj() @ x.coords


def check_family(x: Vector, family: OrthonormalFamily) -> None:
    if x.mode != family.mode:
        raise ModeError(f"mode mismatch: vector is {x.mode}, family is {family.mode}")
    if x.dimension != family.dimension:
        raise ShapeError(f"dimension mismatch: vector {x.dimension}, family {family.dimension}")
