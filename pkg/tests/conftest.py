import numpy as np
import pytest

from orthobound.conditions import BoxBounds
from orthobound.space import OrthonormalFamily, Vector

SEED = 20031

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def cgauss(rng, shape, mode):
    g = rng.standard_normal(shape)
    if mode == "complex":
        g = g + 1j * rng.standard_normal(shape)
    return g


def make_family(rng, n, k, mode="real"):
    """Orthonormal rows from a QR factorization (independent of gram_schmidt)."""
    q, _ = np.linalg.qr(cgauss(rng, (n, k), mode))
    return OrthonormalFamily(q.T.copy(), mode)


def make_box(rng, k, mode="real"):
    lo = cgauss(rng, k, mode)
    return BoxBounds(lo, lo + cgauss(rng, k, mode))


def project_into_ball(rng, family, box, mode="real"):
    """Random point pulled radially into the ball form of the box condition.

    Deliberately written without the library's sampler.
    """
    centre = box.midpoints @ family.members
    radius = 0.5 * np.sqrt(np.sum(np.abs(box.upper - box.lower) ** 2))
    z = cgauss(rng, family.dimension, mode)
    d = np.linalg.norm(z)
    z = z / d * radius * rng.uniform(0.0, 1.0) ** (1 / family.dimension)
    return Vector(centre + z, mode)
