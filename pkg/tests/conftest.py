import numpy as np
import pytest

import inbody as ib


def hrep(A, b):
    return ib.validate_body(ib.HalfspaceSystem(np.asarray(A, float),
                                               np.asarray(b, float)))


def box(n, lo=0.0, hi=1.0):
    A = np.vstack([np.eye(n), -np.eye(n)])
    b = np.concatenate([np.full(n, hi), np.full(n, -lo)])
    return hrep(A, b)


@pytest.fixture(scope="session")
def unit_square():
    return box(2)


@pytest.fixture(scope="session")
def unit_cube():
    return box(3)


@pytest.fixture(scope="session")
def triangle():
    # right triangle (0,0), (1,0), (0,1)
    return hrep([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]], [0.0, 0.0, 1.0])


@pytest.fixture(scope="session")
def simplex3():
    # {x_i >= 0, sum x <= 1} in R^3
    return hrep(np.vstack([-np.eye(3), np.ones(3)]), [0.0, 0.0, 0.0, 1.0])


@pytest.fixture(scope="session")
def regular_tetrahedron():
    pts = np.array([[1.0, 1.0, 1.0], [1.0, -1.0, -1.0],
                    [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]])
    return ib.convex_hull(ib.VertexSet(pts))


@pytest.fixture(scope="session")
def small_suite():
    """A quick random batch per dimension for module-level property tests."""
    return {n: ib.random_suite(n, 25, seed=1000 + n) for n in (2, 3, 4)}
