import pytest

from sosxxz import bethe as bt
from sosxxz.params import generic_params


@pytest.fixture(scope="session")
def p1():
    return generic_params(1)


@pytest.fixture(scope="session")
def p2():
    return generic_params(2)


@pytest.fixture(scope="session")
def p3():
    return generic_params(3)


@pytest.fixture(scope="session")
def constrained2():
    """N = 2 parameters satisfying the boundary constraints at s = 0."""
    return bt.apply_constraints(generic_params(2), bt.BoundaryConstraint(s=0))


@pytest.fixture(scope="session")
def constrained3():
    """N = 3 parameters satisfying the boundary constraints at s = 1."""
    return bt.apply_constraints(generic_params(3), bt.BoundaryConstraint(s=1))
