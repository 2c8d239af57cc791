import pytest

from ordloc import gen


@pytest.fixture(scope="session")
def m22():
    return gen.suite_instance("m22")


@pytest.fixture(scope="session")
def m33():
    return gen.suite_instance("m33")


@pytest.fixture(scope="session")
def bowtie():
    return gen.suite_instance("bowtie")


@pytest.fixture(scope="session")
def non_oc():
    return gen.suite_instance("non_oc")


@pytest.fixture(scope="session")
def loc22():
    return gen.em_locale("m22")


@pytest.fixture(scope="session")
def loc33():
    return gen.em_locale("m33")


def grid(space, *pts):
    """Frame element for grid points given as (t, x) tuples."""
    return gen.grid_open(space, list(pts))
