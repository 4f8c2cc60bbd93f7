import pytest

from burglary_bounds import compute_all, embedded_reference


@pytest.fixture(scope="session")
def reference():
    return embedded_reference()


@pytest.fixture(scope="session")
def results(reference):
    return compute_all(reference)
