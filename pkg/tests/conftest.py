import pytest

from multisect.constructions import bisection_from_heegaard, lens_diagram


@pytest.fixture(scope="session")
def lens21():
    return lens_diagram(2, 1)


@pytest.fixture(scope="session")
def lens21_bisection(lens21):
    return bisection_from_heegaard(lens21)
