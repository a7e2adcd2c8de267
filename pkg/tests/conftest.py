import pytest

from platemwr.config import load_problem
from platemwr.model import LoadSpec, MaterialSpec, PlateProblem, PlateRect, SolverSettings, full_edges


def table1(order=12, **kw) -> PlateProblem:
    """Clamped 0.25 x 0.5 m steel sheet, 0.1 mm thick, 0.8 Pa."""
    return PlateProblem(MaterialSpec.isotropic(210e9, 0.3, 0.1e-3), PlateRect(0.25, 0.5),
                        full_edges(), (LoadSpec.uniform(0.8),), settings=SolverSettings(order=order, **kw))


def ss_square(order=12, nu=0.3) -> PlateProblem:
    """Simply supported unit square with unit flexural rigidity and unit load."""
    E = 12.0 * (1 - nu**2)
    return PlateProblem(MaterialSpec.isotropic(E, nu, 1.0), PlateRect(1.0, 1.0),
                        full_edges(*["simply_supported"] * 4), (LoadSpec.uniform(1.0),),
                        settings=SolverSettings(order=order))


@pytest.fixture
def table1_problem():
    return table1()


@pytest.fixture(scope="session")
def bookcase():
    return load_problem("bookcase")


@pytest.fixture(scope="session")
def glass_table():
    return load_problem("glass_table")


@pytest.fixture(scope="session")
def gripper():
    return load_problem("gripper_finger")
