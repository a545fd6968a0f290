import pytest

from propratio import DesignMoments, Population, SummaryInput


@pytest.fixture
def pop4():
    """Hand-evaluated 4-unit population: P = 0.5, X_bar = 1.5,
    S_p^2 = S_x^2 = S_px = 1/3, rho_pb = 1, C_p^2 = 4/3, C_x^2 = 4/27."""
    return Population.from_values([1, 0, 1, 0], [2.0, 1.0, 2.0, 1.0])


@pytest.fixture
def pop12():
    return Population.from_values(
        [1, 0, 1, 0, 1, 1, 0, 0, 1, 0, 1, 1],
        [2.4, 1.1, 3.0, 0.9, 2.2, 2.9, 1.3, 0.8, 2.0, 1.5, 2.7, 3.3],
    )


@pytest.fixture
def home_summary():
    """The built-in reference study's seven summary statistics."""
    return SummaryInput(
        n=11, N=40, P=0.525, x_bar_pop=14.4, rho_pb=0.897, c_p=0.963, c_x=0.3085
    )


@pytest.fixture
def home_dm(home_summary) -> DesignMoments:
    return home_summary.to_design_moments()
