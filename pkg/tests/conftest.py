import pytest

from spincarnot import Bath, EngineParams


def make_params(t_cold=12.9, gamma=0.005, t_hot=25.8, r_hot=2.0, r_cold=1.8,
                delta_a=5.0, delta_b=3.0):
    return EngineParams(
        hot=Bath(t_hot, r_hot),
        cold=Bath(t_cold, r_cold),
        delta_a=delta_a,
        delta_b=delta_b,
        gamma=gamma,
    )


@pytest.fixture(scope="session")
def ref_params():
    """Reference configuration: the mid-sweep cold temperature 12.9 meV."""
    return make_params()


@pytest.fixture(scope="session")
def ref_optimum(ref_params):
    from spincarnot import maximize_power

    return maximize_power(ref_params)
