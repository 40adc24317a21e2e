import numpy as np
import pytest

from rivote.core import UtilitySpec
from rivote.election import profile_belief
from rivote.presets import build, example3_scenario, figure2_scenario, figure3_scenario, table1_scenario


@pytest.fixture(scope="session")
def abs_spec():
    return UtilitySpec(family="absolute")


@pytest.fixture(scope="session")
def quad_spec():
    return UtilitySpec(family="quadratic")


def two_level_belief(spec, a1, a2, t, probs=(0.5, 0.5)):
    """Belief over the four profiles of two equiprobable (by default) levels."""
    p = np.asarray(probs, dtype=float)
    return profile_belief(spec, (a1, a2), np.outer(p, p), t)


@pytest.fixture(scope="session")
def table_belief(abs_spec):
    """Factory for the benchmark two-level belief (levels .01 and .4)."""
    return lambda t: two_level_belief(abs_spec, 0.01, 0.4, t)


@pytest.fixture(scope="session")
def figure2():
    return build(figure2_scenario())


@pytest.fixture(scope="session")
def table1():
    return build(table1_scenario())


@pytest.fixture()
def figure3_factory():
    return lambda xi, **kw: build(figure3_scenario(xi, **kw))


@pytest.fixture()
def example3_factory():
    return lambda eta, **kw: build(example3_scenario(eta, **kw))
