import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ambicap import StateSpace
from ambicap.stock import (
    dual_self_model,
    model_5051,
    model_reflection,
    triangle_model,
)

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def states4() -> StateSpace:
    return StateSpace(("red", "blue", "green", "purple"))


@pytest.fixture(scope="session")
def states3() -> StateSpace:
    return StateSpace(("s1", "s2", "s3"))


@pytest.fixture(scope="session")
def urn_model():
    return model_5051()


@pytest.fixture(scope="session")
def reflection_model():
    return model_reflection()


@pytest.fixture(scope="session")
def slices_model():
    return dual_self_model()


@pytest.fixture(scope="session")
def triangle():
    return triangle_model()


@pytest.fixture
def rng():
    return np.random.default_rng(0)
