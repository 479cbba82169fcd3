import logging

import pytest
from hypothesis import settings

from fairteam import paper_example

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# the max-of-additive example is deliberately unnormalized
logging.getLogger("fairteam.core").setLevel(logging.ERROR)


@pytest.fixture(scope="session")
def E1():
    return paper_example("E1")


@pytest.fixture(scope="session")
def E2():
    return paper_example("E2")


@pytest.fixture(scope="session")
def E3():
    return paper_example("E3")
