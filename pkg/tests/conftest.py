import pytest

from nfbeamscope.experiments import reference_layouts


@pytest.fixture(scope="session")
def layouts():
    return reference_layouts()
