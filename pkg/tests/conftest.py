import pytest

from micg.scenario import build_link, load_scenario


@pytest.fixture(scope="session")
def bundled_scenario():
    return load_scenario("paper_position1")


@pytest.fixture(scope="session")
def bundled_link(bundled_scenario):
    """Build a LinkConfig for the bundled scenario."""

    def make(position="position1", receiver_mode="multi", **kw):
        return build_link(bundled_scenario, position, receiver_mode, **kw)

    return make
