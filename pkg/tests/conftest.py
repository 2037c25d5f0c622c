import pytest

from redblue import data
from redblue.campaign.scenario import load_scenario
from redblue.playbook import load_playbook


@pytest.fixture(scope="session")
def default_playbook_text():
    return data.default_playbook_text()


@pytest.fixture(scope="session")
def default_playbook(default_playbook_text):
    result = load_playbook(default_playbook_text)
    assert result.ok, [d.render() for d in result.diagnostics]
    return result.playbook


@pytest.fixture()
def default_scenario():
    return load_scenario(data.default_scenario_dict())


@pytest.fixture()
def single_pause_scenario():
    return load_scenario(data.single_pause_scenario_dict())
