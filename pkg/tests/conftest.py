import pytest

from helpers import relay_network, relay_records


@pytest.fixture
def relay_net():
    return relay_network()


@pytest.fixture
def relay_record_list():
    return relay_records()
