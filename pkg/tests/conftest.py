import pytest

from olsub import TermUniverse


@pytest.fixture
def u():
    return TermUniverse()
