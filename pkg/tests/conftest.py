import pytest

from selfcup.grid import grid_groups
from selfcup.perm_group import Perm, PermGroup, symmetric_group


@pytest.fixture(scope="session")
def groups():
    return grid_groups()


@pytest.fixture(scope="session")
def z2():
    return PermGroup(2, [Perm((1, 0))])


@pytest.fixture(scope="session")
def s3():
    return symmetric_group(3)


@pytest.fixture(scope="session")
def s6():
    return symmetric_group(6)
