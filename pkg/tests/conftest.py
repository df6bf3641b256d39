from pathlib import Path

import pytest

from convnc import GF, parse_document

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name):
    return parse_document((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def gf2():
    return GF(2)


@pytest.fixture(scope="session")
def gf4():
    return GF(4)


@pytest.fixture(scope="session")
def gf5():
    return GF(5)


@pytest.fixture(scope="session")
def cyclic_feasible():
    return load_fixture("cyclic_feasible.cnc").instance


@pytest.fixture(scope="session")
def overlapping_cycles():
    return load_fixture("overlapping_cycles.cnc").instance


@pytest.fixture(scope="session")
def mixing_ring():
    return load_fixture("mixing_ring.cnc").instance


@pytest.fixture(scope="session")
def delayed_merge():
    return load_fixture("delayed_merge.cnc").instance


@pytest.fixture(scope="session")
def parallel_delay0():
    return load_fixture("parallel_delay0.cnc")
