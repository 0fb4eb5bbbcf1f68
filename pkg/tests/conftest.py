import pathlib

import pytest

from tm2net.machine import parse_machine

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def flip_path() -> pathlib.Path:
    return FIXTURES / "flip.tm"


@pytest.fixture(scope="session")
def stub74_path() -> pathlib.Path:
    return FIXTURES / "stub_7x4.tm"


@pytest.fixture(scope="session")
def flip(flip_path):
    return parse_machine(flip_path.read_text())


@pytest.fixture(scope="session")
def stub74(stub74_path):
    return parse_machine(stub74_path.read_text())
