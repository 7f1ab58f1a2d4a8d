import json
from importlib import resources

import pytest

from levopt.scenario import load_scenario


def _bundled(name: str) -> str:
    return (resources.files("levopt") / "scenarios" / f"{name}.json").read_text(
        encoding="utf-8")


@pytest.fixture(scope="session")
def kiesel_text() -> str:
    return _bundled("kiesel")


@pytest.fixture(scope="session")
def gieseler_text() -> str:
    return _bundled("gieseler")


@pytest.fixture(scope="session")
def kiesel(kiesel_text):
    return load_scenario(kiesel_text)


@pytest.fixture(scope="session")
def gieseler(gieseler_text):
    return load_scenario(gieseler_text)


@pytest.fixture()
def kiesel_doc(kiesel_text) -> dict:
    return json.loads(kiesel_text)
